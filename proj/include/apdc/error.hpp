#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apdc {

enum class ErrorCode {
  not_allocated,
  invalid_allocation,
  invalid_instance,
  invalid_order,
  instance_too_large,
  no_iterations,
  no_orders,
  invalid_config,
  unknown_lemma,
  invalid_params,
  empty_input,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_allocated: return "not-allocated";
    case ErrorCode::invalid_allocation: return "invalid-allocation";
    case ErrorCode::invalid_instance: return "invalid-instance";
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::instance_too_large: return "instance-too-large";
    case ErrorCode::no_iterations: return "no-iterations";
    case ErrorCode::no_orders: return "no-orders";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::unknown_lemma: return "unknown-lemma";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::empty_input: return "empty-input";
  }
  return "unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace apdc
