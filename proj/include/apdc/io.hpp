#pragma once

// JSON and CSV I/O for instances, bid profiles and results.
//
//   instance: {"K": 3, "lambdas": [1.0, 0.7], "ads": [{"id": 1, "v": 2.0, "q": 0.3, "c": 0.8}, ...]}
//   bids:     {"bids": [{"id": 1, "bid": 1.5}, ...]}

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "json.hpp"

#include "apdc/error.hpp"
#include "apdc/mechanisms.hpp"
#include "apdc/model.hpp"
#include "apdc/prune.hpp"

namespace apdc::io {

using nlohmann::json;

namespace detail {

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::invalid_instance, where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw Error(ErrorCode::invalid_instance, where + "." + key + ": missing");
  return *it;
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number()) throw Error(ErrorCode::invalid_instance, where + "." + key + ": expected a number");
  return v.get<double>();
}

inline AdId integer_id(const json& obj, const std::string& where) {
  const json& v = field(obj, "id", where);
  if (!v.is_number_integer()) throw Error(ErrorCode::invalid_instance, where + ".id: expected an integer");
  return v.get<AdId>();
}

}  // namespace detail

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::invalid_instance,
                source + ":" + std::to_string(detail::line_of(text, e.byte)) + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_instance, path + ": cannot open");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline AuctionInstance instance_from_json(const json& j) {
  const json& k_field = detail::field(j, "K", "instance");
  if (!k_field.is_number_integer() || k_field.get<long long>() < 1)
    throw Error(ErrorCode::invalid_instance, "instance.K: expected a positive integer");
  const auto k = k_field.get<std::size_t>();
  const json& lam = detail::field(j, "lambdas", "instance");
  if (!lam.is_array()) throw Error(ErrorCode::invalid_instance, "instance.lambdas: expected an array");
  std::vector<double> lambdas;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!lam[i].is_number())
      throw Error(ErrorCode::invalid_instance, "instance.lambdas[" + std::to_string(i) + "]: expected a number");
    lambdas.push_back(lam[i].get<double>());
  }
  const json& arr = detail::field(j, "ads", "instance");
  if (!arr.is_array()) throw Error(ErrorCode::invalid_instance, "instance.ads: expected an array");
  std::vector<Ad> ads;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "ads[" + std::to_string(i) + "]";
    ads.push_back(Ad{detail::integer_id(arr[i], where), detail::number(arr[i], "v", where),
                     detail::number(arr[i], "q", where), detail::number(arr[i], "c", where)});
  }
  return AuctionInstance(std::move(ads), SlotLadder(k, std::move(lambdas)));
}

inline json to_json(const AuctionInstance& inst) {
  json ads = json::array();
  for (const Ad& ad : inst.ads()) ads.push_back({{"id", ad.id}, {"v", ad.value}, {"q", ad.quality}, {"c", ad.continuation}});
  return {{"K", inst.num_slots()}, {"lambdas", inst.ladder().lambdas()}, {"ads", ads}};
}

inline AuctionInstance load_instance(const std::string& path) {
  return instance_from_json(parse_text(read_file(path), path));
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_params, path + ": cannot write");
  out << text;
}

// Every ad of the instance needs exactly one bid.
inline BidProfile bids_from_json(const json& j, const AuctionInstance& inst) {
  const json& arr = detail::field(j, "bids", "bids");
  if (!arr.is_array()) throw Error(ErrorCode::invalid_params, "bids.bids: expected an array");
  BidProfile p;
  p.bids.assign(inst.num_ads(), 0.0);
  std::vector<char> seen(inst.num_ads(), 0);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "bids[" + std::to_string(i) + "]";
    const AdId id = detail::integer_id(arr[i], where);
    const auto idx = inst.index_of(id);
    if (!idx) throw Error(ErrorCode::invalid_params, where + ".id: unknown ad " + std::to_string(id));
    if (seen[*idx]) throw Error(ErrorCode::invalid_params, where + ".id: duplicate bid for ad " + std::to_string(id));
    seen[*idx] = 1;
    p.bids[*idx] = detail::number(arr[i], "bid", where);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw Error(ErrorCode::invalid_params, "bids: missing bid for ad " + std::to_string(inst.ad(i).id));
  return p;
}

inline BidProfile load_bids(const std::string& path, const AuctionInstance& inst) {
  return bids_from_json(parse_text(read_file(path), path), inst);
}

inline json to_json(const BidProfile& bids, const AuctionInstance& inst) {
  json arr = json::array();
  for (std::size_t i = 0; i < inst.num_ads(); ++i) arr.push_back({{"id", inst.ad(i).id}, {"bid", bids.bids[i]}});
  return {{"bids", arr}};
}

inline json to_json(const Allocation& a) { return {{"slots", a.slots}, {"right_aligned", a.right_aligned}}; }

inline json to_json(const DominanceReport& r) {
  return {{"ids", r.ids},
          {"dom_counts", r.dom_counts},
          {"surviving", r.surviving},
          {"discarded", r.discarded},
          {"bound_used", {{"lambda_max", r.bound_used.lambda_max}, {"bound", r.bound_used.bound}}},
          {"bound_history", r.bound_history},
          {"iterations", r.iterations},
          {"fast_fell_back", r.fast_fell_back}};
}

inline json to_json(const MechanismOutcome& o, const AuctionInstance& inst) {
  json agents = json::array();
  for (std::size_t i = 0; i < inst.num_ads(); ++i) {
    json a = {{"id", inst.ad(i).id}, {"payment", o.payments[i]}, {"utility", o.utilities[i]}};
    a["per_click"] = o.per_click[i] ? json(*o.per_click[i]) : json(nullptr);
    agents.push_back(a);
  }
  return {{"allocation", o.alloc.slots}, {"agents", agents}, {"revenue", o.revenue}, {"sw", o.sw}};
}

}  // namespace apdc::io
