#pragma once

// Synthetic instances, the generate -> prune -> solve pipeline and CSV
// reports.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "apdc/color_coding.hpp"
#include "apdc/error.hpp"
#include "apdc/exact.hpp"
#include "apdc/model.hpp"
#include "apdc/parallel.hpp"
#include "apdc/prune.hpp"
#include "apdc/rng.hpp"
#include "apdc/sorted_dp.hpp"

namespace apdc {

inline const std::vector<double>& default_lambda_table() {
  static const std::vector<double> table = {1.0, 0.71, 0.56, 0.53, 0.49, 0.47, 0.44, 0.44, 0.43, 0.43};
  return table;
}

// First K entries of the default table; past the tenth slot the last value repeats.
inline std::vector<double> default_lambdas(std::size_t k) {
  const auto& t = default_lambda_table();
  std::vector<double> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(i < t.size() ? t[i] : t.back());
  return out;
}

struct ContinuationDist {
  enum class Kind { uniform, beta, constant } kind = Kind::uniform;
  double a = 0.0;  // uniform: low, beta: alpha, constant: value
  double b = 1.0;  // uniform: high, beta: beta
};

struct GeneratorConfig {
  std::size_t n = 100;
  std::size_t k = 5;
  // Per-ad mean value ~ LogNormal(mean_mu, mean_sigma); sd = std_ratio * mean.
  double mean_mu = 0.0;
  double mean_sigma = 0.5;
  double std_ratio = 0.3;
  double quality_alpha = 2.0;
  double quality_beta = 5.0;
  ContinuationDist continuation;
  std::optional<std::vector<double>> lambdas;  // default table otherwise
  std::uint64_t seed = 0;
};

inline void validate(const GeneratorConfig& c) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_config, what); };
  if (c.k < 1 || c.n < c.k) bad("need N >= K >= 1");
  if (!(c.mean_sigma >= 0.0) || !std::isfinite(c.mean_mu)) bad("invalid mean distribution");
  if (!(c.std_ratio > 0.0)) bad("std_ratio must be > 0");
  if (!(c.quality_alpha > 0.0 && c.quality_beta > 0.0)) bad("quality beta parameters must be > 0");
  const auto& d = c.continuation;
  switch (d.kind) {
    case ContinuationDist::Kind::uniform:
      if (!(0.0 <= d.a && d.a <= d.b && d.b <= 1.0)) bad("continuation range must satisfy 0 <= low <= high <= 1");
      break;
    case ContinuationDist::Kind::beta:
      if (!(d.a > 0.0 && d.b > 0.0)) bad("continuation beta parameters must be > 0");
      break;
    case ContinuationDist::Kind::constant:
      if (!(0.0 <= d.a && d.a <= 1.0)) bad("constant continuation must lie in [0,1]");
      break;
  }
  if (c.lambdas) {
    if (c.lambdas->size() != c.k && c.lambdas->size() + 1 != c.k) bad("lambdas must have K or K-1 entries");
    for (double l : *c.lambdas)
      if (!(0.0 <= l && l <= 1.0)) bad("lambdas must lie in [0,1]");
  }
}

// Deterministic in the config (seed included).
inline AuctionInstance generate_instance(const GeneratorConfig& config) {
  validate(config);
  Xoshiro256 rng(config.seed);
  std::vector<Ad> ads;
  ads.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    Ad ad;
    ad.id = static_cast<AdId>(i + 1);
    const double mean = rng.lognormal(config.mean_mu, config.mean_sigma);
    ad.value = rng.truncated_normal(mean, config.std_ratio * mean, 0.0);
    ad.quality = rng.beta(config.quality_alpha, config.quality_beta);
    const auto& d = config.continuation;
    switch (d.kind) {
      case ContinuationDist::Kind::uniform: ad.continuation = d.a + (d.b - d.a) * rng.uniform(); break;
      case ContinuationDist::Kind::beta: ad.continuation = rng.beta(d.a, d.b); break;
      case ContinuationDist::Kind::constant: ad.continuation = d.a; break;
    }
    ads.push_back(ad);
  }
  return AuctionInstance(std::move(ads), SlotLadder(config.k, config.lambdas.value_or(default_lambdas(config.k))));
}

enum class Algorithm { prune, exact, colored, sorted };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::prune: return "prune";
    case Algorithm::exact: return "exact";
    case Algorithm::colored: return "colored";
    case Algorithm::sorted: return "sorted";
  }
  return "?";
}

inline Algorithm algorithm_from_string(std::string_view s) {
  if (s == "prune") return Algorithm::prune;
  if (s == "exact") return Algorithm::exact;
  if (s == "colored") return Algorithm::colored;
  if (s == "sorted") return Algorithm::sorted;
  throw Error(ErrorCode::invalid_params, "unknown algorithm '" + std::string(s) + "'");
}

struct BenchRecord {
  std::string algorithm;
  std::size_t n = 0;  // before pruning
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  double wall_ms = 0.0;
  std::optional<double> value;
  std::optional<double> ratio;  // value / reference
  bool reference_exact = false;
  std::optional<std::size_t> surviving;
  bool inline_ok = true;  // pruning kept the optimum and ratio <= 1
};

struct PipelineOptions {
  std::size_t repetitions = 5;  // timing is the median over these
  unsigned threads = 1;         // trials in parallel
  std::size_t exact_cap = 80;   // post-prune N up to which the exact reference runs
  std::uint64_t exact_node_budget = 200'000'000;
  std::size_t safety_check_max_n = 12;  // compare optimum before/after pruning up to this N
  std::optional<std::size_t> color_iterations;
  std::optional<std::size_t> random_orders;
  bool append_named_orders = true;  // natural and reverse-natural orders join the random ones
};

namespace detail {

template <typename Fn>
double median_ms(std::size_t reps, Fn&& fn) {
  std::vector<double> times;
  for (std::size_t r = 0; r < std::max<std::size_t>(reps, 1); ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    times.push_back(dt.count());
  }
  std::sort(times.begin(), times.end());
  const std::size_t m = times.size();
  return m % 2 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
}

inline std::vector<BenchRecord> run_trial(const GeneratorConfig& base, const std::vector<Algorithm>& algorithms,
                                          std::size_t trial, const PipelineOptions& opts) {
  GeneratorConfig cfg = base;
  cfg.seed = derive_seed(base.seed, trial);
  const AuctionInstance inst = generate_instance(cfg);

  PruneResult pruned;
  const double prune_ms = median_ms(opts.repetitions, [&] { pruned = prune_instance(inst); });
  const AuctionInstance& reduced = pruned.reduced;

  bool safe = true;
  if (inst.num_ads() <= opts.safety_check_max_n) {
    const double before = solve_exact(inst).best_value;
    safe = std::abs(before - solve_exact(reduced).best_value) <= 1e-12 * std::max(1.0, before);
  }

  std::vector<BenchRecord> out;
  std::optional<double> reference;
  bool reference_exact = false;
  if (reduced.num_ads() <= opts.exact_cap) {
    ExactOptions eo;
    eo.node_budget = opts.exact_node_budget;
    const auto r = solve_exact(reduced, eo);
    if (r.complete) {
      reference = r.best_value;
      reference_exact = true;
    }
  }

  for (Algorithm a : algorithms) {
    BenchRecord rec;
    rec.algorithm = std::string(to_string(a));
    rec.n = inst.num_ads();
    rec.k = inst.num_slots();
    rec.seed = cfg.seed;
    rec.trial = trial;
    rec.inline_ok = safe;
    switch (a) {
      case Algorithm::prune:
        rec.wall_ms = prune_ms;
        rec.surviving = reduced.num_ads();
        break;
      case Algorithm::exact: {
        ExactOptions eo;
        eo.node_budget = opts.exact_node_budget;
        OracleResult r;
        rec.wall_ms = median_ms(opts.repetitions, [&] { r = solve_exact(reduced, eo); });
        rec.value = r.best_value;
        break;
      }
      case Algorithm::colored: {
        ColorCodingOptions co;
        co.iterations = opts.color_iterations;
        co.seed = cfg.seed;
        ColorPassResult r;
        rec.wall_ms = median_ms(opts.repetitions, [&] { r = colored_ads(reduced, co); });
        rec.value = r.value;
        break;
      }
      case Algorithm::sorted: {
        MultiOrderOptions mo;
        mo.random_orders = opts.random_orders.value_or(default_order_count(reduced.num_slots()));
        mo.seed = cfg.seed;
        if (opts.append_named_orders)
          mo.extra_orders.push_back(reverse_natural_order(reduced));
        else
          mo.include_natural = false;
        SortedDpResult r;
        rec.wall_ms = median_ms(opts.repetitions, [&] { r = multi_order_approx(reduced, mo); });
        rec.value = r.value;
        break;
      }
    }
    out.push_back(std::move(rec));
  }

  if (!reference) {
    for (const auto& r : out)
      if (r.value && (!reference || *r.value > *reference)) reference = r.value;
  }
  for (auto& r : out) {
    if (!r.value || !reference) continue;
    r.reference_exact = reference_exact;
    r.ratio = *reference > 0.0 ? *r.value / *reference : 1.0;
    if (reference_exact && *r.ratio > 1.0 + 1e-9) r.inline_ok = false;
  }
  return out;
}

}  // namespace detail

inline std::vector<BenchRecord> run_pipeline(const GeneratorConfig& config, const std::vector<Algorithm>& algorithms,
                                             std::size_t trials, const PipelineOptions& opts = {}) {
  if (algorithms.empty()) throw Error(ErrorCode::invalid_params, "no algorithms requested");
  validate(config);
  std::vector<std::vector<BenchRecord>> per_trial(trials);
  parallel_for(trials, opts.threads,
               [&](std::size_t t) { per_trial[t] = detail::run_trial(config, algorithms, t, opts); });
  std::vector<BenchRecord> out;
  for (auto& v : per_trial)
    for (auto& r : v) out.push_back(std::move(r));
  return out;
}

namespace detail {

inline std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

template <typename T>
std::string opt(const std::optional<T>& x) {
  if (!x) return "";
  if constexpr (std::is_floating_point_v<T>)
    return num(*x);
  else
    return std::to_string(*x);
}

struct Summary {
  double mean = 0.0, median = 0.0, min = 0.0;
};

inline std::optional<Summary> summarize(std::vector<double> xs) {
  if (xs.empty()) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  Summary s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  const std::size_t m = xs.size();
  s.median = m % 2 ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
  s.min = xs.front();
  return s;
}

}  // namespace detail

inline constexpr std::string_view kRecordHeader =
    "algorithm,n,k,seed,trial,wall_ms,value,ratio,reference_exact,surviving,inline_ok";
inline constexpr std::string_view kAggregateHeader =
    "algorithm,n,k,count,ratio_mean,ratio_median,ratio_min,wall_ms_mean,wall_ms_median,wall_ms_min,"
    "surviving_mean,surviving_median,surviving_min";

// One row per record, then aggregates per (algorithm, N, K) in sorted key order.
inline void emit_report(const std::vector<BenchRecord>& records, std::ostream& csv, std::ostream& aggregate) {
  if (records.empty()) throw Error(ErrorCode::empty_input, "no records to report");
  using detail::num;
  using detail::opt;
  csv << kRecordHeader << '\n';
  for (const auto& r : records)
    csv << r.algorithm << ',' << r.n << ',' << r.k << ',' << r.seed << ',' << r.trial << ',' << num(r.wall_ms) << ','
        << opt(r.value) << ',' << opt(r.ratio) << ',' << (r.reference_exact ? 1 : 0) << ',' << opt(r.surviving) << ','
        << (r.inline_ok ? 1 : 0) << '\n';

  struct Bucket {
    std::vector<double> ratio, time, surviving;
    std::size_t count = 0;
  };
  std::map<std::tuple<std::string, std::size_t, std::size_t>, Bucket> buckets;
  for (const auto& r : records) {
    auto& b = buckets[{r.algorithm, r.n, r.k}];
    ++b.count;
    b.time.push_back(r.wall_ms);
    if (r.ratio) b.ratio.push_back(*r.ratio);
    if (r.surviving) b.surviving.push_back(static_cast<double>(*r.surviving));
  }
  aggregate << kAggregateHeader << '\n';
  auto put = [&](const std::optional<detail::Summary>& s) {
    if (s)
      aggregate << ',' << num(s->mean) << ',' << num(s->median) << ',' << num(s->min);
    else
      aggregate << ",,,";
  };
  for (const auto& [key, b] : buckets) {
    aggregate << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ',' << b.count;
    put(detail::summarize(b.ratio));
    put(detail::summarize(b.time));
    put(detail::summarize(b.surviving));
    aggregate << '\n';
  }
}

// Records failing an inline check.
inline std::size_t count_inline_failures(const std::vector<BenchRecord>& records) {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const BenchRecord& r) { return !r.inline_ok; }));
}

}  // namespace apdc
