// Acceptance suite. `apdc_acceptance` runs every criterion, `apdc_acceptance 3`
// runs one. Each criterion prints a single PASS/WARN/FAIL line; the exit code
// is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "apdc/apdc.hpp"
#include "support/oracles.hpp"

using namespace apdc;

namespace {

enum class Verdict { pass, warn, fail };

struct Outcome {
  Verdict verdict = Verdict::pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

Outcome check(bool ok, std::string detail) { return {ok ? Verdict::pass : Verdict::fail, std::move(detail)}; }

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

// 1. colored and all-orders sorted reproduce the brute-force optimum.
Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  Xoshiro256 rng(1001);
  int mismatches = 0;
  std::string first;
  for (int t = 0; t < 500; ++t) {
    const auto inst = oracle::random_instance(rng);
    const double opt = oracle::best_allocation(inst).value;

    ColorCodingOptions co;
    co.iterations = static_cast<std::size_t>(std::ceil(50.0 * std::exp(static_cast<double>(inst.num_slots()))));
    co.seed = derive_seed(11, static_cast<std::uint64_t>(t));
    co.threads = default_threads();
    const double colored = colored_ads(inst, co).value;
    bool ok = near(colored, opt);

    if (inst.num_ads() <= 6) {
      MultiOrderOptions mo;
      mo.include_natural = false;
      auto perm = oracle::identity(inst.num_ads());
      do {
        AdOrder o;
        for (std::size_t i : perm) o.ids.push_back(inst.ad(i).id);
        mo.extra_orders.push_back(std::move(o));
      } while (std::next_permutation(perm.begin(), perm.end()));
      ok = ok && near(multi_order_approx(inst, mo).value, opt);
    }
    if (!ok && mismatches++ == 0) first = " (first at instance " + std::to_string(t) + ")";
  }
  const double secs = seconds_since(t0);
  return check(mismatches == 0 && secs < 120.0,
               "oracle equivalence: " + std::to_string(mismatches) + "/500 mismatches" + first + ", " + fmt(secs) +
                   " s (limit 120 s)");
}

// 2. pruning never changes the exact optimum.
Outcome prune_safety() {
  const auto t0 = Clock::now();
  Xoshiro256 rng(1002);
  int changed = 0;
  for (int t = 0; t < 500; ++t) {
    oracle::RandomSpec spec;
    spec.max_n = 12;
    spec.max_k = 4;
    const auto inst = oracle::random_instance(rng, spec);
    const auto pruned = prune_instance(inst);
    if (solve_exact(inst).best_value != solve_exact(pruned.reduced).best_value) ++changed;
  }
  const double secs = seconds_since(t0);
  return check(changed == 0 && secs < 60.0, "prune safety: " + std::to_string(changed) +
                                                "/500 optima changed, " + fmt(secs) + " s (limit 60 s)");
}

// 3. default-iteration color coding hits the optimum at least 45% of the time.
Outcome color_success_rate() {
  const auto t0 = Clock::now();
  Xoshiro256 rng(1003);
  int hits = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    oracle::RandomSpec spec;
    spec.min_n = 8;
    spec.max_n = 8;
    spec.special_share = 0.0;
    auto inst = oracle::random_instance(rng, spec);
    std::vector<double> lambdas(3);
    for (auto& l : lambdas) l = rng.uniform();
    inst = inst.with_ladder(SlotLadder(3, lambdas));
    ColorCodingOptions co;
    co.seed = derive_seed(13, static_cast<std::uint64_t>(t));
    if (default_color_iterations(3) != 14) return {Verdict::fail, "color success: default R is not 14"};
    if (near(colored_ads(inst, co).value, oracle::best_allocation(inst).value)) ++hits;
  }
  const double rate = static_cast<double>(hits) / trials;
  const double secs = seconds_since(t0);
  return check(rate >= 0.45 && secs < 60.0,
               "color success: rate " + fmt(rate) + " over 1000 trials (need >= 0.45), " + fmt(secs) + " s");
}

// 4. any order is half-optimal under a constant ladder; natural order is optimal at lambda = 1.
Outcome half_bound() {
  Xoshiro256 rng(1004);
  int violations = 0, unit_instances = 0;
  double worst = 1.0;
  for (int t = 0; t < 2000; ++t) {
    oracle::RandomSpec spec;
    spec.constant_lambda = true;
    spec.lambda_one_share = 0.25;
    const auto inst = oracle::random_instance(rng, spec);
    const double opt = oracle::best_allocation(inst).value;
    if (opt == 0.0) continue;
    std::vector<AdOrder> orders = {reverse_natural_order(inst)};
    for (std::uint64_t i = 0; i < 20; ++i) orders.push_back(random_order(inst, 14, static_cast<std::uint64_t>(t) * 20 + i));
    for (const auto& o : orders) {
      const double ratio = sorted_ads(inst, o).value / opt;
      worst = std::min(worst, ratio);
      if (ratio < 0.5 - 1e-12) ++violations;
    }
    const bool unit = inst.num_slots() == 1 || inst.ladder().lambda(0) == 1.0;
    if (unit && inst.num_slots() > 1) {
      ++unit_instances;
      if (!near(sorted_ads(inst, natural_order(inst)).value / opt, 1.0)) ++violations;
    }
  }
  return check(violations == 0, "half bound: " + std::to_string(violations) + " violations, worst ratio " +
                                     fmt(worst) + ", " + std::to_string(unit_instances) + " unit-ladder instances");
}

// 5. every catalog entry passes its assertions.
Outcome lemma_catalog() {
  int failed = 0, total = 0;
  std::string names;
  for (const auto& name : lemma_names()) {
    const std::vector<double> eps = lemma_uses_eps(name) ? std::vector<double>{0.5, 0.1, 0.01} : std::vector<double>{0.1};
    bool bad = false;
    for (double e : eps) {
      LemmaParams p;
      p.eps = e;
      for (const auto& r : verify(lemma_instance(name, p))) {
        ++total;
        if (!r.passed) {
          ++failed;
          bad = true;
        }
      }
    }
    if (bad) names += (names.empty() ? "" : ", ") + name;
  }
  return check(failed == 0, "lemma catalog: " + std::to_string(failed) + "/" + std::to_string(total) +
                                " assertions failed" + (names.empty() ? "" : " [" + names + "]"));
}

// 6. no profitable misreport on a 21-point grid.
Outcome truthfulness() {
  Xoshiro256 rng(1006);
  int violations = 0, checks = 0;
  for (AllocatorKind kind : {AllocatorKind::exact, AllocatorKind::colored, AllocatorKind::sorted}) {
    for (int t = 0; t < 100; ++t) {
      oracle::RandomSpec spec;
      spec.max_n = 6;
      const auto inst = oracle::random_instance(rng, spec);
      VcgApdcOptions o;
      o.allocator = kind;
      o.seed = derive_seed(16, static_cast<std::uint64_t>(t));
      std::vector<std::vector<double>> grids;
      for (const Ad& ad : inst.ads()) {
        std::vector<double> g;
        for (int j = 0; j <= 20; ++j) g.push_back(2.0 * ad.value * j / 20.0);
        grids.push_back(std::move(g));
      }
      ++checks;
      if (!is_nash(inst, BidProfile::truthful(inst), vcg_apdc_mechanism(o), grids, 1e-9, default_threads()).nash)
        ++violations;
    }
  }
  return check(violations == 0, "truthfulness: " + std::to_string(violations) + "/" + std::to_string(checks) +
                                    " instances with a profitable grid misreport");
}

// 7. wall-clock targets at K = 5, N = 1000.
Outcome performance() {
  GeneratorConfig cfg;
  cfg.n = 1000;
  cfg.k = 5;
  cfg.seed = 1007;
  PipelineOptions po;
  po.repetitions = 5;
  const auto recs = run_pipeline(cfg, {Algorithm::prune, Algorithm::colored, Algorithm::sorted}, 3, po);
  double prune_ms = 0, colored_ms = 0, sorted_ms = 0;
  for (const auto& r : recs) {
    double& slot = r.algorithm == "prune" ? prune_ms : r.algorithm == "colored" ? colored_ms : sorted_ms;
    slot = std::max(slot, r.wall_ms);
  }
  const struct {
    const char* name;
    double ms, target;
  } rows[] = {{"prune", prune_ms, 200.0}, {"colored", colored_ms, 1000.0}, {"sorted", sorted_ms, 100.0}};
  Verdict v = Verdict::pass;
  std::string detail = "performance (worst median of 3 instances):";
  for (const auto& row : rows) {
    if (row.ms >= 10.0 * row.target)
      v = Verdict::fail;
    else if (row.ms >= row.target && v == Verdict::pass)
      v = Verdict::warn;
    detail += std::string(" ") + row.name + " " + fmt(row.ms) + " ms (target " + fmt(row.target) + ")";
  }
  return {v, detail};
}

std::vector<BenchRecord> scale_records(std::size_t n) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.k = 5;
  cfg.seed = 1008;
  PipelineOptions po;
  po.repetitions = 1;
  po.threads = default_threads();
  po.append_named_orders = false;
  return run_pipeline(cfg, {Algorithm::prune, Algorithm::sorted}, 20, po);
}

// 8. sorted-ads ratio against the exact optimum of the pruned instance.
Outcome approximation_quality() {
  std::string detail = "approximation quality:";
  bool ok = true;
  for (std::size_t n : {100u, 1000u}) {
    double sum = 0.0, worst = 1.0;
    int count = 0, inexact = 0;
    for (const auto& r : scale_records(n)) {
      if (r.algorithm != "sorted") continue;
      if (!r.ratio || !r.reference_exact) {
        ++inexact;
        continue;
      }
      sum += *r.ratio;
      worst = std::min(worst, *r.ratio);
      ++count;
    }
    const double mean = count ? sum / count : 0.0;
    ok = ok && inexact == 0 && mean >= 0.98 && worst >= 0.95;
    detail += " N=" + std::to_string(n) + " mean " + fmt(mean, 6) + " min " + fmt(worst, 6);
    if (inexact) detail += " (" + std::to_string(inexact) + " without exact reference)";
  }
  return check(ok, detail + " (need mean >= 0.98, min >= 0.95)");
}

// 9. surviving ads grow slowly with N.
Outcome prune_effectiveness() {
  auto mean_surviving = [](std::size_t n) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : scale_records(n))
      if (r.surviving) {
        sum += static_cast<double>(*r.surviving);
        ++count;
      }
    return sum / count;
  };
  const double s100 = mean_surviving(100), s1000 = mean_surviving(1000);
  return check(s1000 <= 250.0 && s1000 <= 2.0 * s100, "prune effectiveness: mean surviving " + fmt(s100) +
                                                          " at N=100, " + fmt(s1000) +
                                                          " at N=1000 (need <= 250 and <= 2x)");
}

// 10. rank-based counting equals the quadratic count.
Outcome fast_counting() {
  Xoshiro256 rng(1010);
  int mismatches = 0, fallbacks = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.bounded(500);
    const std::size_t k = 1 + rng.bounded(std::min<std::size_t>(n, 10));
    std::vector<Ad> ads;
    for (std::size_t i = 0; i < n; ++i)
      ads.push_back(Ad{static_cast<AdId>(i + 1), 0.01 + 3.0 * rng.uniform(), 0.01 + 0.99 * rng.uniform(), rng.uniform()});
    std::vector<double> lambdas(k);
    for (auto& l : lambdas) l = 0.2 + 0.8 * rng.uniform();
    const AuctionInstance inst(std::move(ads), SlotLadder(k, lambdas));
    const auto params = choose_bound(inst);
    const auto fast = count_dominators_fast(inst, params);
    if (fast.fell_back) ++fallbacks;
    if (fast.counts != count_dominators_naive(inst, params)) ++mismatches;
  }
  return check(mismatches == 0 && fallbacks == 0, "fast counting: " + std::to_string(mismatches) +
                                                       "/200 mismatches, " + std::to_string(fallbacks) +
                                                       " naive fallbacks");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {
      oracle_equivalence, prune_safety, color_success_rate, half_bound, lemma_catalog,
      truthfulness,       performance,  approximation_quality, prune_effectiveness, fast_counting};

  std::vector<std::size_t> selected;
  if (argc == 1) {
    selected.resize(criteria.size());
    std::iota(selected.begin(), selected.end(), std::size_t{1});
  }
  for (int i = 1; i < argc; ++i) {
    const long id = std::strtol(argv[i], nullptr, 10);
    if (id < 1 || id > static_cast<long>(criteria.size())) {
      std::cerr << "usage: apdc_acceptance [1-" << criteria.size() << "]...\n";
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(id));
  }

  int failures = 0;
  for (std::size_t id : selected) {
    Outcome o;
    try {
      o = criteria[id - 1]();
    } catch (const std::exception& e) {
      o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::warn ? "WARN" : "FAIL";
    std::cout << "criterion " << id << ": " << tag << "  " << o.detail << std::endl;
    if (o.verdict == Verdict::fail) ++failures;
  }
  return failures ? 1 : 0;
}
