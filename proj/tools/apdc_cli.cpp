// apdc: command-line front end.
//
//   apdc generate --n 100 --k 5 --seed 1 > inst.json
//   apdc prune --input inst.json --fast
//   apdc solve --algo colored --input inst.json --iters 200
//   apdc mech --input inst.json --bids bids.json --mechanism vcg-apdc --allocator sorted
//   apdc verify-lemma --name gsp-rev-pos
//   apdc bench --n 100 --n 1000 --k 5 --trials 20 --csv records.csv --aggregate agg.csv
//
// Exit status: 0 on success, 1 when an inline check fails, 2 on bad input.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "apdc/apdc.hpp"
#include "apdc/io.hpp"

using namespace apdc;
using io::json;

namespace {

std::string format = "json";

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::string join_ids(const std::vector<AdId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
  return s;
}

std::string csv_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const std::map<std::string, BoundMode> kBoundModes = {{"const-lambda", BoundMode::const_lambda},
                                                      {"decouple", BoundMode::decouple},
                                                      {"min", BoundMode::min},
                                                      {"footnote", BoundMode::footnote}};

const std::map<std::string, AllocatorKind> kAllocators = {
    {"exact", AllocatorKind::exact}, {"colored", AllocatorKind::colored}, {"sorted", AllocatorKind::sorted}};

std::vector<std::string> keys(const auto& m) {
  std::vector<std::string> out;
  for (const auto& kv : m) out.push_back(kv.first);
  return out;
}

// generate ------------------------------------------------------------------

struct GenerateArgs {
  GeneratorConfig cfg;
  std::string continuation = "uniform";
  double c_a = 0.0, c_b = 1.0;
  std::vector<double> lambdas;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  GeneratorConfig cfg = a.cfg;
  if (a.continuation == "uniform")
    cfg.continuation = {ContinuationDist::Kind::uniform, a.c_a, a.c_b};
  else if (a.continuation == "beta")
    cfg.continuation = {ContinuationDist::Kind::beta, a.c_a, a.c_b};
  else
    cfg.continuation = {ContinuationDist::Kind::constant, a.c_a, 0.0};
  if (!a.lambdas.empty()) cfg.lambdas = a.lambdas;
  const AuctionInstance inst = generate_instance(cfg);

  std::ostringstream os;
  if (format == "csv") {
    os << "id,v,q,c\n";
    for (const Ad& ad : inst.ads())
      os << ad.id << ',' << csv_num(ad.value) << ',' << csv_num(ad.quality) << ',' << csv_num(ad.continuation) << '\n';
  } else {
    os << io::to_json(inst).dump(2) << '\n';
  }
  if (a.output.empty())
    std::cout << os.str();
  else
    io::save_text(a.output, os.str());
  return 0;
}

// prune ---------------------------------------------------------------------

struct PruneArgs {
  std::string input, output, bound = "min", rule = "at-least-k";
  bool fast = false;
};

int run_prune(const PruneArgs& a) {
  const AuctionInstance inst = io::load_instance(a.input);
  PruneOptions o;
  o.bound = kBoundModes.at(a.bound);
  o.fast = a.fast;
  o.rule = a.rule == "more-than-k" ? DiscardRule::more_than_k : DiscardRule::at_least_k;
  const auto r = prune_instance(inst, o);
  if (!a.output.empty()) io::save_text(a.output, io::to_json(r.reduced).dump(2) + "\n");

  if (format == "csv") {
    std::cout << "id,dom_count,status\n";
    std::vector<char> kept(inst.num_ads(), 0);
    for (AdId id : r.report.surviving) kept[*inst.index_of(id)] = 1;
    for (std::size_t i = 0; i < inst.num_ads(); ++i)
      std::cout << inst.ad(i).id << ',' << r.report.dom_counts[i] << ',' << (kept[i] ? "kept" : "discarded") << '\n';
  } else {
    emit({{"reduced", io::to_json(r.reduced)}, {"report", io::to_json(r.report)}});
  }
  return 0;
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
  std::string input, algo = "exact";
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> iters, orders;
  std::optional<double> time_budget;
  std::uint64_t seed = 0;
  bool include_natural = true;
};

int run_solve(const SolveArgs& a) {
  const AuctionInstance inst = io::load_instance(a.input);
  json out = {{"algorithm", a.algo}};
  Allocation alloc;
  double value = 0.0;
  if (a.algo == "exact") {
    ExactOptions o;
    o.node_budget = a.budget;
    const auto r = solve_exact(inst, o);
    alloc = r.best_alloc;
    value = r.best_value;
    out["nodes"] = r.nodes_explored;
    out["complete"] = r.complete;
  } else if (a.algo == "colored") {
    ColorCodingOptions o;
    o.iterations = a.iters;
    o.seed = a.seed;
    o.threads = default_threads();
    o.time_budget_ms = a.time_budget;
    const auto r = colored_ads(inst, o);
    alloc = r.alloc;
    value = r.value;
    out["passes"] = r.passes;
    out["best_iteration"] = r.best_iteration;
  } else {
    MultiOrderOptions o;
    o.random_orders = a.orders.value_or(default_order_count(inst.num_slots()));
    o.seed = a.seed;
    o.include_natural = a.include_natural;
    o.threads = default_threads();
    const auto r = multi_order_approx(inst, o);
    alloc = r.alloc;
    value = r.value;
    out["orders"] = o.random_orders + (o.include_natural ? 1 : 0);
    out["best_order"] = r.order_index;
  }
  // Inline check: the reported value is the welfare of the reported allocation.
  const double sw = social_welfare(inst, alloc);
  const bool ok = std::abs(sw - value) <= 1e-9 * std::max(1.0, std::abs(sw));

  if (format == "csv") {
    std::cout << "algorithm,value,slots\n" << a.algo << ',' << csv_num(value) << ',' << join_ids(alloc.slots) << '\n';
  } else {
    out["value"] = value;
    out["slots"] = alloc.slots;
    emit(out);
  }
  if (!ok) std::cerr << "check failed: value " << value << " differs from recomputed welfare " << sw << '\n';
  return ok ? 0 : 1;
}

// mech ----------------------------------------------------------------------

struct MechArgs {
  std::string input, bids, mechanism = "vcg-apdc", allocator = "exact";
  std::uint64_t seed = 0;
  std::optional<std::size_t> iters, orders;
  bool rank_by_quality = false;
  std::size_t nash_grid = 0;
};

int run_mech(const MechArgs& a) {
  const AuctionInstance inst = io::load_instance(a.input);
  const BidProfile bids = a.bids.empty() ? BidProfile::truthful(inst) : io::load_bids(a.bids, inst);
  Mechanism mech;
  if (a.mechanism == "gsp") {
    mech = gsp_mechanism(GspOptions{a.rank_by_quality});
  } else if (a.mechanism == "vcg-pdc") {
    mech = vcg_pdc_mechanism();
  } else {
    VcgApdcOptions o;
    o.allocator = kAllocators.at(a.allocator);
    o.seed = a.seed;
    o.color_iterations = a.iters;
    o.random_orders = a.orders;
    mech = vcg_apdc_mechanism(o);
  }
  const MechanismOutcome out = mech(inst, bids);

  std::optional<NashCheck> nash;
  if (a.nash_grid >= 2) {
    std::vector<std::vector<double>> grids;
    for (const Ad& ad : inst.ads()) {
      std::vector<double> g;
      for (std::size_t j = 0; j < a.nash_grid; ++j)
        g.push_back(2.0 * ad.value * static_cast<double>(j) / static_cast<double>(a.nash_grid - 1));
      grids.push_back(std::move(g));
    }
    nash = is_nash(inst, bids, mech, grids, 1e-9, default_threads());
  }

  // Inline check: revenue is the sum of payments.
  double sum = 0.0;
  for (double p : out.payments) sum += p;
  const bool ok = std::abs(sum - out.revenue) <= 1e-9 * std::max(1.0, std::abs(sum));

  if (format == "csv") {
    std::cout << "id,bid,payment,per_click,utility\n";
    for (std::size_t i = 0; i < inst.num_ads(); ++i)
      std::cout << inst.ad(i).id << ',' << csv_num(bids.bids[i]) << ',' << csv_num(out.payments[i]) << ','
                << (out.per_click[i] ? csv_num(*out.per_click[i]) : "") << ',' << csv_num(out.utilities[i]) << '\n';
  } else {
    json j = io::to_json(out, inst);
    j["mechanism"] = a.mechanism;
    if (a.mechanism == "vcg-apdc") j["allocator"] = a.allocator;
    if (nash) {
      j["nash"] = nash->nash;
      if (nash->best_deviation) {
        const auto& d = *nash->best_deviation;
        j["best_deviation"] = {{"id", d.id}, {"bid", d.bid}, {"utility_before", d.utility_before},
                               {"utility_after", d.utility_after}};
      }
    }
    emit(j);
  }
  return ok ? 0 : 1;
}

// verify-lemma --------------------------------------------------------------

struct LemmaArgs {
  std::string name;
  bool all = false;
  LemmaParams params;
};

int run_verify(const LemmaArgs& a) {
  if (a.name.empty() && !a.all) throw Error(ErrorCode::invalid_params, "give --name or --all");
  const std::vector<std::string> names = a.all ? lemma_names() : std::vector<std::string>{a.name};
  bool ok = true;
  json reports = json::array();
  if (format == "csv") std::cout << "lemma,assertion,passed,detail\n";
  for (const auto& name : names) {
    const auto results = verify(lemma_instance(name, a.params));
    const bool passed = all_passed(results);
    ok = ok && passed;
    json rows = json::array();
    for (const auto& r : results) {
      if (format == "csv")
        std::cout << name << ",\"" << r.label << "\"," << (r.passed ? 1 : 0) << ",\"" << r.detail << "\"\n";
      rows.push_back({{"label", r.label}, {"passed", r.passed}, {"detail", r.detail}});
    }
    reports.push_back({{"name", name}, {"passed", passed}, {"assertions", rows}});
  }
  if (format == "json") emit(a.all ? reports : reports[0]);
  return ok ? 0 : 1;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> ns = {100};
  GeneratorConfig cfg;
  std::size_t trials = 20;
  std::vector<std::string> algos = {"prune", "exact", "colored", "sorted"};
  PipelineOptions opts;
  bool no_named_orders = false;
  std::string csv, aggregate;
};

int run_bench(const BenchArgs& a) {
  std::vector<Algorithm> algorithms;
  for (const auto& s : a.algos) algorithms.push_back(algorithm_from_string(s));
  PipelineOptions opts = a.opts;
  opts.threads = default_threads();
  opts.append_named_orders = !a.no_named_orders;

  std::vector<BenchRecord> records;
  for (std::size_t n : a.ns) {
    GeneratorConfig cfg = a.cfg;
    cfg.n = n;
    auto recs = run_pipeline(cfg, algorithms, a.trials, opts);
    records.insert(records.end(), recs.begin(), recs.end());
  }

  std::ostringstream csv, agg;
  emit_report(records, csv, agg);
  if (!a.csv.empty()) io::save_text(a.csv, csv.str());
  if (!a.aggregate.empty()) io::save_text(a.aggregate, agg.str());
  if (a.csv.empty() && a.aggregate.empty()) {
    if (format == "csv") {
      std::cout << csv.str() << '\n' << agg.str();
    } else {
      json arr = json::array();
      for (const auto& r : records) {
        json j = {{"algorithm", r.algorithm}, {"n", r.n},       {"k", r.k},
                  {"seed", r.seed},           {"trial", r.trial}, {"wall_ms", r.wall_ms},
                  {"reference_exact", r.reference_exact}, {"inline_ok", r.inline_ok}};
        j["value"] = r.value ? json(*r.value) : json(nullptr);
        j["ratio"] = r.ratio ? json(*r.ratio) : json(nullptr);
        j["surviving"] = r.surviving ? json(*r.surviving) : json(nullptr);
        arr.push_back(j);
      }
      emit(arr);
    }
  }
  const std::size_t failures = count_inline_failures(records);
  if (failures) std::cerr << failures << " record(s) failed an inline check\n";
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ad allocation and auction mechanisms under the ad/position-dependent cascade model"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.set_version_flag("--version", "apdc 0.1.0");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic instance");
  g->add_option("--n", gen.cfg.n, "Number of ads")->capture_default_str();
  g->add_option("--k", gen.cfg.k, "Number of slots")->capture_default_str();
  g->add_option("--seed", gen.cfg.seed, "Seed")->capture_default_str();
  g->add_option("--mean-mu", gen.cfg.mean_mu, "Log-mean of per-ad mean values")->capture_default_str();
  g->add_option("--mean-sigma", gen.cfg.mean_sigma, "Log-sd of per-ad mean values")->capture_default_str();
  g->add_option("--std-ratio", gen.cfg.std_ratio, "Per-ad sd as a fraction of its mean")->capture_default_str();
  g->add_option("--quality-alpha", gen.cfg.quality_alpha, "Quality Beta alpha")->capture_default_str();
  g->add_option("--quality-beta", gen.cfg.quality_beta, "Quality Beta beta")->capture_default_str();
  g->add_option("--continuation", gen.continuation, "Continuation distribution")
      ->check(CLI::IsMember({"uniform", "beta", "constant"}))
      ->capture_default_str();
  g->add_option("--c-a", gen.c_a, "uniform low, beta alpha, or the constant")->capture_default_str();
  g->add_option("--c-b", gen.c_b, "uniform high or beta beta")->capture_default_str();
  g->add_option("--lambdas", gen.lambdas, "Slot factors (K or K-1 values)")->delimiter(',');
  g->add_option("-o,--output", gen.output, "Write to file instead of stdout");

  PruneArgs pr;
  auto* p = app.add_subcommand("prune", "Discard dominated ads");
  p->add_option("-i,--input", pr.input, "Instance JSON")->required();
  p->add_option("--bound", pr.bound, "Welfare bound B")->check(CLI::IsMember(keys(kBoundModes)))->capture_default_str();
  p->add_option("--rule", pr.rule, "Discard threshold")
      ->check(CLI::IsMember({"at-least-k", "more-than-k"}))
      ->capture_default_str();
  p->add_flag("--fast", pr.fast, "Rank-based dominator counting");
  p->add_option("-o,--output", pr.output, "Also write the reduced instance here");

  SolveArgs so;
  auto* s = app.add_subcommand("solve", "Find an allocation");
  s->add_option("-i,--input", so.input, "Instance JSON")->required();
  s->add_option("--algo", so.algo, "Solver")->check(CLI::IsMember({"exact", "colored", "sorted"}))->capture_default_str();
  s->add_option("--budget", so.budget, "Node budget for exact search");
  s->add_option("--iters", so.iters, "Color-coding passes (default ceil(e^K ln 2))");
  s->add_option("--time-budget", so.time_budget, "Stop color coding after this many ms");
  s->add_option("--orders", so.orders, "Random orders (default 2K^3)");
  s->add_option("--seed", so.seed, "Seed")->capture_default_str();
  s->add_flag("--include-natural,!--no-include-natural", so.include_natural, "Add the natural order (sorted)");

  MechArgs me;
  auto* m = app.add_subcommand("mech", "Run an auction mechanism");
  m->add_option("-i,--input", me.input, "Instance JSON")->required();
  m->add_option("--bids", me.bids, "Bids JSON (truthful when omitted)");
  m->add_option("--mechanism", me.mechanism, "Mechanism")
      ->check(CLI::IsMember({"gsp", "vcg-pdc", "vcg-apdc"}))
      ->capture_default_str();
  m->add_option("--allocator", me.allocator, "VCG-APDC allocator")
      ->check(CLI::IsMember(keys(kAllocators)))
      ->capture_default_str();
  m->add_option("--seed", me.seed, "Seed for colorings and orders")->capture_default_str();
  m->add_option("--iters", me.iters, "Colorings for the colored allocator");
  m->add_option("--orders", me.orders, "Random orders for the sorted allocator");
  m->add_flag("--rank-by-quality", me.rank_by_quality, "GSP ranks by q * bid");
  m->add_option("--nash-grid", me.nash_grid, "Check unilateral deviations on this many points in [0, 2v]");

  LemmaArgs le;
  auto* v = app.add_subcommand("verify-lemma", "Check a catalog counterexample");
  v->add_option("--name", le.name, "Catalog entry")->check(CLI::IsMember(lemma_names()));
  v->add_flag("--all", le.all, "Check every entry");
  v->add_option("--eps", le.params.eps, "Epsilon for parameterised entries")->capture_default_str();
  v->add_option("--n", le.params.n, "Number of ads (0: entry default)");
  v->add_option("--k", le.params.k, "Number of slots (0: entry default)");

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "Benchmark pipeline over generated instances");
  b->add_option("--n", be.ns, "Numbers of ads (repeatable)")->delimiter(',');
  b->add_option("--k", be.cfg.k, "Number of slots")->capture_default_str();
  b->add_option("--trials", be.trials, "Instances per N")->capture_default_str();
  b->add_option("--seed", be.cfg.seed, "Seed")->capture_default_str();
  b->add_option("--algos", be.algos, "Algorithms")
      ->delimiter(',')
      ->check(CLI::IsMember({"prune", "exact", "colored", "sorted"}));
  b->add_option("--reps", be.opts.repetitions, "Timing repetitions (median)")->capture_default_str();
  b->add_option("--exact-cap", be.opts.exact_cap, "Largest pruned N given an exact reference")->capture_default_str();
  b->add_option("--iters", be.opts.color_iterations, "Color-coding passes");
  b->add_option("--orders", be.opts.random_orders, "Random orders");
  b->add_flag("--no-named-orders", be.no_named_orders, "Random orders only for sorted");
  b->add_option("--csv", be.csv, "Record CSV path");
  b->add_option("--aggregate", be.aggregate, "Aggregate CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return run_generate(gen);
    if (p->parsed()) return run_prune(pr);
    if (s->parsed()) return run_solve(so);
    if (m->parsed()) return run_mech(me);
    if (v->parsed()) return run_verify(le);
    if (b->parsed()) return run_bench(be);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
