// Generate an instance, prune it, and compare the three solvers.

#include <iostream>

#include "apdc/apdc.hpp"

int main() {
  apdc::GeneratorConfig cfg;
  cfg.n = 500;
  cfg.k = 5;
  cfg.seed = 7;
  const apdc::AuctionInstance inst = apdc::generate_instance(cfg);

  const auto pruned = apdc::prune_instance(inst);
  std::cout << "ads kept after pruning: " << pruned.report.surviving.size() << " of " << inst.num_ads() << '\n';

  // Past 20 ads the exact search needs an explicit node budget.
  apdc::ExactOptions eo;
  eo.node_budget = 50'000'000;
  const auto exact = apdc::solve_exact(pruned.reduced, eo);
  const auto colored = apdc::colored_ads(pruned.reduced);

  apdc::MultiOrderOptions mo;
  mo.random_orders = apdc::default_order_count(inst.num_slots());
  const auto sorted = apdc::multi_order_approx(pruned.reduced, mo);

  std::cout << "exact   " << exact.best_value << '\n'
            << "colored " << colored.value << '\n'
            << "sorted  " << sorted.value << '\n';

  // Truthful VCG over the sorted allocator's range.
  apdc::VcgApdcOptions vo;
  vo.allocator = apdc::AllocatorKind::sorted;
  const auto outcome = apdc::vcg_apdc_outcome(pruned.reduced, apdc::BidProfile::truthful(pruned.reduced), vo);
  std::cout << "revenue " << outcome.revenue << ", welfare " << outcome.sw << '\n';

  return exact.best_value + 1e-9 >= colored.value && exact.best_value + 1e-9 >= sorted.value ? 0 : 1;
}
