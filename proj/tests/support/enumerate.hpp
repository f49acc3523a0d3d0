#pragma once

// Exhaustive small formula families.

#include <vector>

#include "stratum/syntax.hpp"

namespace stratum::testing {

/// Every formula over the atoms {0=0, 1=0} built with K, ~ and -> using at
/// most `max_ops` operators and at most `max_arrows` implications.
inline std::vector<Formula> skeletons(std::size_t max_ops, std::size_t max_arrows) {
  // by_cost[o][a]: formulas with exactly o operators and a arrows
  std::vector<std::vector<std::vector<Formula>>> by_cost(
      max_ops + 1, std::vector<std::vector<Formula>>(max_arrows + 1));
  by_cost[0][0] = {Formula::equal(Term::zero(), Term::zero()), Formula::equal(Term::numeral(1), Term::zero())};
  by_cost[0][0].push_back(Formula::negate(by_cost[0][0][1]));
  for (std::size_t total = 1; total <= max_ops + max_arrows; ++total) {
    for (std::size_t o = 0; o <= max_ops; ++o) {
      const std::size_t a = total - o;
      if (a > max_arrows || total < o) continue;
      auto& out = by_cost[o][a];
      if (o > 0)
        for (const Formula& f : by_cost[o - 1][a]) out.push_back(Formula::know(f));
      if (a > 0)
        for (std::size_t o1 = 0; o1 <= o; ++o1)
          for (std::size_t a1 = 0; a1 < a; ++a1)
            for (const Formula& l : by_cost[o1][a1])
              for (const Formula& r : by_cost[o - o1][a - 1 - a1]) out.push_back(Formula::implies(l, r));
    }
  }
  std::vector<Formula> all;
  for (auto& row : by_cost)
    for (auto& cell : row) all.insert(all.end(), cell.begin(), cell.end());
  return all;
}

/// Every way of indexing the operators of `f` with levels from `pool`.
inline std::vector<Formula> indexings(const Formula& f, const std::vector<Ordinal>& pool) {
  std::vector<NodeId> ops;
  for (NodeId i = 0; i < f.size(); ++i)
    if (f.kind(i) == Kind::kOp) ops.push_back(i);
  std::vector<Formula> out;
  std::vector<std::size_t> digit(ops.size(), 0);
  for (;;) {
    Builder b;
    std::size_t k = 0;
    for (NodeId i = 0; i < f.size(); ++i) {
      Node n = f[i];
      if (n.kind == Kind::kOp) n.tag = OperatorTag::at(pool[digit[k++]]);
      b.push_like(n, n.first);
    }
    out.push_back(std::move(b).formula());
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == pool.size()) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  return out;
}

}  // namespace stratum::testing
