#include "stratum/batch.hpp"

#include <cstdint>
#include <exception>

namespace stratum {

namespace {

// Runs body(i) for i < n, rethrowing the first exception by index.
template <class Body>
void for_each_index(std::size_t n, bool parallel, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<Formula> stratify_batch(std::span<const Formula> formulas, const StratifierSpec& x, bool parallel) {
  std::vector<Formula> out(formulas.size());
  for_each_index(formulas.size(), parallel, [&](std::size_t i) { out[i] = stratify(formulas[i], x); });
  return out;
}

std::vector<Formula> destratify_batch(std::span<const Formula> formulas, bool parallel) {
  std::vector<Formula> out(formulas.size());
  for_each_index(formulas.size(), parallel, [&](std::size_t i) { out[i] = destratify(formulas[i]); });
  return out;
}

std::size_t round_trip_failures(std::span<const Formula> formulas, std::span<const StratifierSpec> specs,
                                bool parallel) {
  std::vector<std::size_t> failures(formulas.size(), 0);
  for_each_index(formulas.size(), parallel, [&](std::size_t i) {
    for (const auto& x : specs)
      if (destratify(stratify(formulas[i], x)) != formulas[i]) ++failures[i];
  });
  std::size_t total = 0;
  for (std::size_t f : failures) total += f;
  return total;
}

std::vector<ProofReport> prove_batch(std::span<const Formula> formulas, const Budget& budget, bool parallel) {
  std::vector<ProofReport> out(formulas.size());
  for_each_index(formulas.size(), parallel, [&](std::size_t i) { out[i] = prove_bounded(formulas[i], budget); });
  return out;
}

namespace reference {

std::vector<Formula> stratify_batch(std::span<const Formula> formulas, const StratifierSpec& x) {
  std::vector<Formula> out;
  out.reserve(formulas.size());
  for (const Formula& f : formulas) out.push_back(reference::stratify(f, x));
  return out;
}

}  // namespace reference

}  // namespace stratum
