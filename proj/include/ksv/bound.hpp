#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ksv/bell.hpp"
#include "ksv/errors.hpp"
#include "ksv/model.hpp"

namespace ksv {

inline constexpr std::size_t kMaxBoundSymbols = 24;

struct BoundResult {
  double bound = 0.0;
  // Per symbol id, the +1/-1 values of the lexicographically smallest
  // maximizer (+1 sorts before -1).
  std::vector<int> maximizer;
  std::uint64_t evaluations = 0;
};

namespace detail {

struct BoundTask {
  double best = 0.0;
  std::uint32_t best_assignment = 0;
  bool has_best = false;
};

// Bit b of an assignment encodes symbol b: 0 for +1, 1 for -1.
inline bool lex_less(std::uint32_t a, std::uint32_t b, std::size_t m) {
  for (std::size_t s = 0; s < m; ++s) {
    const int ba = (a >> s) & 1;
    const int bb = (b >> s) & 1;
    if (ba != bb) return ba < bb;
  }
  return false;
}

// Gray-code walk over the low `low_bits` of the assignment with the high bits
// fixed; one sign flip per step. Term values stay exact (sign flips only); the
// running total is refreshed from them whenever a candidate shows up.
inline BoundTask enumerate_block(const std::vector<std::uint32_t>& masks,
                                 const std::vector<double>& base_values,
                                 std::uint32_t high_bits, std::size_t low_bits, std::size_t m) {
  const std::size_t terms = masks.size();
  std::vector<double> value(terms);
  std::uint32_t assignment = high_bits;
  for (std::size_t t = 0; t < terms; ++t) {
    const bool negative = std::popcount(assignment & masks[t]) & 1;
    value[t] = negative ? -base_values[t] : base_values[t];
  }
  double total = 0.0;
  for (double v : value) total += v;

  BoundTask task;
  auto consider = [&]() {
    double exact = 0.0;
    for (double v : value) exact += v;
    total = exact;
    if (!task.has_best || exact > task.best ||
        (exact == task.best && lex_less(assignment, task.best_assignment, m))) {
      task.best = exact;
      task.best_assignment = assignment;
      task.has_best = true;
    }
  };
  consider();

  const std::uint64_t steps = std::uint64_t{1} << low_bits;
  for (std::uint64_t step = 1; step < steps; ++step) {
    const std::size_t flip = static_cast<std::size_t>(std::countr_zero(step));
    assignment ^= std::uint32_t{1} << flip;
    const std::uint32_t flip_bit = std::uint32_t{1} << flip;
    for (std::size_t t = 0; t < terms; ++t) {
      if (masks[t] & flip_bit) {
        total -= 2.0 * value[t];
        value[t] = -value[t];
      }
    }
    if (!task.has_best || total >= task.best - 1e-6) consider();
  }
  return task;
}

}  // namespace detail

// Exact maximum of sum_i coeff_i * prod v(symbol) over all 2^m assignments,
// by Gray-code enumeration. Workers (if any) partition the space by fixing
// high-order assignment bits; results merge deterministically.
inline BoundResult classical_bound(const BellOperator& op, unsigned num_threads = 1) {
  const std::size_t m = op.num_symbols();
  if (m > kMaxBoundSymbols)
    throw Error("classical_bound supports at most " + std::to_string(kMaxBoundSymbols) +
                " symbols, operator has " + std::to_string(m));

  std::vector<std::uint32_t> masks;
  std::vector<double> base_values;
  for (const auto& term : op.terms()) {
    std::uint32_t mask = 0;
    for (const auto& ids : term.group_symbols)
      for (std::size_t id : ids) mask ^= std::uint32_t{1} << id;  // even powers cancel
    masks.push_back(mask);
    base_values.push_back(term.coefficient * term.atom_sign);
  }

  std::size_t high_bits = 0;
  if (num_threads > 1) {
    while ((std::size_t{1} << high_bits) < num_threads && high_bits < m && high_bits < 8)
      ++high_bits;
  }
  const std::size_t tasks = std::size_t{1} << high_bits;
  const std::size_t low_bits = m - high_bits;

  std::vector<detail::BoundTask> results(tasks);
  if (tasks == 1) {
    results[0] = detail::enumerate_block(masks, base_values, 0, low_bits, m);
  } else {
    std::vector<std::thread> workers;
    const unsigned workers_count = std::min<unsigned>(num_threads, tasks);
    for (unsigned w = 0; w < workers_count; ++w) {
      workers.emplace_back([&, w]() {
        for (std::size_t t = w; t < tasks; t += workers_count) {
          const std::uint32_t high = static_cast<std::uint32_t>(t) << low_bits;
          results[t] = detail::enumerate_block(masks, base_values, high, low_bits, m);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  detail::BoundTask merged;
  for (const auto& task : results) {
    if (!task.has_best) continue;
    if (!merged.has_best || task.best > merged.best ||
        (task.best == merged.best &&
         detail::lex_less(task.best_assignment, merged.best_assignment, m))) {
      merged = task;
    }
  }

  BoundResult result;
  result.bound = merged.best;
  result.evaluations = std::uint64_t{1} << m;
  result.maximizer.resize(m);
  for (std::size_t s = 0; s < m; ++s)
    result.maximizer[s] = (merged.best_assignment >> s) & 1 ? -1 : +1;
  return result;
}

// B with its identity-product contexts dropped, plus the bound shift.
struct Reduction {
  BellOperator reduced;
  double bound_shift = 0.0;
  std::vector<std::size_t> removed;
};

// Removes every term whose member product is +/-identity as an operator (the
// prediction then holds in any theory, independent of the state). The
// adjusted inequality is <B_reduced> <= bound(B) - bound_shift.
inline Reduction reduce(const KsModel& model, const BellOperator& op) {
  if (op.terms().size() != model.contexts().size())
    throw Error("operator terms do not correspond to the model contexts");
  std::vector<CorrelationTerm> kept;
  double shift = 0.0;
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < op.terms().size(); ++i) {
    const PauliWord product = op.terms()[i].product();
    if (product.letters() != model.contexts()[i].product().letters())
      throw Error("term " + std::to_string(i) + " does not match context '" +
                  model.contexts()[i].label() + "'");
    if (product.has_identity_letters() && product.is_hermitian()) {
      shift += model.signs()[i];
      removed.push_back(i);
    } else {
      kept.push_back(op.terms()[i]);
    }
  }
  return Reduction{BellOperator(op.num_qubits(), op.atoms(), std::move(kept)), shift,
                   std::move(removed)};
}

}  // namespace ksv
