#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ksv/errors.hpp"
#include "ksv/model.hpp"

namespace ksv {

// One parity equation over assignment symbols: XOR of the symbols' bits
// equals parity, where bit b encodes value (1-2b), i.e. 0 for +1, 1 for -1.
struct AssignmentConstraint {
  std::vector<std::size_t> symbols;
  int parity = 0;
};

struct FeasibilityResult {
  bool feasible = false;
  // Per symbol id, +1/-1. Free variables default to +1. Empty when infeasible.
  std::vector<int> assignment;
  // Original constraint indices whose XOR reads 0 = 1. Empty when feasible.
  std::vector<std::size_t> certificate;
};

// The GF(2) encoding of v(A_1)...v(A_k) = alpha per context, with the signs
// of negative-phase members folded into the parity.
inline std::vector<AssignmentConstraint> constraints_of(const KsModel& model) {
  std::vector<AssignmentConstraint> constraints;
  for (std::size_t i = 0; i < model.contexts().size(); ++i) {
    AssignmentConstraint c;
    int sign = model.signs()[i];
    for (const auto& member : model.contexts()[i].members()) {
      sign *= member.sign();
      const std::size_t id = model.symbol_id(member);
      // duplicate symbols within a context cancel mod 2
      auto it = std::find(c.symbols.begin(), c.symbols.end(), id);
      if (it == c.symbols.end())
        c.symbols.push_back(id);
      else
        c.symbols.erase(it);
    }
    c.parity = sign == -1 ? 1 : 0;
    constraints.push_back(std::move(c));
  }
  return constraints;
}

namespace detail {

struct ParityRow {
  std::vector<std::uint64_t> bits;   // symbol incidence
  std::vector<std::uint64_t> combo;  // which original rows were XORed in
  int parity = 0;

  static std::size_t words(std::size_t n) { return (n + 63) / 64; }
  bool get(const std::vector<std::uint64_t>& v, std::size_t i) const {
    return (v[i / 64] >> (i % 64)) & 1;
  }
  void flip(std::vector<std::uint64_t>& v, std::size_t i) { v[i / 64] ^= std::uint64_t{1} << (i % 64); }
  void xor_in(const ParityRow& other) {
    for (std::size_t w = 0; w < bits.size(); ++w) bits[w] ^= other.bits[w];
    for (std::size_t w = 0; w < combo.size(); ++w) combo[w] ^= other.combo[w];
    parity ^= other.parity;
  }
  bool empty_bits() const {
    for (auto w : bits)
      if (w) return false;
    return true;
  }
};

}  // namespace detail

// Gaussian elimination over GF(2) with a fixed pivot order (lowest symbol
// index first; first remaining row wins). Infeasible iff some eliminated row
// reads 0 = 1; its combination of original rows is the certificate.
inline FeasibilityResult solve_parity_system(const std::vector<AssignmentConstraint>& constraints,
                                             std::size_t num_symbols) {
  using detail::ParityRow;
  const std::size_t rows = constraints.size();
  const std::size_t bit_words = ParityRow::words(num_symbols);
  const std::size_t combo_words = ParityRow::words(rows == 0 ? 1 : rows);

  std::vector<ParityRow> table(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    table[r].bits.assign(bit_words, 0);
    table[r].combo.assign(combo_words, 0);
    table[r].parity = constraints[r].parity;
    for (std::size_t s : constraints[r].symbols) {
      if (s >= num_symbols) throw Error("constraint symbol id out of range");
      table[r].flip(table[r].bits, s);
    }
    table[r].flip(table[r].combo, r);
  }

  std::vector<std::optional<std::size_t>> pivot_row(num_symbols);
  std::vector<bool> used(rows, false);
  for (std::size_t sym = 0; sym < num_symbols; ++sym) {
    std::optional<std::size_t> pivot;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!used[r] && table[r].get(table[r].bits, sym)) {
        pivot = r;
        break;
      }
    }
    if (!pivot) continue;
    used[*pivot] = true;
    pivot_row[sym] = *pivot;
    for (std::size_t r = 0; r < rows; ++r)
      if (!used[r] && table[r].get(table[r].bits, sym)) table[r].xor_in(table[*pivot]);
  }

  for (std::size_t r = 0; r < rows; ++r) {
    if (!used[r] && table[r].empty_bits() && table[r].parity == 1) {
      FeasibilityResult result;
      result.feasible = false;
      for (std::size_t i = 0; i < rows; ++i)
        if (table[r].get(table[r].combo, i)) result.certificate.push_back(i);
      return result;
    }
  }

  // Back-substitute in reverse pivot order; free symbols stay at +1 (bit 0).
  std::vector<int> bits(num_symbols, 0);
  for (std::size_t sym = num_symbols; sym-- > 0;) {
    if (!pivot_row[sym]) continue;
    const ParityRow& row = table[*pivot_row[sym]];
    int value = row.parity;
    for (std::size_t t = sym + 1; t < num_symbols; ++t)
      if (row.get(row.bits, t)) value ^= bits[t];
    bits[sym] = value;
  }

  FeasibilityResult result;
  result.feasible = true;
  result.assignment.resize(num_symbols);
  for (std::size_t s = 0; s < num_symbols; ++s) result.assignment[s] = bits[s] ? -1 : +1;
  return result;
}

// Does a noncontextual +1/-1 value assignment satisfying every context
// constraint exist?
inline FeasibilityResult ks_feasible(const KsModel& model) {
  return solve_parity_system(constraints_of(model), model.symbols().size());
}

}  // namespace ksv
