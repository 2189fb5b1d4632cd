#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ksv/bell.hpp"
#include "ksv/pauli.hpp"

namespace ksv {

// Multiset of single-qubit letters appearing in a term's displayed groups.
struct LetterMultiset {
  std::map<std::pair<std::size_t, Pauli>, std::size_t> counts;

  friend bool operator==(const LetterMultiset&, const LetterMultiset&) = default;
};

inline LetterMultiset letter_multiset(const CorrelationTerm& term) {
  LetterMultiset ms;
  for (const auto& group : term.groups)
    for (std::size_t q = 0; q < group.num_qubits(); ++q)
      if (group.letter(q) != Pauli::I) ++ms.counts[{q, group.letter(q)}];
  return ms;
}

namespace detail {

// Qubit-index intersections of all group pairs sharing two or more indices.
inline std::vector<std::set<std::size_t>> shared_pairs(const CorrelationTerm& term) {
  std::vector<std::vector<std::size_t>> supports;
  for (const auto& group : term.groups) supports.push_back(support(group));
  std::vector<std::set<std::size_t>> result;
  for (std::size_t i = 0; i < supports.size(); ++i) {
    for (std::size_t j = i + 1; j < supports.size(); ++j) {
      std::set<std::size_t> shared;
      std::set_intersection(supports[i].begin(), supports[i].end(), supports[j].begin(),
                            supports[j].end(), std::inserter(shared, shared.begin()));
      if (shared.size() >= 2) result.push_back(std::move(shared));
    }
  }
  return result;
}

inline bool covers(const CorrelationTerm& term, const std::set<std::size_t>& indices) {
  std::vector<std::vector<std::size_t>> supports;
  for (const auto& group : term.groups) supports.push_back(support(group));
  for (std::size_t i = 0; i < supports.size(); ++i) {
    for (std::size_t j = i + 1; j < supports.size(); ++j) {
      std::set<std::size_t> shared;
      std::set_intersection(supports[i].begin(), supports[i].end(), supports[j].begin(),
                            supports[j].end(), std::inserter(shared, shared.begin()));
      if (std::includes(shared.begin(), shared.end(), indices.begin(), indices.end()))
        return true;
    }
  }
  return false;
}

}  // namespace detail

// Two correlation terms can be tested by the same cascade experiment iff
// (i) their per-qubit letter multisets agree, and (ii) whenever two groups of
// one term share two or more qubit indices, some group pair of the other term
// shares those same indices, and vice versa.
inline bool cascade_equivalent(const CorrelationTerm& a, const CorrelationTerm& b) {
  if (letter_multiset(a) != letter_multiset(b)) return false;
  for (const auto& shared : detail::shared_pairs(a))
    if (!detail::covers(b, shared)) return false;
  for (const auto& shared : detail::shared_pairs(b))
    if (!detail::covers(a, shared)) return false;
  return true;
}

struct TermFailure {
  std::size_t term_index = 0;
  std::string side;  // "left", "right" or "both"
  std::string reason;
};

struct EquivalenceReport {
  bool equivalent = false;
  // Pairs (left term index, right term index) of the found bijection.
  std::vector<std::pair<std::size_t, std::size_t>> matching;
  std::vector<TermFailure> failures;
};

namespace detail {

inline bool match_terms(const std::vector<std::vector<std::size_t>>& candidates,
                        std::size_t next, std::vector<bool>& used,
                        std::vector<std::size_t>& chosen) {
  if (next == candidates.size()) return true;
  for (std::size_t j : candidates[next]) {
    if (used[j]) continue;
    used[j] = true;
    chosen[next] = j;
    if (match_terms(candidates, next + 1, used, chosen)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace detail

// Searches for a bijection between the terms of two (already reduced) Bell
// operators in which matched terms have equal coefficients and are cascade
// measurement equivalent. Deterministic: terms are tried in index order.
inline EquivalenceReport inequalities_equivalent(const BellOperator& a, const BellOperator& b) {
  EquivalenceReport report;
  if (a.terms().size() != b.terms().size()) {
    report.failures.push_back({0, "both",
                               "term count mismatch: " + std::to_string(a.terms().size()) +
                                   " vs " + std::to_string(b.terms().size())});
    return report;
  }
  const std::size_t count = a.terms().size();
  std::vector<std::vector<std::size_t>> candidates(count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = 0; j < count; ++j)
      if (a.terms()[i].coefficient == b.terms()[j].coefficient &&
          cascade_equivalent(a.terms()[i], b.terms()[j]))
        candidates[i].push_back(j);

  bool missing = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (candidates[i].empty()) {
      report.failures.push_back({i, "left", "no cascade-equivalent counterpart"});
      missing = true;
    }
  }
  for (std::size_t j = 0; j < count; ++j) {
    bool any = false;
    for (const auto& c : candidates)
      if (std::find(c.begin(), c.end(), j) != c.end()) any = true;
    if (!any) {
      report.failures.push_back({j, "right", "no cascade-equivalent counterpart"});
      missing = true;
    }
  }
  if (missing) return report;

  std::vector<bool> used(count, false);
  std::vector<std::size_t> chosen(count, 0);
  if (!detail::match_terms(candidates, 0, used, chosen)) {
    report.failures.push_back({0, "both", "no coefficient-respecting bijection exists"});
    return report;
  }
  report.equivalent = true;
  for (std::size_t i = 0; i < count; ++i) report.matching.emplace_back(i, chosen[i]);
  return report;
}

}  // namespace ksv
