#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ksv/errors.hpp"
#include "ksv/pauli.hpp"
#include "ksv/state_vector.hpp"

namespace ksv {

// One term of a Bell operator: a coefficient times an ordered product
// partition of mutually compatible observables. Each group is the exact
// (phase-tracked) product of the assignment symbols listed in group_symbols;
// atom_sign collects the signs factored off negative-phase atoms so classical
// evaluation can work on the positive canonical symbols.
struct CorrelationTerm {
  double coefficient = 0.0;
  std::vector<PauliWord> groups;
  std::vector<std::vector<std::size_t>> group_symbols;
  int atom_sign = 1;

  PauliWord product() const { return product_of(groups); }
};

// B = sum_i coefficient_i * (product partition i). Owns the symbol table the
// terms' group_symbols index into; symbol identity is the positive canonical
// word of an atom, so a composite like IYY is a different symbol from the
// pair {IYI, IIY}.
class BellOperator {
 public:
  BellOperator(std::size_t n, std::vector<PauliWord> atoms, std::vector<CorrelationTerm> terms)
      : n_(n), atoms_(std::move(atoms)), terms_(std::move(terms)) {}

  std::size_t num_qubits() const { return n_; }
  std::size_t num_symbols() const { return atoms_.size(); }
  const std::vector<PauliWord>& atoms() const { return atoms_; }
  const std::vector<CorrelationTerm>& terms() const { return terms_; }

 private:
  std::size_t n_;
  std::vector<PauliWord> atoms_;
  std::vector<CorrelationTerm> terms_;
};

class BellOperatorBuilder {
 public:
  explicit BellOperatorBuilder(std::size_t n) : n_(n) {}

  // groups: the product partition, each group a list of Hermitian atom words.
  // All atoms of a term must be mutually compatible.
  BellOperatorBuilder& add_term(double coefficient,
                                const std::vector<std::vector<PauliWord>>& groups) {
    if (coefficient == 0.0) throw Error("Bell operator coefficients must be nonzero");
    if (groups.empty()) throw Error("a correlation term needs at least one group");
    CorrelationTerm term;
    term.coefficient = coefficient;
    std::vector<PauliWord> flat;
    for (const auto& group : groups) {
      if (group.empty()) throw Error("empty group in a correlation term");
      std::vector<std::size_t> ids;
      for (const auto& atom : group) {
        if (atom.num_qubits() != n_)
          throw Error("atom " + atom.str() + " does not act on " + std::to_string(n_) +
                      " qubits");
        if (!atom.is_hermitian())
          throw Error("atom " + atom.str() + " is not a valid observable");
        term.atom_sign *= atom.sign();
        ids.push_back(intern(atom.positive()));
        flat.push_back(atom);
      }
      term.groups.push_back(product_of(group));
      term.group_symbols.push_back(std::move(ids));
    }
    for (std::size_t i = 0; i < flat.size(); ++i)
      for (std::size_t j = i + 1; j < flat.size(); ++j)
        if (!commutes(flat[i], flat[j]))
          throw Error("term atoms " + flat[i].str() + " and " + flat[j].str() +
                      " do not commute");
    terms_.push_back(std::move(term));
    return *this;
  }

  // Convenience: every atom in its own group.
  BellOperatorBuilder& add_product_term(double coefficient, const std::vector<PauliWord>& atoms) {
    std::vector<std::vector<PauliWord>> groups;
    groups.reserve(atoms.size());
    for (const auto& atom : atoms) groups.push_back({atom});
    return add_term(coefficient, groups);
  }

  BellOperator build() { return BellOperator(n_, std::move(atoms_), std::move(terms_)); }

 private:
  std::size_t intern(const PauliWord& positive_atom) {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == positive_atom) return i;
    atoms_.push_back(positive_atom);
    return atoms_.size() - 1;
  }

  std::size_t n_;
  std::vector<PauliWord> atoms_;
  std::vector<CorrelationTerm> terms_;
};

// sum_i coefficient_i * <product partition i> on the given state.
inline double bell_value(const BellOperator& op, const StateVector& state) {
  if (op.num_qubits() != state.num_qubits())
    throw Error("operator and state qubit counts differ");
  double total = 0.0;
  for (const auto& term : op.terms())
    total += term.coefficient * expectation(term.groups, state);
  return total;
}

namespace detail {

inline std::vector<std::complex<double>> bell_matvec(
    const BellOperator& op, const std::vector<PauliWord>& products, double shift,
    const std::vector<std::complex<double>>& v) {
  std::vector<std::complex<double>> out(v.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = shift * v[i];
  for (std::size_t t = 0; t < products.size(); ++t)
    apply_pauli_add(products[t], v, out, op.terms()[t].coefficient);
  return out;
}

// Power iteration on the shifted positive-definite operator. Returns the
// converged Rayleigh quotient (still shifted).
inline double power_iterate(const BellOperator& op, const std::vector<PauliWord>& products,
                            double shift, double scale,
                            std::vector<std::complex<double>> v) {
  double norm = 0.0;
  for (const auto& a : v) norm += std::norm(a);
  norm = std::sqrt(norm);
  for (auto& a : v) a /= norm;

  double rayleigh = 0.0;
  for (int iter = 0; iter < 100000; ++iter) {
    auto w = bell_matvec(op, products, shift, v);
    std::complex<double> dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(v[i]) * w[i];
    rayleigh = dot.real();
    double residual2 = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) residual2 += std::norm(w[i] - rayleigh * v[i]);
    if (std::sqrt(residual2) <= 1e-10 * scale) break;
    double wnorm = 0.0;
    for (const auto& a : w) wnorm += std::norm(a);
    wnorm = std::sqrt(wnorm);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / wnorm;
  }
  return rayleigh;
}

}  // namespace detail

// Largest eigenvalue of the (Hermitian) operator, by power iteration on
// op + shift*I with a deterministic uniform start vector. A second fixed
// start covers the case where the uniform vector is orthogonal to the top
// eigenspace; both runs are deterministic.
inline double spectral_max(const BellOperator& op) {
  if (op.num_qubits() > StateVector::kMaxQubits)
    throw Error("spectral_max supports at most " + std::to_string(StateVector::kMaxQubits) +
                " qubits");
  std::vector<PauliWord> products;
  double coeff_sum = 0.0;
  for (const auto& term : op.terms()) {
    PauliWord product = term.product();
    if (!product.is_hermitian())
      throw Error("operator is not Hermitian: term product " + product.str());
    products.push_back(std::move(product));
    coeff_sum += std::abs(term.coefficient);
  }
  const std::size_t dim = std::size_t{1} << op.num_qubits();
  if (products.empty()) return 0.0;

  const double shift = coeff_sum + 1.0;
  const double scale = shift + coeff_sum;

  std::vector<std::complex<double>> uniform(dim, 1.0);
  double best = detail::power_iterate(op, products, shift, scale, std::move(uniform));

  std::mt19937 rng(0x2d358dccu);
  std::vector<std::complex<double>> scrambled(dim);
  for (auto& a : scrambled)
    a = {static_cast<double>(rng()) / rng.max() - 0.5,
         static_cast<double>(rng()) / rng.max() - 0.5};
  best = std::max(best, detail::power_iterate(op, products, shift, scale, std::move(scrambled)));

  return best - shift;
}

}  // namespace ksv
