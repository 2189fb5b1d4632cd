#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ksv/errors.hpp"
#include "ksv/pauli.hpp"

namespace ksv {

// Dense 2^n-amplitude state. Qubit 0 is the leftmost letter of a word and the
// most significant bit of the amplitude index, so basis index 3 of a 3-qubit
// state is |011>.
class StateVector {
 public:
  static constexpr std::size_t kMaxQubits = 12;
  static constexpr double kNormTolerance = 1e-12;

  StateVector(std::size_t n, std::vector<std::complex<double>> amps)
      : n_(n), amps_(std::move(amps)) {
    if (n < 1 || n > kMaxQubits)
      throw Error("state must have between 1 and " + std::to_string(kMaxQubits) + " qubits");
    if (amps_.size() != (std::size_t{1} << n))
      throw Error("state on " + std::to_string(n) + " qubits needs " +
                  std::to_string(std::size_t{1} << n) + " amplitudes, got " +
                  std::to_string(amps_.size()));
    double norm2 = 0.0;
    for (const auto& a : amps_) norm2 += std::norm(a);
    if (std::abs(std::sqrt(norm2) - 1.0) > kNormTolerance)
      throw Error("state is not normalized (norm " + std::to_string(std::sqrt(norm2)) + ")");
  }

  // (|0...0> + sign|1...1>)/sqrt(2)
  static StateVector ghz(std::size_t n, int sign = +1) {
    if (sign != +1 && sign != -1) throw Error("GHZ sign must be +1 or -1");
    std::vector<std::complex<double>> amps(std::size_t{1} << n, 0.0);
    const double r = 1.0 / std::sqrt(2.0);
    amps.front() = r;
    amps.back() = sign * r;
    return StateVector(n, std::move(amps));
  }

  static StateVector basis(std::size_t n, std::size_t index) {
    std::vector<std::complex<double>> amps(std::size_t{1} << n, 0.0);
    if (index >= amps.size()) throw Error("basis index out of range");
    amps[index] = 1.0;
    return StateVector(n, std::move(amps));
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<std::complex<double>>& amps() const { return amps_; }
  std::complex<double> amp(std::size_t i) const { return amps_[i]; }

 private:
  std::size_t n_;
  std::vector<std::complex<double>> amps_;
};

inline StateVector make_ghz(std::size_t n, int sign = +1) { return StateVector::ghz(n, sign); }

namespace detail {

// out += scale * (word applied to in). Works on raw amplitude buffers so the
// spectral code can reuse it without renormalizing.
inline void apply_pauli_add(const PauliWord& word, std::span<const std::complex<double>> in,
                            std::span<std::complex<double>> out, std::complex<double> scale) {
  const std::size_t n = word.num_qubits();
  std::size_t flip_mask = 0;   // X and Y letters flip the basis bit
  std::size_t sign_mask = 0;   // Y and Z letters pick up (-1)^bit
  int y_count = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    switch (word.letter(q)) {
      case Pauli::I: break;
      case Pauli::X: flip_mask |= bit; break;
      case Pauli::Y: flip_mask |= bit; sign_mask |= bit; ++y_count; break;
      case Pauli::Z: sign_mask |= bit; break;
    }
  }
  const std::complex<double> base =
      scale * word.phase().value() * Phase::from_exponent(y_count).value();
  for (std::size_t idx = 0; idx < in.size(); ++idx) {
    const bool negative = std::popcount(idx & sign_mask) & 1;
    out[idx ^ flip_mask] += (negative ? -base : base) * in[idx];
  }
}

}  // namespace detail

// word|state>, exact phase included; the word need not be Hermitian.
inline StateVector apply_pauli(const PauliWord& word, const StateVector& state) {
  if (word.num_qubits() != state.num_qubits())
    throw Error("dimension mismatch: word " + word.str() + " on " +
                std::to_string(state.num_qubits()) + "-qubit state");
  std::vector<std::complex<double>> out(state.dim(), 0.0);
  detail::apply_pauli_add(word, state.amps(), out, 1.0);
  return StateVector(state.num_qubits(), std::move(out));
}

inline std::complex<double> inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw Error("dimension mismatch in inner product");
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += std::conj(a.amp(i)) * b.amp(i);
  return sum;
}

// <state| word |state> for a Hermitian word.
inline double expectation(const PauliWord& word, const StateVector& state) {
  if (!word.is_hermitian())
    throw Error("expectation of non-Hermitian word " + word.str());
  const std::complex<double> value = inner_product(state, apply_pauli(word, state));
  if (std::abs(value.imag()) > 1e-12)
    throw Error("expectation has nonzero imaginary part " + std::to_string(value.imag()));
  return value.real();
}

// <state| w1 w2 ... wk |state> for mutually commuting words whose product is
// Hermitian. The value is independent of the ordering and of how the words are
// partitioned into blocks, since commuting products are order-free.
inline double expectation(std::span<const PauliWord> words, const StateVector& state) {
  if (words.empty()) throw Error("expectation of an empty word list");
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = i + 1; j < words.size(); ++j)
      if (!commutes(words[i], words[j]))
        throw Error("words " + words[i].str() + " and " + words[j].str() + " do not commute");
  const PauliWord product = product_of(words);
  if (!product.is_hermitian())
    throw Error("product " + product.str() + " is not Hermitian");
  return expectation(product, state);
}

inline double expectation(const std::vector<PauliWord>& words, const StateVector& state) {
  return expectation(std::span<const PauliWord>(words), state);
}

}  // namespace ksv
