#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ksv/errors.hpp"

namespace ksv {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

// Element of the unit group {+1, +i, -1, -i}, stored as the exponent of i.
class Phase {
 public:
  constexpr Phase() = default;
  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase imaginary() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_imaginary() { return Phase(3); }
  static constexpr Phase from_exponent(int k) { return Phase(((k % 4) + 4) % 4); }

  constexpr int exponent() const { return k_; }
  constexpr bool is_real() const { return (k_ & 1) == 0; }

  // +1 or -1; only meaningful for real phases.
  int real_sign() const {
    if (!is_real()) throw Error("phase " + std::string(prefix()) + " has no real sign");
    return k_ == 0 ? +1 : -1;
  }

  std::complex<double> value() const {
    static constexpr std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k_];
  }

  // Textual prefix used by the word syntax: "", "i", "-", "-i".
  std::string_view prefix() const {
    static constexpr std::string_view table[4] = {"", "i", "-", "-i"};
    return table[k_];
  }

  friend constexpr Phase operator*(Phase a, Phase b) { return Phase((a.k_ + b.k_) & 3); }
  friend constexpr bool operator==(Phase a, Phase b) = default;

 private:
  explicit constexpr Phase(int k) : k_(static_cast<std::uint8_t>(k)) {}
  std::uint8_t k_ = 0;
};

namespace detail {

struct LetterProduct {
  Pauli letter;
  std::uint8_t phase_exponent;
};

// Single-qubit products with exact unit-group phases:
// X*Y = iZ, Y*Z = iX, Z*X = iY and the reversed orders pick up -i.
inline constexpr LetterProduct kLetterProduct[4][4] = {
    {{Pauli::I, 0}, {Pauli::X, 0}, {Pauli::Y, 0}, {Pauli::Z, 0}},
    {{Pauli::X, 0}, {Pauli::I, 0}, {Pauli::Z, 1}, {Pauli::Y, 3}},
    {{Pauli::Y, 0}, {Pauli::Z, 3}, {Pauli::I, 0}, {Pauli::X, 1}},
    {{Pauli::Z, 0}, {Pauli::Y, 1}, {Pauli::X, 3}, {Pauli::I, 0}},
};

}  // namespace detail

// A signed n-qubit Pauli word: a phase from {+1, +i, -1, -i} times a tensor
// product of single-qubit letters. Immutable value type; the phase is part of
// the canonical form, so equality compares letters and phase.
class PauliWord {
 public:
  explicit PauliWord(std::vector<Pauli> letters, Phase phase = Phase::one())
      : letters_(std::move(letters)), phase_(phase) {
    if (letters_.empty()) throw Error("a Pauli word needs at least one qubit");
  }

  static PauliWord identity(std::size_t n) {
    return PauliWord(std::vector<Pauli>(n, Pauli::I));
  }

  // Text syntax: optional sign prefix (+, -, +i, -i, i), then letters IXYZ.
  static PauliWord parse(std::string_view text) {
    std::string_view rest = text;
    int exponent = 0;
    if (rest.starts_with('+')) rest.remove_prefix(1);
    if (rest.starts_with('-')) {
      exponent = 2;
      rest.remove_prefix(1);
    }
    if (rest.starts_with('i')) {
      exponent += 1;
      rest.remove_prefix(1);
    }
    if (rest.empty())
      throw ParseError("invalid Pauli word '" + std::string(text) + "': no letters");
    std::vector<Pauli> letters;
    letters.reserve(rest.size());
    for (char c : rest) {
      switch (c) {
        case 'I': letters.push_back(Pauli::I); break;
        case 'X': letters.push_back(Pauli::X); break;
        case 'Y': letters.push_back(Pauli::Y); break;
        case 'Z': letters.push_back(Pauli::Z); break;
        default:
          throw ParseError("invalid Pauli word '" + std::string(text) +
                           "': unexpected character '" + std::string(1, c) + "'");
      }
    }
    return PauliWord(std::move(letters), Phase::from_exponent(exponent));
  }

  std::size_t num_qubits() const { return letters_.size(); }
  Pauli letter(std::size_t qubit) const { return letters_[qubit]; }
  const std::vector<Pauli>& letters() const { return letters_; }
  Phase phase() const { return phase_; }

  // A word is a valid observable iff its phase is real.
  bool is_hermitian() const { return phase_.is_real(); }
  int sign() const { return phase_.real_sign(); }

  bool has_identity_letters() const {
    for (Pauli p : letters_)
      if (p != Pauli::I) return false;
    return true;
  }

  bool is_identity() const { return phase_ == Phase::one() && has_identity_letters(); }

  // Same letters with phase +1.
  PauliWord positive() const { return PauliWord(letters_, Phase::one()); }

  PauliWord with_phase(Phase phase) const { return PauliWord(letters_, phase); }

  std::string str() const {
    std::string out(phase_.prefix());
    out.reserve(out.size() + letters_.size());
    for (Pauli p : letters_) out.push_back(pauli_char(p));
    return out;
  }

  friend bool operator==(const PauliWord&, const PauliWord&) = default;

 private:
  std::vector<Pauli> letters_;
  Phase phase_;
};

inline PauliWord multiply(const PauliWord& a, const PauliWord& b) {
  if (a.num_qubits() != b.num_qubits())
    throw Error("dimension mismatch: cannot multiply " + a.str() + " by " + b.str());
  std::vector<Pauli> letters(a.num_qubits());
  Phase phase = a.phase() * b.phase();
  for (std::size_t q = 0; q < letters.size(); ++q) {
    const auto& cell =
        detail::kLetterProduct[static_cast<int>(a.letter(q))][static_cast<int>(b.letter(q))];
    letters[q] = cell.letter;
    phase = phase * Phase::from_exponent(cell.phase_exponent);
  }
  return PauliWord(std::move(letters), phase);
}

inline PauliWord operator*(const PauliWord& a, const PauliWord& b) { return multiply(a, b); }

// True iff the words commute: the number of positions where both letters are
// non-identity and different must be even.
inline bool commutes(const PauliWord& a, const PauliWord& b) {
  if (a.num_qubits() != b.num_qubits())
    throw Error("dimension mismatch: cannot compare " + a.str() + " with " + b.str());
  int anticommuting = 0;
  for (std::size_t q = 0; q < a.num_qubits(); ++q) {
    Pauli pa = a.letter(q);
    Pauli pb = b.letter(q);
    if (pa != Pauli::I && pb != Pauli::I && pa != pb) ++anticommuting;
  }
  return anticommuting % 2 == 0;
}

// Left-to-right product of a nonempty list of equal-width words.
inline PauliWord product_of(std::span<const PauliWord> words) {
  if (words.empty()) throw Error("product of an empty word list");
  PauliWord result = words[0];
  for (std::size_t i = 1; i < words.size(); ++i) result = multiply(result, words[i]);
  return result;
}

inline PauliWord product_of(const std::vector<PauliWord>& words) {
  return product_of(std::span<const PauliWord>(words));
}

// Indices of the non-identity letters, ascending.
inline std::vector<std::size_t> support(const PauliWord& word) {
  std::vector<std::size_t> indices;
  for (std::size_t q = 0; q < word.num_qubits(); ++q)
    if (word.letter(q) != Pauli::I) indices.push_back(q);
  return indices;
}

}  // namespace ksv
