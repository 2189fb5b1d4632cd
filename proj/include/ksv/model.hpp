#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksv/bell.hpp"
#include "ksv/errors.hpp"
#include "ksv/pauli.hpp"
#include "ksv/state_vector.hpp"

namespace ksv {

// Maps a qubit slot to a free-form tag (degree-of-freedom name, wire label...).
struct QubitLabel {
  std::size_t index = 0;
  std::string tag;
};

// A context: mutually commuting observables measured together. The grouping
// partitions the members into cascade stages and defines the product
// partition of the induced correlation term; default is one stage per member.
class Context {
 public:
  Context(std::string label, std::vector<PauliWord> members,
          std::vector<std::vector<std::size_t>> grouping = {})
      : label_(std::move(label)), members_(std::move(members)), grouping_(std::move(grouping)) {
    if (members_.empty()) throw Error("context '" + label_ + "' has no members");
    const std::size_t n = members_[0].num_qubits();
    for (const auto& m : members_) {
      if (m.num_qubits() != n)
        throw Error("context '" + label_ + "': member " + m.str() + " has wrong qubit count");
      if (!m.is_hermitian())
        throw Error("context '" + label_ + "': member " + m.str() + " is not an observable");
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
      for (std::size_t j = i + 1; j < members_.size(); ++j) {
        if (members_[i].positive() == members_[j].positive())
          throw Error("context '" + label_ + "': duplicate member " + members_[j].str());
        if (!commutes(members_[i], members_[j]))
          throw Error("context '" + label_ + "': members " + members_[i].str() + " and " +
                      members_[j].str() + " do not commute");
      }
    }
    if (grouping_.empty()) {
      for (std::size_t i = 0; i < members_.size(); ++i) grouping_.push_back({i});
    } else {
      std::vector<bool> seen(members_.size(), false);
      for (const auto& block : grouping_) {
        if (block.empty()) throw Error("context '" + label_ + "': empty grouping block");
        for (std::size_t idx : block) {
          if (idx >= members_.size())
            throw Error("context '" + label_ + "': grouping index " + std::to_string(idx) +
                        " out of range");
          if (seen[idx])
            throw Error("context '" + label_ + "': grouping repeats member " +
                        std::to_string(idx));
          seen[idx] = true;
        }
      }
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
          throw Error("context '" + label_ + "': grouping misses member " + std::to_string(i));
    }
  }

  const std::string& label() const { return label_; }
  const std::vector<PauliWord>& members() const { return members_; }
  const std::vector<std::vector<std::size_t>>& grouping() const { return grouping_; }
  std::size_t num_qubits() const { return members_[0].num_qubits(); }
  bool has_default_grouping() const {
    for (std::size_t i = 0; i < grouping_.size(); ++i)
      if (grouping_[i].size() != 1 || grouping_[i][0] != i) return false;
    return grouping_.size() == members_.size();
  }

  PauliWord product() const { return product_of(members_); }

 private:
  std::string label_;
  std::vector<PauliWord> members_;
  std::vector<std::vector<std::size_t>> grouping_;
};

// The context product did not have the state as a +1/-1 eigenvector.
class NotEigenstateError : public Error {
 public:
  NotEigenstateError(const std::string& label, double residual_plus, double residual_minus)
      : Error("state is not an eigenstate of context '" + label + "' (residuals +1: " +
              std::to_string(residual_plus) + ", -1: " + std::to_string(residual_minus) + ")"),
        residual_plus_(residual_plus),
        residual_minus_(residual_minus) {}

  double residual_plus() const { return residual_plus_; }
  double residual_minus() const { return residual_minus_; }

 private:
  double residual_plus_;
  double residual_minus_;
};

inline constexpr double kEigenTolerance = 1e-9;

// The alpha with ||product * state - alpha * state|| <= tolerance.
inline int eigen_sign(const Context& context, const StateVector& state,
                      double tolerance = kEigenTolerance) {
  if (context.num_qubits() != state.num_qubits())
    throw Error("context '" + context.label() + "' and state qubit counts differ");
  const StateVector mapped = apply_pauli(context.product(), state);
  double plus2 = 0.0;
  double minus2 = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    plus2 += std::norm(mapped.amp(i) - state.amp(i));
    minus2 += std::norm(mapped.amp(i) + state.amp(i));
  }
  const double plus = std::sqrt(plus2);
  const double minus = std::sqrt(minus2);
  if (plus <= tolerance) return +1;
  if (minus <= tolerance) return -1;
  throw NotEigenstateError(context.label(), plus, minus);
}

// A noncontextual model: contexts, an optional reference state, and the
// derived per-context signs. The assignment symbols are the distinct member
// observables across all contexts, in first-appearance order.
class KsModel {
 public:
  KsModel(std::size_t n, std::vector<Context> contexts, std::optional<StateVector> state,
          std::vector<int> signs, std::vector<PauliWord> symbols,
          std::vector<QubitLabel> labels)
      : n_(n),
        contexts_(std::move(contexts)),
        state_(std::move(state)),
        signs_(std::move(signs)),
        symbols_(std::move(symbols)),
        labels_(std::move(labels)) {}

  std::size_t num_qubits() const { return n_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  const std::optional<StateVector>& state() const { return state_; }
  const std::vector<int>& signs() const { return signs_; }
  const std::vector<PauliWord>& symbols() const { return symbols_; }
  const std::vector<QubitLabel>& labels() const { return labels_; }

  std::size_t symbol_id(const PauliWord& member) const {
    const PauliWord positive = member.positive();
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i] == positive) return i;
    throw Error("word " + member.str() + " is not an assignment symbol of this model");
  }

 private:
  std::size_t n_;
  std::vector<Context> contexts_;
  std::optional<StateVector> state_;
  std::vector<int> signs_;
  std::vector<PauliWord> symbols_;
  std::vector<QubitLabel> labels_;
};

// Derives the signs: with a state via eigen_sign, otherwise every context
// product must itself be +1/-1 times the identity.
inline KsModel build_model(std::vector<Context> contexts, std::optional<StateVector> state,
                           std::vector<QubitLabel> labels = {}) {
  if (contexts.empty()) throw Error("a model needs at least one context");
  const std::size_t n = contexts[0].num_qubits();
  for (const auto& c : contexts)
    if (c.num_qubits() != n)
      throw Error("context '" + c.label() + "' acts on a different qubit count");
  if (state && state->num_qubits() != n)
    throw Error("state qubit count does not match the contexts");

  if (labels.empty()) {
    for (std::size_t q = 0; q < n; ++q) labels.push_back({q, "q" + std::to_string(q)});
  }
  if (labels.size() != n) throw Error("expected one label per qubit");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].index >= n) throw Error("label index " + std::to_string(labels[i].index) +
                                          " out of range");
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i].tag == labels[j].tag)
        throw Error("duplicate qubit tag '" + labels[i].tag + "'");
  }

  std::vector<int> signs;
  for (const auto& context : contexts) {
    if (state) {
      signs.push_back(eigen_sign(context, *state));
    } else {
      const PauliWord product = context.product();
      if (!product.has_identity_letters() || !product.is_hermitian())
        throw Error("context '" + context.label() + "': product " + product.str() +
                    " is not +/-identity and the model has no state to derive its sign");
      signs.push_back(product.sign());
    }
  }

  std::vector<PauliWord> symbols;
  auto intern = [&symbols](const PauliWord& member) {
    const PauliWord positive = member.positive();
    for (const auto& s : symbols)
      if (s == positive) return;
    symbols.push_back(positive);
  };
  for (const auto& context : contexts)
    for (const auto& member : context.members()) intern(member);

  return KsModel(n, std::move(contexts), std::move(state), std::move(signs), std::move(symbols),
                 std::move(labels));
}

// B = sum_i alpha_i * (context i partitioned per its grouping).
inline BellOperator bell_operator_of(const KsModel& model) {
  BellOperatorBuilder builder(model.num_qubits());
  for (std::size_t i = 0; i < model.contexts().size(); ++i) {
    const Context& context = model.contexts()[i];
    std::vector<std::vector<PauliWord>> groups;
    for (const auto& block : context.grouping()) {
      std::vector<PauliWord> group;
      for (std::size_t idx : block) group.push_back(context.members()[idx]);
      groups.push_back(std::move(group));
    }
    builder.add_term(model.signs()[i], groups);
  }
  return builder.build();
}

}  // namespace ksv
