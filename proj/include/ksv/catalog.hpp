#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ksv/bell.hpp"
#include "ksv/bound.hpp"
#include "ksv/errors.hpp"
#include "ksv/feasibility.hpp"
#include "ksv/model.hpp"
#include "ksv/pauli.hpp"
#include "ksv/state_vector.hpp"

namespace ksv::catalog {

struct Expected {
  double classical_bound = 0.0;
  double quantum_value = 0.0;
  // "published" for values taken from the source inequalities, "computed"
  // for values this library derives itself.
  std::string bound_source;
  std::string quantum_source;
};

struct Entry {
  std::string name;
  KsModel model;
  BellOperator op;
  Expected expected;
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> kNames = {"mermin-ghz3", "pentagram", "square-b",
                                                  "square-c"};
  return kNames;
}

namespace detail {

inline std::vector<QubitLabel> osp_labels() {
  return {{0, "o"}, {1, "s"}, {2, "p"}};
}

inline Entry verified(Entry entry) {
  const BoundResult bound = classical_bound(entry.op);
  if (std::abs(bound.bound - entry.expected.classical_bound) > 1e-9)
    throw Error("catalog entry '" + entry.name + "': classical bound " +
                std::to_string(bound.bound) + " does not match expected " +
                std::to_string(entry.expected.classical_bound));
  const double quantum = entry.model.state() ? bell_value(entry.op, *entry.model.state())
                                             : spectral_max(entry.op);
  if (std::abs(quantum - entry.expected.quantum_value) > 1e-9)
    throw Error("catalog entry '" + entry.name + "': quantum value " + std::to_string(quantum) +
                " does not match expected " + std::to_string(entry.expected.quantum_value));
  return entry;
}

inline Entry make_mermin_ghz3() {
  auto w = [](const char* s) { return PauliWord::parse(s); };
  std::vector<Context> contexts = {
      Context("Xo.Ys.Yp", {w("XII"), w("IYI"), w("IIY")}),
      Context("Yo.Xs.Yp", {w("YII"), w("IXI"), w("IIY")}),
      Context("Yo.Ys.Xp", {w("YII"), w("IYI"), w("IIX")}),
      Context("Xo.Xs.Xp", {w("XII"), w("IXI"), w("IIX")}),
  };
  KsModel model = build_model(std::move(contexts), StateVector::ghz(3), osp_labels());
  BellOperator op = bell_operator_of(model);
  return {"mermin-ghz3", std::move(model), std::move(op),
          {2.0, 4.0, "published", "published"}};
}

inline Entry make_pentagram() {
  auto w = [](const char* s) { return PauliWord::parse(s); };
  // Four lines pair a three-letter composite with its single-qubit factors
  // (product +identity); the fifth line holds the four composites (product
  // -identity). Ten observables, each on exactly two lines.
  std::vector<Context> contexts = {
      Context("line-XYY", {w("XYY"), w("XII"), w("IYI"), w("IIY")}),
      Context("line-YXY", {w("YXY"), w("YII"), w("IXI"), w("IIY")}),
      Context("line-YYX", {w("YYX"), w("YII"), w("IYI"), w("IIX")}),
      Context("line-XXX", {w("XXX"), w("XII"), w("IXI"), w("IIX")}),
      Context("line-composites", {w("XYY"), w("YXY"), w("YYX"), w("XXX")}),
  };
  KsModel model = build_model(std::move(contexts), std::nullopt, osp_labels());
  BellOperator op = bell_operator_of(model);
  return {"pentagram", std::move(model), std::move(op),
          {3.0, 5.0, "computed", "computed"}};
}

inline Entry make_square_b() {
  auto w = [](const char* s) { return PauliWord::parse(s); };
  std::vector<Context> contexts = {
      Context("Xo.YsYp", {w("XII"), w("IYY")}),
      Context("Xs.YoYp", {w("IXI"), w("YIY")}),
      Context("Xp.YoYs", {w("IIX"), w("YYI")}),
      Context("Xo.Xs.Xp", {w("XII"), w("IXI"), w("IIX")}),
      Context("YsYp.YoYp.YoYs", {w("IYY"), w("YIY"), w("YYI")}),
  };
  KsModel model = build_model(std::move(contexts), StateVector::ghz(3), osp_labels());
  BellOperator op = bell_operator_of(model);
  return {"square-b", std::move(model), std::move(op),
          {3.0, 5.0, "published", "published"}};
}

inline Entry make_square_c() {
  auto w = [](const char* s) { return PauliWord::parse(s); };
  std::vector<Context> contexts = {
      Context("Xo.Ys.Yp", {w("XII"), w("IYI"), w("IIY")}),
      Context("Yo.Xs.Yp", {w("YII"), w("IXI"), w("IIY")}),
      Context("YoYs.Xp", {w("YYI"), w("IIX")}),
      Context("Xo.Xs.Xp", {w("XII"), w("IXI"), w("IIX")}),
      Context("Ys.Yo.YsYo", {w("IYI"), w("YII"), w("YYI")}),
  };
  KsModel model = build_model(std::move(contexts), StateVector::ghz(3), osp_labels());
  BellOperator op = bell_operator_of(model);
  return {"square-c", std::move(model), std::move(op),
          {3.0, 5.0, "published", "computed"}};
}

}  // namespace detail

inline Entry get(std::string_view name) {
  if (name == "mermin-ghz3") return detail::verified(detail::make_mermin_ghz3());
  if (name == "pentagram") return detail::verified(detail::make_pentagram());
  if (name == "square-b") return detail::verified(detail::make_square_b());
  if (name == "square-c") return detail::verified(detail::make_square_c());
  throw Error("unknown model '" + std::string(name) + "'");
}

// The n-qubit generalization: one context per n-fold X/Y word with an even
// number of Y letters, split into single-qubit members, with signs read off
// the GHZ state. The induced operator has quantum value 2^(n-1) on GHZ_n.
inline Entry ghz_mermin(std::size_t n) {
  if (n < 2 || n > 5) throw Error("ghz-mermin generator supports 2..5 qubits");
  const StateVector ghz = StateVector::ghz(n);
  std::vector<Context> contexts;
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << n); ++pattern) {
    int y_count = 0;
    for (std::size_t q = 0; q < n; ++q)
      if ((pattern >> (n - 1 - q)) & 1) ++y_count;
    if (y_count % 2) continue;
    std::string label;
    std::vector<PauliWord> members;
    for (std::size_t q = 0; q < n; ++q) {
      const bool is_y = (pattern >> (n - 1 - q)) & 1;
      label.push_back(is_y ? 'Y' : 'X');
      std::vector<Pauli> letters(n, Pauli::I);
      letters[q] = is_y ? Pauli::Y : Pauli::X;
      members.emplace_back(std::move(letters));
    }
    contexts.emplace_back(std::move(label), std::move(members));
  }
  KsModel model = build_model(std::move(contexts), ghz);
  BellOperator op = bell_operator_of(model);
  const double quantum = static_cast<double>(std::size_t{1} << (n - 1));
  const double bound = classical_bound(op).bound;
  Entry entry{"ghz-mermin-" + std::to_string(n), std::move(model), std::move(op),
              {bound, quantum, "computed", "computed"}};
  return detail::verified(std::move(entry));
}

}  // namespace ksv::catalog
