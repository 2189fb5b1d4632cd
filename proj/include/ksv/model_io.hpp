#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ksv/errors.hpp"
#include "ksv/model.hpp"
#include "ksv/pauli.hpp"
#include "ksv/state_vector.hpp"

namespace ksv {

namespace detail {

inline std::optional<std::string> preset_name(const StateVector& state) {
  const std::size_t n = state.num_qubits();
  auto matches = [&state](const StateVector& other) {
    for (std::size_t i = 0; i < state.dim(); ++i)
      if (std::abs(state.amp(i) - other.amp(i)) > 1e-15) return false;
    return true;
  };
  if (matches(StateVector::ghz(n, +1))) return "ghz+";
  if (matches(StateVector::ghz(n, -1))) return "ghz-";
  for (std::size_t idx = 0; idx < state.dim(); ++idx) {
    if (std::abs(state.amp(idx) - std::complex<double>(1.0, 0.0)) <= 1e-15) {
      std::string bits;
      for (std::size_t q = 0; q < n; ++q) bits.push_back((idx >> (n - 1 - q)) & 1 ? '1' : '0');
      return "basis:" + bits;
    }
  }
  return std::nullopt;
}

inline StateVector state_from_preset(const std::string& name, std::size_t n) {
  if (name == "ghz+") return StateVector::ghz(n, +1);
  if (name == "ghz-") return StateVector::ghz(n, -1);
  if (name.starts_with("basis:")) {
    const std::string bits = name.substr(6);
    if (bits.size() != n) throw ParseError("state '" + name + "' needs " + std::to_string(n) +
                                           " bits");
    std::size_t idx = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ParseError("state '" + name + "' is not a bitstring");
      idx = (idx << 1) | (c == '1');
    }
    return StateVector::basis(n, idx);
  }
  throw ParseError("unknown state preset '" + name + "'");
}

}  // namespace detail

// Model file schema:
// {
//   "n": 3,
//   "labels": ["o", "s", "p"],                       // optional
//   "state": "ghz+" | "basis:010" | [[re, im], ...], // optional
//   "contexts": [
//     {"label": "...", "members": ["XII", "IYY", ...],
//      "grouping": [[0], [1, 2]]}                    // optional
//   ]
// }
inline nlohmann::json model_to_json(const KsModel& model) {
  nlohmann::json doc;
  doc["n"] = model.num_qubits();
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& label : model.labels()) labels.push_back(label.tag);
  doc["labels"] = labels;
  if (model.state()) {
    if (auto preset = detail::preset_name(*model.state())) {
      doc["state"] = *preset;
    } else {
      nlohmann::json amps = nlohmann::json::array();
      for (const auto& a : model.state()->amps()) amps.push_back({a.real(), a.imag()});
      doc["state"] = amps;
    }
  }
  nlohmann::json contexts = nlohmann::json::array();
  for (const auto& context : model.contexts()) {
    nlohmann::json c;
    c["label"] = context.label();
    nlohmann::json members = nlohmann::json::array();
    for (const auto& member : context.members()) members.push_back(member.str());
    c["members"] = members;
    if (!context.has_default_grouping()) c["grouping"] = context.grouping();
    contexts.push_back(std::move(c));
  }
  doc["contexts"] = contexts;
  return doc;
}

inline KsModel model_from_json(const nlohmann::json& doc, const std::string& origin = "model") {
  if (!doc.is_object()) throw ParseError(origin + ": expected a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned())
    throw ParseError(origin + ": missing positive integer field 'n'");
  const std::size_t n = doc["n"].get<std::size_t>();

  std::vector<QubitLabel> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array() || doc["labels"].size() != n)
      throw ParseError(origin + ": 'labels' must list one tag per qubit");
    for (std::size_t q = 0; q < n; ++q) labels.push_back({q, doc["labels"][q].get<std::string>()});
  }

  std::optional<StateVector> state;
  if (doc.contains("state") && !doc["state"].is_null()) {
    const auto& s = doc["state"];
    if (s.is_string()) {
      state = detail::state_from_preset(s.get<std::string>(), n);
    } else if (s.is_array()) {
      if (s.size() != (std::size_t{1} << n))
        throw ParseError(origin + ": state needs " + std::to_string(std::size_t{1} << n) +
                         " amplitude pairs");
      std::vector<std::complex<double>> amps;
      for (const auto& pair : s) {
        if (!pair.is_array() || pair.size() != 2)
          throw ParseError(origin + ": amplitudes must be [re, im] pairs");
        amps.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
      double norm = 0.0;
      for (const auto& a : amps) norm += std::norm(a);
      norm = std::sqrt(norm);
      if (norm <= 0.0) throw ParseError(origin + ": state has zero norm");
      for (auto& a : amps) a /= norm;
      state = StateVector(n, std::move(amps));
    } else {
      throw ParseError(origin + ": 'state' must be a preset name or an amplitude list");
    }
  }

  if (!doc.contains("contexts") || !doc["contexts"].is_array() || doc["contexts"].empty())
    throw ParseError(origin + ": missing nonempty 'contexts' array");
  std::vector<Context> contexts;
  for (std::size_t i = 0; i < doc["contexts"].size(); ++i) {
    const auto& c = doc["contexts"][i];
    const std::string where = origin + ": context " + std::to_string(i);
    if (!c.is_object() || !c.contains("members") || !c["members"].is_array())
      throw ParseError(where + ": needs a 'members' array");
    const std::string label = c.value("label", "context-" + std::to_string(i));
    std::vector<PauliWord> members;
    for (const auto& text : c["members"]) {
      PauliWord word = PauliWord::parse(text.get<std::string>());
      if (word.num_qubits() != n)
        throw ParseError(where + " ('" + label + "'): member " + word.str() + " has " +
                         std::to_string(word.num_qubits()) + " letters, expected " +
                         std::to_string(n));
      members.push_back(std::move(word));
    }
    std::vector<std::vector<std::size_t>> grouping;
    if (c.contains("grouping")) {
      if (!c["grouping"].is_array()) throw ParseError(where + ": 'grouping' must be an array");
      for (const auto& block : c["grouping"])
        grouping.push_back(block.get<std::vector<std::size_t>>());
    }
    try {
      contexts.emplace_back(label, std::move(members), std::move(grouping));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }

  try {
    return build_model(std::move(contexts), std::move(state), std::move(labels));
  } catch (const Error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline KsModel model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return model_from_json(doc, path);
}

}  // namespace ksv
