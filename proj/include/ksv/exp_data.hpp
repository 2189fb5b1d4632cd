#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ksv/errors.hpp"
#include "ksv/pauli.hpp"

namespace ksv {

enum class ErrorMode { kLinear, kQuadrature, kPoisson };

inline ErrorMode error_mode_from_string(std::string_view name) {
  if (name == "linear") return ErrorMode::kLinear;
  if (name == "quadrature") return ErrorMode::kQuadrature;
  if (name == "poisson") return ErrorMode::kPoisson;
  throw Error("unknown error mode '" + std::string(name) + "'");
}

inline std::string to_string(ErrorMode mode) {
  switch (mode) {
    case ErrorMode::kLinear: return "linear";
    case ErrorMode::kQuadrature: return "quadrature";
    default: return "poisson";
  }
}

struct ValueWithError {
  double value = 0.0;
  double sigma = 0.0;
};

// Outcome statistics of one measurement setting (one letter X/Y/Z per qubit).
// Outcomes are bitstrings; listed probabilities must sum to 1 within 0.02
// (published data is rounded). Missing outcomes count as probability zero.
struct SettingRecord {
  std::string setting;
  bool counts = false;  // value column holds raw counts instead of probabilities
  std::map<std::string, double> outcomes;
  std::map<std::string, double> sigma;

  std::size_t num_qubits() const { return setting.size(); }
  bool incomplete() const { return outcomes.size() < (std::size_t{1} << setting.size()); }
};

namespace detail {

inline int outcome_eigenvalue(const std::string& bits) {
  int ones = 0;
  for (char c : bits)
    if (c == '1') ++ones;
  return ones % 2 ? -1 : +1;
}

inline void validate_record(const SettingRecord& rec) {
  if (rec.setting.empty()) throw Error("record has an empty setting");
  for (char c : rec.setting)
    if (c != 'X' && c != 'Y' && c != 'Z')
      throw Error("setting '" + rec.setting + "' has letters outside XYZ");
  if (rec.outcomes.empty()) throw Error("setting '" + rec.setting + "' lists no outcomes");
  double sum = 0.0;
  for (const auto& [bits, value] : rec.outcomes) {
    if (bits.size() != rec.setting.size())
      throw Error("setting '" + rec.setting + "': outcome '" + bits + "' has wrong length");
    for (char c : bits)
      if (c != '0' && c != '1')
        throw Error("setting '" + rec.setting + "': outcome '" + bits + "' is not a bitstring");
    if (value < 0.0)
      throw Error("setting '" + rec.setting + "': negative " +
                  (rec.counts ? std::string("count") : std::string("probability")) + " for '" +
                  bits + "'");
    sum += value;
  }
  if (rec.counts) {
    if (sum <= 0.0) throw Error("setting '" + rec.setting + "': no counts recorded");
  } else if (std::abs(sum - 1.0) > 0.02) {
    throw Error("setting '" + rec.setting + "': probabilities sum to " + std::to_string(sum));
  }
  for (const auto& [bits, s] : rec.sigma)
    if (s < 0.0) throw Error("setting '" + rec.setting + "': negative sigma for '" + bits + "'");
}

inline double combine(ErrorMode mode, const std::vector<double>& sigmas) {
  if (mode == ErrorMode::kLinear) {
    double sum = 0.0;
    for (double s : sigmas) sum += s;
    return sum;
  }
  double sum2 = 0.0;
  for (double s : sigmas) sum2 += s * s;
  return std::sqrt(sum2);
}

}  // namespace detail

// E = sum_k s_k p_k with s_k = (-1)^(number of 1 bits). Sigma per mode:
// linear sum / quadrature of the per-outcome sigmas, or the Poisson estimate
// sqrt((1 - E^2)/N) when raw counts are given.
inline ValueWithError expectation_from_record(const SettingRecord& rec,
                                              ErrorMode mode = ErrorMode::kLinear) {
  detail::validate_record(rec);
  double total = 0.0;
  for (const auto& [bits, value] : rec.outcomes) total += value;
  const double norm = rec.counts ? total : 1.0;

  double value = 0.0;
  for (const auto& [bits, v] : rec.outcomes)
    value += detail::outcome_eigenvalue(bits) * (v / norm);

  double sigma = 0.0;
  if (mode == ErrorMode::kPoisson) {
    if (!rec.counts)
      throw Error("setting '" + rec.setting + "': poisson errors need raw counts");
    sigma = std::sqrt(std::max(0.0, 1.0 - value * value) / total);
  } else {
    std::vector<double> sigmas;
    for (const auto& [bits, s] : rec.sigma) sigmas.push_back(s / norm);
    sigma = detail::combine(mode, sigmas);
  }
  return {value, sigma};
}

class DataSet {
 public:
  DataSet(std::vector<SettingRecord> records, ErrorMode mode)
      : records_(std::move(records)), mode_(mode) {
    if (records_.empty()) throw Error("data set has no records");
    n_ = records_[0].num_qubits();
    for (const auto& rec : records_) {
      detail::validate_record(rec);
      if (rec.num_qubits() != n_)
        throw Error("setting '" + rec.setting + "' has a different qubit count");
    }
    for (std::size_t i = 0; i < records_.size(); ++i)
      for (std::size_t j = i + 1; j < records_.size(); ++j)
        if (records_[i].setting == records_[j].setting)
          throw Error("duplicate record for setting '" + records_[i].setting + "'");
  }

  std::size_t num_qubits() const { return n_; }
  ErrorMode error_mode() const { return mode_; }
  const std::vector<SettingRecord>& records() const { return records_; }

  const SettingRecord* find(const std::string& setting) const {
    for (const auto& rec : records_)
      if (rec.setting == setting) return &rec;
    return nullptr;
  }

  const SettingRecord& require(const std::string& setting) const {
    const SettingRecord* rec = find(setting);
    if (!rec) throw Error("missing measurement setting '" + setting + "'");
    return *rec;
  }

  ValueWithError expectation(const std::string& setting) const {
    return expectation_from_record(require(setting), mode_);
  }

  // CSV with header columns setting,outcome,value,sigma,kind (kind: prob or
  // count; sigma may be empty). Rows with one setting form one record.
  static DataSet from_csv(std::istream& in, ErrorMode mode, const std::string& origin = "csv");
  static DataSet from_csv_file(const std::string& path, ErrorMode mode);
  static DataSet from_json(const nlohmann::json& doc, std::optional<ErrorMode> mode = {});
  static DataSet from_json_file(const std::string& path, std::optional<ErrorMode> mode = {});

 private:
  std::size_t n_ = 0;
  std::vector<SettingRecord> records_;
  ErrorMode mode_;
};

// <M> = E(XXX) - E(XYY) - E(YXY) - E(YYX)
inline ValueWithError mermin_value(const DataSet& data) {
  const ValueWithError xxx = data.expectation("XXX");
  const ValueWithError xyy = data.expectation("XYY");
  const ValueWithError yxy = data.expectation("YXY");
  const ValueWithError yyx = data.expectation("YYX");
  const double value = xxx.value - xyy.value - yxy.value - yyx.value;
  const double sigma =
      detail::combine(data.error_mode(), {xxx.sigma, xyy.sigma, yxy.sigma, yyx.sigma});
  return {value, sigma};
}

struct FidelityBreakdown {
  ValueWithError fidelity;      // (p000 + p111)/2 + Re<000|rho|111>
  ValueWithError diagonal;      // (p000 + p111)/2
  ValueWithError offdiag_real;  // (E_XXX - E_XYY - E_YXY - E_YYX)/8
  ValueWithError offdiag_imag;  // (E_YYY - E_XXY - E_YXX - E_XYX)/8, reported only
};

inline FidelityBreakdown fidelity_report(const DataSet& data) {
  const SettingRecord& zzz = data.require("ZZZ");
  for (const char* setting : {"XXX", "XYY", "YXY", "YYX", "YYY", "XXY", "YXX", "XYX"})
    data.require(setting);

  const std::size_t n = data.num_qubits();
  const std::string zeros(n, '0');
  const std::string ones(n, '1');
  auto lookup = [](const std::map<std::string, double>& m, const std::string& key) {
    auto it = m.find(key);
    return it == m.end() ? 0.0 : it->second;
  };
  double total = 0.0;
  for (const auto& [bits, v] : zzz.outcomes) total += v;
  const double norm = zzz.counts ? total : 1.0;
  const double p0 = lookup(zzz.outcomes, zeros) / norm;
  const double p1 = lookup(zzz.outcomes, ones) / norm;
  double s0 = lookup(zzz.sigma, zeros) / norm;
  double s1 = lookup(zzz.sigma, ones) / norm;
  if (data.error_mode() == ErrorMode::kPoisson) {
    if (!zzz.counts) throw Error("setting 'ZZZ': poisson errors need raw counts");
    s0 = std::sqrt(std::max(0.0, p0 * (1.0 - p0)) / total);
    s1 = std::sqrt(std::max(0.0, p1 * (1.0 - p1)) / total);
  }

  const ErrorMode mode = data.error_mode();
  // Poisson per-record sigmas come from independent runs; combine those in
  // quadrature.
  const ErrorMode cross = mode == ErrorMode::kPoisson ? ErrorMode::kQuadrature : mode;

  FidelityBreakdown out;
  out.diagonal = {(p0 + p1) / 2.0, detail::combine(cross, {s0 / 2.0, s1 / 2.0})};

  const ValueWithError mermin = mermin_value(data);
  out.offdiag_real = {mermin.value / 8.0, mermin.sigma / 8.0};

  const ValueWithError yyy = data.expectation("YYY");
  const ValueWithError xxy = data.expectation("XXY");
  const ValueWithError yxx = data.expectation("YXX");
  const ValueWithError xyx = data.expectation("XYX");
  out.offdiag_imag = {(yyy.value - xxy.value - yxx.value - xyx.value) / 8.0,
                      detail::combine(cross, {yyy.sigma / 8.0, xxy.sigma / 8.0, yxx.sigma / 8.0,
                                              xyx.sigma / 8.0})};

  out.fidelity = {out.diagonal.value + out.offdiag_real.value,
                  detail::combine(cross, {out.diagonal.sigma, out.offdiag_real.sigma})};
  return out;
}

inline ValueWithError fidelity(const DataSet& data) { return fidelity_report(data).fidelity; }

// W = I/2 - |G><G|, so <W> = 1/2 - F.
inline ValueWithError witness(const ValueWithError& fidelity) {
  return {0.5 - fidelity.value, fidelity.sigma};
}

// ---- file loading ----

namespace detail {

inline std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c); };
  while (!s.empty() && is_space(s.front())) s.erase(s.begin());
  while (!s.empty() && is_space(s.back())) s.pop_back();
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

inline double parse_number(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ParseError(where + ": expected a number, got '" + text + "'");
  }
}

}  // namespace detail

inline DataSet DataSet::from_csv(std::istream& in, ErrorMode mode, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(origin + ": empty file");
  auto header = detail::split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"setting", "outcome", "value", "kind"})
    if (!column.count(required))
      throw ParseError(origin + ": header is missing column '" + std::string(required) + "'");

  std::vector<SettingRecord> records;
  auto record_for = [&records](const std::string& setting) -> SettingRecord& {
    for (auto& rec : records)
      if (rec.setting == setting) return rec;
    records.push_back(SettingRecord{setting, false, {}, {}});
    return records.back();
  };

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const std::string where = origin + " line " + std::to_string(line_no);
    auto fields = detail::split_csv_line(line);
    if (fields.size() < header.size()) throw ParseError(where + ": too few columns");
    const std::string setting = fields[column["setting"]];
    const std::string outcome = fields[column["outcome"]];
    const std::string kind = fields[column["kind"]];
    SettingRecord& rec = record_for(setting);
    if (rec.outcomes.empty()) {
      if (kind == "count")
        rec.counts = true;
      else if (kind != "prob")
        throw ParseError(where + ": kind must be 'prob' or 'count', got '" + kind + "'");
    } else if (rec.counts != (kind == "count")) {
      throw ParseError(where + ": setting '" + setting + "' mixes prob and count rows");
    }
    if (rec.outcomes.count(outcome))
      throw ParseError(where + ": duplicate outcome '" + outcome + "' for setting '" + setting +
                       "'");
    rec.outcomes[outcome] = detail::parse_number(fields[column["value"]], where);
    if (column.count("sigma")) {
      const std::string sigma = fields[column["sigma"]];
      if (!sigma.empty()) rec.sigma[outcome] = detail::parse_number(sigma, where);
    }
  }
  try {
    return DataSet(std::move(records), mode);
  } catch (const Error& e) {
    throw ParseError(origin + ": " + e.what());
  }
}

inline DataSet DataSet::from_csv_file(const std::string& path, ErrorMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file '" + path + "'");
  return from_csv(in, mode, path);
}

inline DataSet DataSet::from_json(const nlohmann::json& doc, std::optional<ErrorMode> mode) {
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
    throw ParseError("data JSON must be an object with a 'records' array");
  ErrorMode effective = mode.value_or(ErrorMode::kLinear);
  if (!mode && doc.contains("error_mode"))
    effective = error_mode_from_string(doc["error_mode"].get<std::string>());
  std::vector<SettingRecord> records;
  for (const auto& item : doc["records"]) {
    SettingRecord rec;
    rec.setting = item.at("setting").get<std::string>();
    rec.counts = item.value("kind", "prob") == "count";
    if (!item.contains("outcomes") || !item["outcomes"].is_object())
      throw ParseError("record '" + rec.setting + "' needs an 'outcomes' object");
    for (const auto& [bits, entry] : item["outcomes"].items()) {
      if (entry.is_number()) {
        rec.outcomes[bits] = entry.get<double>();
      } else {
        rec.outcomes[bits] = entry.at("value").get<double>();
        if (entry.contains("sigma")) rec.sigma[bits] = entry["sigma"].get<double>();
      }
    }
    records.push_back(std::move(rec));
  }
  try {
    return DataSet(std::move(records), effective);
  } catch (const Error& e) {
    throw ParseError(std::string("data JSON: ") + e.what());
  }
}

inline DataSet DataSet::from_json_file(const std::string& path, std::optional<ErrorMode> mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return from_json(doc, mode);
}

}  // namespace ksv
