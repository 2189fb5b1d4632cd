// ksv command line front end. Every subcommand prints a JSON report on
// stdout; human-readable errors go to stderr. Exit codes: 0 ok, 1 domain
// error, 2 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ksv/ksv.hpp"

namespace {

using nlohmann::json;

struct ResolvedModel {
  std::string source;
  ksv::KsModel model;
  ksv::BellOperator op;
};

bool looks_like_generator(const std::string& name, std::size_t& n) {
  const std::string prefix = "ghz-mermin-";
  if (!name.starts_with(prefix)) return false;
  const std::string digits = name.substr(prefix.size());
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return false;
  n = std::stoul(digits);
  return true;
}

// Builtin catalog names and file paths are interchangeable.
ResolvedModel resolve_model(const std::string& spec) {
  for (const auto& name : ksv::catalog::names()) {
    if (spec == name) {
      ksv::catalog::Entry entry = ksv::catalog::get(spec);
      return {spec, std::move(entry.model), std::move(entry.op)};
    }
  }
  std::size_t n = 0;
  if (looks_like_generator(spec, n)) {
    ksv::catalog::Entry entry = ksv::catalog::ghz_mermin(n);
    return {spec, std::move(entry.model), std::move(entry.op)};
  }
  ksv::KsModel model = ksv::model_from_file(spec);
  ksv::BellOperator op = ksv::bell_operator_of(model);
  return {spec, std::move(model), std::move(op)};
}

json value_json(const ksv::ValueWithError& v) {
  return json{{"value", v.value}, {"sigma", v.sigma}};
}

json terms_json(const ksv::BellOperator& op) {
  json terms = json::array();
  for (const auto& term : op.terms()) {
    json groups = json::array();
    for (const auto& group : term.groups) groups.push_back(group.str());
    terms.push_back(json{{"coefficient", term.coefficient}, {"groups", groups}});
  }
  return terms;
}

json assignment_json(const std::vector<ksv::PauliWord>& symbols,
                     const std::vector<int>& values) {
  json out = json::object();
  for (std::size_t i = 0; i < symbols.size() && i < values.size(); ++i)
    out[symbols[i].str()] = values[i];
  return out;
}

struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();

  void print(bool pretty) const {
    json doc{{"command", command}, {"inputs", inputs}, {"status", "ok"}, {"result", result}};
    std::cout << (pretty ? doc.dump(2) : doc.dump()) << "\n";
  }
};

void print_error(const std::string& command, const json& inputs, const std::string& message,
                 bool pretty) {
  json doc{{"command", command}, {"inputs", inputs}, {"status", "error"}, {"message", message}};
  std::cout << (pretty ? doc.dump(2) : doc.dump()) << "\n";
  std::cerr << "ksv " << command << ": " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for Kochen-Specker-type contextuality models"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent the JSON output");

  std::string model_spec;
  std::string second_model;
  std::string data_path;
  std::string error_mode = "linear";
  std::string out_path;
  std::vector<std::string> equiv_models;
  bool spectral = false;
  unsigned threads = 1;

  auto* verify = app.add_subcommand("verify-ks", "decide whether a +1/-1 value assignment exists");
  verify->add_option("--model", model_spec, "builtin name or model file")->required();

  auto* bound = app.add_subcommand("bound", "classical bound by exhaustive enumeration");
  bound->add_option("--model", model_spec, "builtin name or model file")->required();
  bound->add_option("--threads", threads, "partition the enumeration across workers");

  auto* qvalue = app.add_subcommand("qvalue", "quantum value of the Bell operator");
  qvalue->add_option("--model", model_spec, "builtin name or model file")->required();
  qvalue->add_flag("--spectral", spectral, "also compute the largest eigenvalue");

  auto* reduce_cmd = app.add_subcommand("reduce", "drop identity-product terms and shift the bound");
  reduce_cmd->add_option("--model", model_spec, "builtin name or model file")->required();

  auto* equiv = app.add_subcommand("equiv", "compare two models' reduced operators");
  equiv->add_option("--model", equiv_models, "builtin name or model file (give twice)")
      ->expected(1, 2);

  auto* ingest = app.add_subcommand("ingest", "evaluate measured outcome statistics");
  ingest->add_option("--data", data_path, "CSV or JSON data file")->required();
  ingest->add_option("--model", model_spec, "builtin name or model file")->required();
  ingest->add_option("--error-mode", error_mode, "linear, quadrature or poisson")
      ->check(CLI::IsMember({"linear", "quadrature", "poisson"}));

  app.add_subcommand("list-models", "list the builtin models");

  auto* export_cmd = app.add_subcommand("export-model", "write a model in the file format");
  export_cmd->add_option("--model", model_spec, "builtin name or model file")->required();
  export_cmd->add_option("--out", out_path, "output path (default: stdout report only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", json::object(), e.what(), pretty);
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json inputs = json::object();
  try {
    Report report;
    report.command = command;

    if (command == "verify-ks") {
      inputs["model"] = model_spec;
      ResolvedModel resolved = resolve_model(model_spec);
      const ksv::FeasibilityResult feas = ksv::ks_feasible(resolved.model);
      json symbols = json::array();
      for (const auto& s : resolved.model.symbols()) symbols.push_back(s.str());
      report.result["feasible"] = feas.feasible;
      report.result["symbols"] = symbols;
      if (feas.feasible)
        report.result["assignment"] = assignment_json(resolved.model.symbols(), feas.assignment);
      else
        report.result["certificate"] = feas.certificate;
    } else if (command == "bound") {
      inputs["model"] = model_spec;
      inputs["threads"] = threads;
      ResolvedModel resolved = resolve_model(model_spec);
      const ksv::BoundResult b = ksv::classical_bound(resolved.op, threads);
      report.result["bound"] = b.bound;
      report.result["evaluations"] = b.evaluations;
      report.result["maximizer"] = assignment_json(resolved.op.atoms(), b.maximizer);
      if (resolved.model.state()) {
        const double quantum = ksv::bell_value(resolved.op, *resolved.model.state());
        report.result["quantum_value"] = quantum;
        report.result["violation"] = quantum - b.bound;
      }
    } else if (command == "qvalue") {
      inputs["model"] = model_spec;
      inputs["spectral"] = spectral;
      ResolvedModel resolved = resolve_model(model_spec);
      if (!resolved.model.state() && !spectral)
        throw ksv::Error("model has no state; use --spectral for the operator maximum");
      if (resolved.model.state())
        report.result["bell_value"] = ksv::bell_value(resolved.op, *resolved.model.state());
      if (spectral) report.result["spectral_max"] = ksv::spectral_max(resolved.op);
    } else if (command == "reduce") {
      inputs["model"] = model_spec;
      ResolvedModel resolved = resolve_model(model_spec);
      const ksv::Reduction reduction = ksv::reduce(resolved.model, resolved.op);
      report.result["shift"] = reduction.bound_shift;
      report.result["removed"] = reduction.removed;
      report.result["terms"] = terms_json(reduction.reduced);
      report.result["adjusted_bound"] =
          ksv::classical_bound(resolved.op).bound - reduction.bound_shift;
      if (resolved.model.state())
        report.result["quantum_value"] = ksv::bell_value(reduction.reduced,
                                                         *resolved.model.state());
    } else if (command == "equiv") {
      if (equiv_models.size() != 2)
        throw ksv::Error("equiv needs two --model arguments");
      inputs["models"] = equiv_models;
      ResolvedModel left = resolve_model(equiv_models[0]);
      ResolvedModel right = resolve_model(equiv_models[1]);
      const ksv::Reduction left_red = ksv::reduce(left.model, left.op);
      const ksv::Reduction right_red = ksv::reduce(right.model, right.op);
      const ksv::EquivalenceReport eq =
          ksv::inequalities_equivalent(left_red.reduced, right_red.reduced);
      report.result["equivalent"] = eq.equivalent;
      json matching = json::array();
      for (const auto& [i, j] : eq.matching) matching.push_back({i, j});
      report.result["matching"] = matching;
      json failures = json::array();
      for (const auto& f : eq.failures)
        failures.push_back(json{{"term", f.term_index}, {"side", f.side}, {"reason", f.reason}});
      report.result["failures"] = failures;
      report.result["left_terms"] = terms_json(left_red.reduced);
      report.result["right_terms"] = terms_json(right_red.reduced);
    } else if (command == "ingest") {
      inputs["data"] = data_path;
      inputs["model"] = model_spec;
      inputs["error_mode"] = error_mode;
      ResolvedModel resolved = resolve_model(model_spec);
      const ksv::ErrorMode mode = ksv::error_mode_from_string(error_mode);
      const ksv::DataSet data = data_path.ends_with(".json")
                                    ? ksv::DataSet::from_json_file(data_path, mode)
                                    : ksv::DataSet::from_csv_file(data_path, mode);
      if (data.num_qubits() != resolved.model.num_qubits())
        throw ksv::Error("data and model qubit counts differ");

      json expectations = json::array();
      json warnings = json::array();
      for (const auto& rec : data.records()) {
        const ksv::ValueWithError e = ksv::expectation_from_record(rec, mode);
        expectations.push_back(
            json{{"setting", rec.setting}, {"value", e.value}, {"sigma", e.sigma}});
        if (rec.incomplete())
          warnings.push_back("setting '" + rec.setting +
                             "' lists only part of the outcomes; the rest count as 0");
      }
      report.result["expectations"] = expectations;

      const ksv::ValueWithError mermin = ksv::mermin_value(data);
      report.result["mermin"] = value_json(mermin);
      const ksv::FidelityBreakdown fid = ksv::fidelity_report(data);
      report.result["fidelity"] = value_json(fid.fidelity);
      report.result["offdiag_imag"] = value_json(fid.offdiag_imag);
      report.result["witness"] = value_json(ksv::witness(fid.fidelity));
      const double bound = ksv::classical_bound(resolved.op).bound;
      report.result["classical_bound"] = bound;
      report.result["violation_sigma"] =
          mermin.sigma > 0.0 ? (mermin.value - bound) / mermin.sigma : 0.0;
      report.result["warnings"] = warnings;
    } else if (command == "list-models") {
      json models = json::array();
      for (const auto& name : ksv::catalog::names()) {
        ksv::catalog::Entry entry = ksv::catalog::get(name);
        models.push_back(json{{"name", name},
                              {"n", entry.model.num_qubits()},
                              {"contexts", entry.model.contexts().size()},
                              {"has_state", entry.model.state().has_value()},
                              {"classical_bound", entry.expected.classical_bound},
                              {"quantum_value", entry.expected.quantum_value}});
      }
      report.result["models"] = models;
      report.result["generator"] = "ghz-mermin-<n> for n in 2..5";
    } else if (command == "export-model") {
      inputs["model"] = model_spec;
      ResolvedModel resolved = resolve_model(model_spec);
      const json doc = ksv::model_to_json(resolved.model);
      report.result["model"] = doc;
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw ksv::Error("cannot write '" + out_path + "'");
        out << doc.dump(2) << "\n";
        report.result["written"] = out_path;
        inputs["out"] = out_path;
      }
    }

    report.inputs = inputs;
    report.print(pretty);
    return 0;
  } catch (const ksv::Error& e) {
    print_error(command, inputs, e.what(), pretty);
    return 1;
  } catch (const std::exception& e) {
    print_error(command, inputs, e.what(), pretty);
    return 1;
  }
}
