// entconv: command-line front end for field <-> qubit-pair entanglement conversion.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "entconv/analytic.hpp"
#include "entconv/entanglement.hpp"
#include "entconv/evolution.hpp"
#include "entconv/figures.hpp"
#include "entconv/serialize.hpp"
#include "entconv/states.hpp"
#include "entconv/verify.hpp"

using nlohmann::json;
using namespace entconv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Squeezing {
  std::optional<double> lambda;
  std::optional<double> r;

  void add_to(CLI::App* cmd) {
    auto* l = cmd->add_option("--lambda", lambda, "squeezing as tanh(r), in [0, 1)");
    auto* s = cmd->add_option("--r", r, "squeezing parameter r >= 0");
    l->excludes(s);
  }
  std::optional<TMSVParams> params() const {
    if (lambda) return TMSVParams::from_lambda(*lambda);
    if (r) return TMSVParams::from_r(*r);
    return std::nullopt;
  }
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

FockCutoff pick_cutoff(std::size_t requested, double lambda, unsigned pairs, double tolerance) {
  if (requested > 0) return FockCutoff(requested);
  return tmsv_cutoff_for(lambda, pairs, tolerance, std::size_t{1} << pairs);
}

std::string table_text(const Table& table, const std::string& format) {
  if (format == "csv") return table.to_csv();
  json rows = json::array();
  for (const auto& row : table.rows) {
    json item;
    for (std::size_t i = 0; i < row.size(); ++i) item[table.header[i]] = row[i];
    rows.push_back(std::move(item));
  }
  return json{{"columns", table.header}, {"rows", rows}}.dump(2) + "\n";
}

void write_sidecar(const std::string& out, const json& meta) {
  if (out.empty() || out == "-") return;
  emit(meta.dump(2) + "\n", out + ".meta.json");
}

int run_forward(const Squeezing& sq, unsigned pairs, std::size_t cutoff_levels, double tolerance,
                const std::string& out, const std::string& format) {
  const auto params = sq.params();
  if (!params) throw CLI::ValidationError("forward", "one of --lambda or --r is required");
  const FockCutoff cutoff = pick_cutoff(cutoff_levels, params->lambda(), pairs, tolerance);
  const PureCVState tmsv = make_tmsv(*params, cutoff, {tolerance, false});
  const ForwardResult result = forward_convert(tmsv, pairs);

  const double lambda = params->lambda();
  if (format == "csv") {
    Table table{{"k", "E_pair", "E_pair_closed_form", "defect"}, {}};
    for (unsigned k = 1; k <= pairs; ++k) {
      table.rows.push_back({static_cast<double>(k), entropy_of_entanglement(result.pairs[k - 1]),
                            analytic::e_pair(k, lambda), result.report.steps[k - 1].defect});
    }
    emit(table.to_csv(), out);
    return kExitOk;
  }

  json entropies = json::array();
  double transferred = 0.0;
  for (const auto& pair : result.pairs) {
    const double e = entropy_of_entanglement(pair);
    transferred += e;
    entropies.push_back(e);
  }
  json doc = pairs_to_json(result.pairs);
  doc["lambda"] = lambda;
  doc["r"] = params->r();
  doc["cutoff"] = cutoff.levels();
  doc["tail_weight"] = tmsv.tail_weight();
  doc["pair_entropies"] = entropies;
  doc["E_cv"] = entropy_of_entanglement(tmsv);
  doc["E_transferred"] = transferred;
  doc["E_residual"] = entropy_of_entanglement(result.residual);
  doc["conservation_defect"] =
      std::abs(transferred + doc["E_residual"].get<double>() - analytic::e_tmsv(lambda));
  doc["closed_form"] = {{"E_cv", analytic::e_tmsv(lambda)},
                        {"E_transferred", analytic::e_transferred(pairs, lambda)},
                        {"E_residual", analytic::e_residual(pairs, lambda)}};
  doc["report"] = report_to_json(result.report);
  emit(doc.dump(2) + "\n", out);
  return kExitOk;
}

int run_reverse(const std::string& input, const Squeezing& sq, bool roundtrip,
                std::size_t cutoff_levels, const std::string& out) {
  const json file = read_json_file(input);
  const std::vector<QubitPairState> pairs = pairs_from_json(file);

  ReverseOptions options;
  if (cutoff_levels > 0) options.cutoff = FockCutoff(cutoff_levels);
  const ReverseResult result = reverse_convert(pairs, options);

  json doc;
  doc["pair_count"] = pairs.size();
  doc["max_leftover"] = result.max_leftover;
  if (result.is_pure()) {
    const auto& cv = std::get<PureCVState>(result.state);
    double sum = 0.0;
    for (const auto& p : pairs) sum += entropy_of_entanglement(p);
    doc["state"] = cv_state_to_json(cv);
    doc["E_cv"] = entropy_of_entanglement(cv);
    doc["E_pairs_sum"] = sum;
  } else {
    const auto& rho = std::get<CVDensity>(result.state);
    double sum = 0.0;
    for (const auto& p : pairs) sum += log_negativity(p);
    doc["state"] = cv_density_to_json(rho);
    doc["E_LN_cv"] = log_negativity(rho);
    doc["E_LN_pairs_sum"] = sum;
  }

  if (roundtrip) {
    std::optional<TMSVParams> params = sq.params();
    if (!params && file.contains("lambda")) params = TMSVParams::from_lambda(file.at("lambda").get<double>());
    if (!params) throw CLI::ValidationError("reverse", "--roundtrip needs --lambda, --r or a lambda field");
    if (!result.is_pure()) throw std::invalid_argument("--roundtrip requires pure pairs");
    const auto& cv = std::get<PureCVState>(result.state);
    const PureCVState target = make_tmsv(*params, cv.cutoff(), {1e-12, true});
    doc["roundtrip"] = {{"lambda", params->lambda()},
                        {"fidelity", fidelity(target, cv)},
                        {"target_tail_weight", target.tail_weight()}};
  }
  emit(doc.dump(2) + "\n", out);
  return kExitOk;
}

int run_werner(double p, const Squeezing& sq, std::optional<double> v_opt, unsigned pairs,
               bool numeric, const std::string& out) {
  const auto params = sq.params();
  if (!params) throw CLI::ValidationError("werner", "one of --lambda or --r is required");
  const double lambda = params->lambda();
  const double v = v_opt.value_or(lambda);

  json doc{{"p", p}, {"lambda", lambda}, {"v", v}, {"pairs", pairs},
           {"threshold", analytic::inseparability_threshold(lambda)}};
  const auto cv_spec = werner_pt_spectrum_untruncated(p, lambda, v);
  const auto qubit_spec = werner_pt_spectrum_converted(p, lambda, v, pairs);
  doc["E_LN_cv"] = log_negativity_from_spectrum(cv_spec.spectrum);
  doc["E_LN_qubits"] = log_negativity_from_spectrum(qubit_spec);
  doc["inseparable"] = cv_spec.spectrum.min_value() < 0.0;
  json notes = json::array();
  if (doc["E_LN_cv"].get<double>() <= 0.0) notes.push_back("E_LN_cv: no distillable signature (LN)");
  if (doc["E_LN_qubits"].get<double>() <= 0.0) notes.push_back("E_LN_qubits: no distillable signature (LN)");
  if (!notes.empty()) doc["notes"] = notes;
  if (v == lambda) {
    doc["closed_form"] = {{"E_LN_cv", analytic::e_ln_cv(p, lambda)},
                          {"E_LN_qubits", analytic::e_ln_qubits(p, lambda, pairs)}};
  }
  if (numeric) {
    if (pairs > 3) throw std::invalid_argument("--numeric is limited to --pairs <= 3");
    const std::size_t side = std::size_t{1} << pairs;
    const ConvertedWerner converted =
        forward_convert_werner(make_werner(p, lambda, v, werner_cutoff_for(lambda, v, pairs)), pairs);
    doc["numeric"] = {{"E_LN_qubits", log_negativity_dense(converted.qubit_density(), side, side)},
                      {"thermal_defect", converted.thermal.defect},
                      {"pure_defect", converted.pure.report.max_defect()}};
  }
  emit(doc.dump(2) + "\n", out);
  return kExitOk;
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  const auto reports = run_verification(suite, seed);
  json doc = json::array();
  bool ok = true;
  for (const auto& report : reports) {
    ok = ok && report.passed();
    doc.push_back(to_json(report));
    for (const auto& c : report.checks) {
      std::cerr << (c.passed ? "PASS " : c.informational ? "NOTE " : "FAIL ") << report.suite << "/" << c.name
                << " measured=" << c.measured << " threshold=" << c.threshold;
      if (!c.detail.empty()) std::cerr << " (" << c.detail << ")";
      std::cerr << "\n";
    }
  }
  emit(doc.dump(2) + "\n", out);
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement conversion between a two-mode field and qubit pairs"};
  app.require_subcommand(1);

  Squeezing sq;
  unsigned pairs = 1;
  std::size_t cutoff = 0;
  double tolerance = 1e-12;
  std::string out;
  std::string format = "json";
  bool numeric = false;
  bool roundtrip = false;
  double p = 0.5;
  std::optional<double> v;
  std::string input;
  std::string suite = "all";
  std::uint64_t seed = 20240601;
  unsigned points = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output file (default stdout)");
  };

  auto* forward = app.add_subcommand("forward", "convert a squeezed vacuum into K pairs");
  sq.add_to(forward);
  forward->add_option("--pairs", pairs, "number of pairs K")->check(CLI::Range(1u, 16u));
  forward->add_option("--cutoff", cutoff, "Fock levels per mode (default: automatic)");
  forward->add_option("--tolerance", tolerance, "largest truncated tail allowed");
  forward->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  add_common(forward);

  auto* reverse = app.add_subcommand("reverse", "rebuild a field state from a pair file");
  reverse->add_option("pairs_file", input, "JSON pair list")->required()->check(CLI::ExistingFile);
  sq.add_to(reverse);
  reverse->add_flag("--roundtrip", roundtrip, "report fidelity with the squeezed vacuum");
  reverse->add_option("--cutoff", cutoff, "output Fock levels (default 2^K)");
  add_common(reverse);

  auto* werner = app.add_subcommand("werner", "log negativity of the CV Werner state and its conversion");
  werner->add_option("--p", p, "pure weight")->check(CLI::Range(0.0, 1.0));
  sq.add_to(werner);
  werner->add_option("--v", v, "thermal parameter (default: lambda)");
  werner->add_option("--pairs", pairs, "number of pairs K")->check(CLI::Range(1u, 16u));
  werner->add_flag("--numeric", numeric, "also run the dense conversion (K <= 3)");
  add_common(werner);

  auto* fig1 = app.add_subcommand("figure1", "transferred entanglement against r");
  fig1->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  fig1->add_flag("--numeric", numeric, "simulate every row");
  fig1->add_option("--points", points, "number of rows");
  add_common(fig1);

  auto* fig2 = app.add_subcommand("figure2", "log negativity against lambda");
  fig2->add_option("--p", p, "pure weight")->check(CLI::Range(0.0, 1.0));
  fig2->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  fig2->add_flag("--numeric", numeric, "sum partial-transpose spectra");
  fig2->add_option("--points", points, "number of rows");
  add_common(fig2);

  auto* verify = app.add_subcommand("verify", "run self-check suites");
  verify->add_option("--suite", suite, "suite name or all");
  verify->add_option("--seed", seed, "random seed");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*forward) return run_forward(sq, pairs, cutoff, tolerance, out, format);
    if (*reverse) return run_reverse(input, sq, roundtrip, cutoff, out);
    if (*werner) return run_werner(p, sq, v, pairs, numeric, out);
    if (*fig1) {
      Figure1Config config;
      config.numeric = numeric;
      if (points > 0) config.points = points;
      emit(table_text(figure1_table(config), format), out);
      write_sidecar(out, {{"figure", "figure1"}, {"r_min", config.r_min}, {"r_max", config.r_max},
                          {"points", config.points}, {"max_pairs", config.max_pairs},
                          {"numeric", config.numeric}});
      return kExitOk;
    }
    if (*fig2) {
      Figure2Config config;
      config.p = p;
      config.numeric = numeric;
      if (points > 0) config.points = points;
      emit(table_text(figure2_table(config), format), out);
      write_sidecar(out, {{"figure", "figure2"}, {"p", config.p}, {"lambda_min", config.lambda_min},
                          {"lambda_max", config.lambda_max}, {"points", config.points},
                          {"max_pairs", config.max_pairs}, {"numeric", config.numeric}});
      return kExitOk;
    }
    if (*verify) return run_verify(suite, seed, out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const TruncationError& e) {
    std::cerr << "truncation error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
