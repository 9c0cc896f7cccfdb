// verify.cpp

#include "entconv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "entconv/analytic.hpp"
#include "entconv/dense_oracle.hpp"
#include "entconv/entanglement.hpp"
#include "entconv/evolution.hpp"
#include "entconv/random.hpp"

namespace entconv {

namespace {

Check below(std::string name, double measured, double threshold, std::string detail = {}) {
  return Check{std::move(name), measured < threshold, measured, threshold, std::move(detail)};
}

Check at_most(std::string name, double measured, double threshold, std::string detail = {}) {
  return Check{std::move(name), measured <= threshold, measured, threshold, std::move(detail)};
}

std::vector<QubitPairState> random_pure_pairs(SeededRng& rng, unsigned count) {
  std::vector<QubitPairState> pairs;
  for (unsigned i = 0; i < count; ++i) pairs.push_back(random_pure_pair(rng));
  return pairs;
}

SuiteReport unitarity_suite(std::uint64_t seed) {
  SuiteReport report{"unitarity", seed, {}};
  SeededRng rng(seed);
  const FockCutoff cutoff(16);

  double max_diff = 0.0;
  double max_norm_change = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = static_cast<unsigned>(1 + rng.below(4));
    const Side side = rng.below(2) == 0 ? Side::AC : Side::BD;
    const Direction dir = rng.below(2) == 0 ? Direction::Forward : Direction::Reverse;
    const JointState psi = random_joint_state(rng, cutoff);
    const JointState blocks = apply_half_step(psi, side, k, dir);
    const Eigen::VectorXcd dense = dense_oracle_step(to_dense_vector(psi), cutoff, side, k, dir);
    max_diff = std::max(max_diff, (to_dense_vector(blocks) - dense).cwiseAbs().maxCoeff());
    max_norm_change = std::max(max_norm_change, std::abs(blocks.norm() - 1.0));
  }
  report.checks.push_back(below("block_vs_dense_max_amplitude_diff", max_diff, 1e-12,
                                "1000 random joint states, cutoff 16"));
  report.checks.push_back(below("norm_preservation", max_norm_change, 1e-12));

  double unitarity = 0.0;
  for (unsigned k = 1; k <= 4; ++k) {
    for (Direction dir : {Direction::Forward, Direction::Reverse}) {
      const Eigen::MatrixXcd u = side_unitary(k, cutoff, dir);
      unitarity = std::max(
          unitarity,
          (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff());
    }
  }
  const Eigen::MatrixXcd full = full_step_unitary(1, cutoff, Direction::Forward);
  unitarity = std::max(
      unitarity,
      (full * full.adjoint() - Eigen::MatrixXcd::Identity(full.rows(), full.cols())).cwiseAbs().maxCoeff());
  report.checks.push_back(below("unitarity_defect", unitarity, 1e-12, "cutoff 16, steps 1-4"));
  return report;
}

SuiteReport conservation_suite(std::uint64_t seed) {
  SuiteReport report{"conservation", seed, {}};
  double conservation = 0.0, per_pair = 0.0, residual = 0.0, defect = 0.0;
  for (int li = 1; li <= 9; ++li) {
    const double lambda = 0.1 * li;
    for (unsigned pairs = 1; pairs <= 8; ++pairs) {
      const std::size_t base = (std::size_t{1} << pairs) * 32;
      const FockCutoff cutoff = tmsv_cutoff_for(lambda, pairs, 1e-12, base);
      const ForwardResult out =
          forward_convert(make_tmsv(TMSVParams::from_lambda(lambda), cutoff), pairs);
      double total = entropy_of_entanglement(out.residual);
      for (unsigned k = 1; k <= pairs; ++k) {
        const double e = entropy_of_entanglement(out.pairs[k - 1]);
        total += e;
        per_pair = std::max(per_pair, std::abs(e - analytic::e_pair(k, lambda)));
      }
      conservation = std::max(conservation, std::abs(total - analytic::e_tmsv(lambda)));
      residual = std::max(residual, std::abs(entropy_of_entanglement(out.residual) -
                                             analytic::e_residual(pairs, lambda)));
      defect = std::max(defect, out.report.max_defect());
    }
  }
  report.checks.push_back(below("conservation_defect", conservation, 1e-8,
                                "lambda 0.1..0.9, K 1..8"));
  report.checks.push_back(below("pair_entropy_vs_closed_form", per_pair, 1e-10));
  report.checks.push_back(below("residual_entropy_vs_closed_form", residual, 1e-10));
  report.checks.push_back(below("factorization_defect", defect, 1e-10));
  return report;
}

SuiteReport roundtrip_suite(std::uint64_t seed) {
  SuiteReport report{"roundtrip", seed, {}};

  double worst_infidelity = 0.0;
  for (double lambda : {0.3, 0.6, 0.9}) {
    for (unsigned pairs = 1; pairs <= 6; ++pairs) {
      const FockCutoff cutoff(std::size_t{1} << pairs);
      const PureCVState tmsv =
          make_tmsv(TMSVParams::from_lambda(lambda), cutoff, {1e-12, true});
      const ForwardResult out = forward_convert(tmsv, pairs);
      const ReverseResult back = reverse_convert(out.pairs);
      worst_infidelity =
          std::max(worst_infidelity, 1.0 - fidelity(tmsv, std::get<PureCVState>(back.state)));
    }
  }
  report.checks.push_back(below("roundtrip_infidelity", worst_infidelity, 1e-10,
                                "lambda 0.3, 0.6, 0.9; K 1..6"));

  SeededRng rng(seed);
  double additivity = 0.0, closed_form = 0.0, leftover = 0.0;
  // Worst disagreement of each phase-factor variant of the closed form.
  std::map<std::string, double> variants{{"carry_sign_only", 0.0}, {"digit_phase_only", 0.0},
                                         {"no_phases", 0.0}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto pairs = random_pure_pairs(rng, 1 + trial % 4);
    const ReverseResult out = reverse_convert(pairs);
    const auto& cv = std::get<PureCVState>(out.state);
    double sum = 0.0;
    for (const auto& p : pairs) sum += entropy_of_entanglement(p);
    additivity = std::max(additivity, std::abs(entropy_of_entanglement(cv) - sum));
    closed_form = std::max(closed_form, max_diff_up_to_phase(reverse_closed_form(pairs), cv));
    leftover = std::max(leftover, out.max_leftover);
    variants["carry_sign_only"] = std::max(
        variants["carry_sign_only"], max_diff_up_to_phase(reverse_closed_form(pairs, {true, false}), cv));
    variants["digit_phase_only"] = std::max(
        variants["digit_phase_only"], max_diff_up_to_phase(reverse_closed_form(pairs, {false, true}), cv));
    variants["no_phases"] = std::max(
        variants["no_phases"], max_diff_up_to_phase(reverse_closed_form(pairs, {false, false}), cv));
  }
  report.checks.push_back(below("reverse_additivity", additivity, 1e-8, "100 random pure lists, K 1..4"));
  std::string localization;
  if (closed_form >= 1e-10) {
    localization = "closed form disagrees;";
    for (const auto& [name, diff] : variants) {
      localization += " " + name + "=" + std::to_string(diff);
    }
  }
  report.checks.push_back(below("closed_form_vs_stepwise", closed_form, 1e-10, localization));
  report.checks.push_back(below("blank_pair_leftover", leftover, 1e-12));

  double mixed = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<QubitPairState> pairs;
    for (int k = 0; k <= trial % 3; ++k) pairs.push_back(random_mixed_pair(rng));
    const ReverseResult out = reverse_convert(pairs);
    double sum = 0.0;
    for (const auto& p : pairs) sum += log_negativity(p);
    mixed = std::max(mixed, std::abs(log_negativity(std::get<CVDensity>(out.state)) - sum));
  }
  report.checks.push_back(below("mixed_reverse_ln_additivity", mixed, 1e-8, "12 random mixed lists, K 1..3"));
  return report;
}

SuiteReport werner_suite(std::uint64_t seed) {
  SuiteReport report{"werner", seed, {}};
  const double grid_p[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const double grid_lambda[] = {0.1, 0.3, 0.5, 0.7, 0.9};

  double spectra = 0.0, ln_diff = 0.0;
  for (unsigned pairs = 1; pairs <= 3; ++pairs) {
    const std::size_t side = std::size_t{1} << pairs;
    for (double lambda : grid_lambda) {
      const FockCutoff cutoff = werner_cutoff_for(lambda, lambda, pairs);
      for (double p : grid_p) {
        const ConvertedWerner converted =
            forward_convert_werner(make_werner(p, lambda, lambda, cutoff), pairs);
        const Eigen::MatrixXcd rho = converted.qubit_density();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            partial_transpose(rho, side, side, Subsystem::First), Eigen::EigenvaluesOnly);
        const std::vector<double> structured =
            werner_pt_spectrum_converted(p, lambda, lambda, pairs).expanded_sorted();
        for (std::size_t i = 0; i < structured.size(); ++i) {
          spectra = std::max(spectra, std::abs(structured[i] - es.eigenvalues()(static_cast<Eigen::Index>(i))));
        }
        ln_diff = std::max(ln_diff, std::abs(log_negativity_dense(rho, side, side) -
                                             log_negativity_from_spectrum(
                                                 werner_pt_spectrum_converted(p, lambda, lambda, pairs))));
      }
    }
  }
  report.checks.push_back(below("structured_vs_dense_pt_spectrum", spectra, 1e-10, "K 1..3, 5x5 grid"));
  report.checks.push_back(below("structured_vs_dense_ln", ln_diff, 1e-10));

  double formula = 0.0;
  for (double lambda : grid_lambda) {
    for (double p : grid_p) {
      if (p <= analytic::inseparability_threshold(lambda)) continue;
      const auto spec = werner_pt_spectrum_untruncated(p, lambda, lambda);
      formula = std::max(formula, std::abs(log_negativity_from_spectrum(spec.spectrum) -
                                           analytic::e_ln_cv(p, lambda)));
    }
  }
  report.checks.push_back(below("untruncated_ln_formula_vs_spectrum", formula, 1e-9));

  double flip = 0.0;
  for (double lambda : {0.2, 0.5, 0.8}) {
    double first_negative = 2.0;
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      if (werner_pt_spectrum_untruncated(p, lambda, lambda).spectrum.min_value() < 0.0) {
        first_negative = p;
        break;
      }
    }
    flip = std::max(flip, std::abs(first_negative - analytic::inseparability_threshold(lambda)));
  }
  report.checks.push_back(at_most("inseparability_flip_offset", flip, 1e-3 + 1e-12,
                                  "lambda 0.2, 0.5, 0.8; p step 1e-3"));
  return report;
}

SuiteReport formulas_suite(std::uint64_t seed) {
  SuiteReport report{"formulas", seed, {}};
  double conservation = 0.0, sum_identity = 0.0, product = 0.0, pair_max = 0.0;
  int monotone_violations = 0;
  for (int li = 1; li <= 19; ++li) {
    const double lambda = 0.05 * li;
    double prev_transferred = 0.0, prev_residual = analytic::e_tmsv(lambda);
    double running = 0.0;
    for (unsigned k = 1; k <= 12; ++k) {
      const double transferred = analytic::e_transferred(k, lambda);
      const double residual = analytic::e_residual(k, lambda);
      running += analytic::e_pair(k, lambda);
      pair_max = std::max(pair_max, analytic::e_pair(k, lambda));
      conservation = std::max(conservation, std::abs(transferred + residual - analytic::e_tmsv(lambda)));
      sum_identity = std::max(sum_identity, std::abs(transferred - running));
      const auto sides = analytic::product_identity(lambda, k);
      product = std::max(product, std::abs(sides.product - sides.quotient));
      if (transferred < prev_transferred || residual > prev_residual || residual < 0.0) {
        ++monotone_violations;
      }
      prev_transferred = transferred;
      prev_residual = residual;
    }
  }
  report.checks.push_back(below("conservation_identity", conservation, 1e-12, "lambda 0.05..0.95, K 1..12"));
  report.checks.push_back(below("transferred_vs_pair_sum", sum_identity, 1e-12));
  report.checks.push_back(below("product_identity", product, 1e-12));
  report.checks.push_back(at_most("pair_entanglement_max", pair_max, 1.0));
  report.checks.push_back(at_most("monotonicity_violations", monotone_violations, 0.0));

  report.checks.push_back(below("perfect_transfer_residual_K12", analytic::e_residual(12, 0.9), 1e-3));
  report.checks.push_back(below("perfect_transfer_gap_K12",
                                std::abs(analytic::e_transferred(12, 0.9) - analytic::e_tmsv(0.9)), 1e-3));

  double ln_limit = 0.0;
  int ln_violations = 0;
  for (int pi = 1; pi <= 10; ++pi) {
    const double p = 0.1 * pi;
    for (int li = 1; li <= 9; ++li) {
      const double lambda = 0.1 * li;
      const double target = analytic::e_ln_cv(p, lambda);
      double gap = std::abs(analytic::e_ln_qubits(p, lambda, 1) - target);
      for (unsigned k = 2; k <= 12; ++k) {
        const double next = std::abs(analytic::e_ln_qubits(p, lambda, k) - target);
        if (next > gap + 1e-15) ++ln_violations;
        gap = next;
      }
      ln_limit = std::max(ln_limit, gap);
    }
  }
  report.checks.push_back(below("ln_qubits_limit_K12", ln_limit, 1e-10));
  // Below the truncated threshold the raw qubit value is not a negativity,
  // so the gap need not shrink there.
  Check monotone = at_most("ln_gap_monotonicity_violations", ln_violations, 0.0,
                           "p 0.1..1, lambda 0.1..0.9, K 1..12");
  monotone.informational = true;
  report.checks.push_back(std::move(monotone));
  return report;
}

using SuiteFn = std::function<SuiteReport(std::uint64_t)>;

const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> all{
      {"unitarity", unitarity_suite},
      {"conservation", conservation_suite},
      {"roundtrip", roundtrip_suite},
      {"werner", werner_suite},
      {"formulas", formulas_suite},
  };
  return all;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || c.informational; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suites()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<SuiteReport> run_verification(std::string_view suite, std::uint64_t seed) {
  std::vector<SuiteReport> reports;
  for (const auto& [name, fn] : suites()) {
    if (suite == "all" || suite == name) reports.push_back(fn(seed));
  }
  if (reports.empty()) {
    throw std::invalid_argument("unknown verification suite: " + std::string(suite));
  }
  return reports;
}

nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json item{{"name", c.name},
                        {"passed", c.passed},
                        {"measured", c.measured},
                        {"threshold", c.threshold}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    if (c.informational) item["informational"] = true;
    checks.push_back(std::move(item));
  }
  return {{"suite", report.suite}, {"seed", report.seed}, {"passed", report.passed()}, {"checks", checks}};
}

}  // namespace entconv
