// figures.cpp

#include "entconv/figures.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "entconv/analytic.hpp"
#include "entconv/entanglement.hpp"
#include "entconv/evolution.hpp"

namespace entconv {

namespace {

constexpr int kMaxDigits = 12;

std::vector<double> sample(double lo, double hi, unsigned points) {
  if (points < 1) throw std::invalid_argument("figure needs at least one point");
  if (!(hi >= lo)) throw std::invalid_argument("figure range is empty");
  std::vector<double> xs;
  for (unsigned i = 0; i < points; ++i) {
    xs.push_back(points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1));
  }
  return xs;
}

void check_pairs(unsigned max_pairs) {
  if (max_pairs < 1 || max_pairs > 16) throw std::invalid_argument("pair count must lie in [1, 16]");
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, kMaxDigits);
  return std::string(buf, end);
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string field;
    if (first) {
      while (std::getline(fields, field, ',')) table.header.push_back(field);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(fields, field, ',')) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::invalid_argument("bad CSV number: " + field);
      }
      row.push_back(value);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table figure1_table(const Figure1Config& config) {
  check_pairs(config.max_pairs);
  if (config.r_min < 0.0) throw std::invalid_argument("r must be nonnegative");
  Table table;
  table.header = {"r", "lambda", "E_cv"};
  for (unsigned k = 1; k <= config.max_pairs; ++k) table.header.push_back("E_K" + std::to_string(k));

  for (double r : sample(config.r_min, config.r_max, config.points)) {
    const TMSVParams params = TMSVParams::from_r(r);
    const double lambda = params.lambda();
    std::vector<double> row{r, lambda};
    if (!config.numeric) {
      row.push_back(analytic::e_tmsv(lambda));
      for (unsigned k = 1; k <= config.max_pairs; ++k) {
        row.push_back(analytic::e_transferred(k, lambda));
      }
    } else {
      const FockCutoff cutoff = tmsv_cutoff_for(lambda, config.max_pairs);
      const PureCVState tmsv = make_tmsv(params, cutoff);
      row.push_back(entropy_of_entanglement(tmsv));
      const ForwardResult result = forward_convert(tmsv, config.max_pairs);
      double running = 0.0;
      for (const auto& pair : result.pairs) {
        running += entropy_of_entanglement(pair);
        row.push_back(running);
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table figure2_table(const Figure2Config& config) {
  check_pairs(config.max_pairs);
  Table table;
  table.header = {"lambda", "E_LN_cv"};
  for (unsigned k = 1; k <= config.max_pairs; ++k) {
    table.header.push_back("E_LNCD_K" + std::to_string(k));
  }
  for (double lambda : sample(config.lambda_min, config.lambda_max, config.points)) {
    std::vector<double> row{lambda};
    if (!config.numeric) {
      row.push_back(analytic::e_ln_cv(config.p, lambda));
      for (unsigned k = 1; k <= config.max_pairs; ++k) {
        row.push_back(analytic::e_ln_qubits(config.p, lambda, k));
      }
    } else {
      row.push_back(log_negativity_from_spectrum(
          werner_pt_spectrum_untruncated(config.p, lambda, lambda).spectrum));
      for (unsigned k = 1; k <= config.max_pairs; ++k) {
        row.push_back(
            log_negativity_from_spectrum(werner_pt_spectrum_converted(config.p, lambda, lambda, k)));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace entconv
