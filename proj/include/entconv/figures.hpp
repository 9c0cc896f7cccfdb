// figures.hpp
// Plot-ready tables of transferred entanglement and log negativity.

#pragma once

#include <string>
#include <vector>

namespace entconv {

/// 12 significant digits, trailing zeros dropped (printf %.12g).
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Comma separated, header first, LF line endings.
  std::string to_csv() const;
};

/// Parses the output of Table::to_csv.
Table parse_csv(const std::string& text);

struct Figure1Config {
  double r_min = 0.0;
  double r_max = 3.0;
  unsigned points = 61;
  unsigned max_pairs = 8;
  /// Simulate each row instead of evaluating the closed forms.
  bool numeric = false;
};

/// Columns r, lambda, E_cv, E_K1..E_K<max_pairs>; rows in ascending r.
Table figure1_table(const Figure1Config& config);

struct Figure2Config {
  double p = 0.5;
  double lambda_min = 0.0;
  double lambda_max = 0.95;
  unsigned points = 96;
  unsigned max_pairs = 8;
  /// Sum partial-transpose spectra instead of using the closed forms.
  bool numeric = false;
};

/// Columns lambda, E_LN_cv, E_LNCD_K1..E_LNCD_K<max_pairs> with v = lambda.
Table figure2_table(const Figure2Config& config);

}  // namespace entconv
