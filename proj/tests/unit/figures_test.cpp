#include <cmath>

#include <gtest/gtest.h>

#include "entconv/analytic.hpp"
#include "entconv/figures.hpp"

using namespace entconv;

TEST(FormatTest, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(2.0e-7), "2e-07");
}

TEST(CsvTest, RoundTrip) {
  const Table t{{"a", "b"}, {{1.5, -2.0}, {0.25, 1e-9}}};
  const Table back = parse_csv(t.to_csv());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_THROW(parse_csv("a\nx\n"), std::invalid_argument);
}

TEST(Figure1Test, LayoutAndEndpoints) {
  const Table t = figure1_table({});
  ASSERT_EQ(t.header.size(), 11u);
  EXPECT_EQ(t.header[2], "E_cv");
  EXPECT_EQ(t.header[10], "E_K8");
  ASSERT_EQ(t.rows.size(), 61u);
  for (double x : t.rows.front()) EXPECT_EQ(x, 0.0);
  const auto& last = t.rows.back();
  EXPECT_DOUBLE_EQ(last[0], 3.0);
  EXPECT_NEAR(last[2], analytic::e_tmsv(std::tanh(3.0)), 1e-15);
  EXPECT_NEAR(last[2] - last[10], analytic::e_residual(8, std::tanh(3.0)), 1e-12);
}

TEST(Figure1Test, RowsAreOrdered) {
  const Table t = parse_csv(figure1_table({}).to_csv());
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_GT(t.rows[i][0], t.rows[i - 1][0]);
  for (const auto& row : t.rows) {
    for (std::size_t c = 4; c < row.size(); ++c) EXPECT_LE(row[c - 1], row[c]);
    EXPECT_LE(row.back(), row[2]);
  }
}

TEST(Figure1Test, NumericMatchesClosedForm) {
  Figure1Config config;
  config.points = 7;
  const Table closed = figure1_table(config);
  config.numeric = true;
  const Table numeric = figure1_table(config);
  for (std::size_t i = 0; i < closed.rows.size(); ++i)
    for (std::size_t c = 2; c < closed.rows[i].size(); ++c)
      EXPECT_NEAR(numeric.rows[i][c], closed.rows[i][c], 1e-8) << "row " << i << " col " << c;
}

TEST(Figure2Test, DefaultsAndThreshold) {
  const Table t = figure2_table({});
  ASSERT_EQ(t.header.size(), 10u);
  EXPECT_EQ(t.header[1], "E_LN_cv");
  EXPECT_EQ(t.rows.size(), 96u);
  Figure2Config below;
  below.p = 0.1;
  below.lambda_min = 0.1;
  below.lambda_max = 0.7;
  below.points = 4;
  for (const auto& row : figure2_table(below).rows) {
    EXPECT_LE(row[1], 0.0) << "lambda " << row[0];
  }
}

TEST(Figure2Test, ColumnsConvergeTowardCV) {
  const Table t = figure2_table({});
  for (const auto& row : t.rows) {
    double gap = std::abs(row[2] - row[1]);
    for (std::size_t c = 3; c < row.size(); ++c) {
      const double next = std::abs(row[c] - row[1]);
      EXPECT_LE(next, gap + 1e-15) << "lambda " << row[0] << " col " << c;
      gap = next;
    }
  }
}

TEST(Figure2Test, NumericMatchesClosedFormAboveThreshold) {
  Figure2Config config;
  config.points = 6;
  const Table closed = figure2_table(config);
  config.numeric = true;
  const Table numeric = figure2_table(config);
  for (std::size_t i = 0; i < closed.rows.size(); ++i)
    for (std::size_t c = 1; c < closed.rows[i].size(); ++c)
      EXPECT_NEAR(numeric.rows[i][c], closed.rows[i][c], 1e-9) << "row " << i << " col " << c;
}
