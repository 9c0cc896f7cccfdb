#include <gtest/gtest.h>

#include "entconv/random.hpp"
#include "entconv/serialize.hpp"

using namespace entconv;
using nlohmann::json;

TEST(SerializeTest, PurePairRoundTrip) {
  SeededRng rng(21);
  const QubitPairState pair = random_pure_pair(rng);
  const QubitPairState back = pair_from_json(pair_to_json(pair));
  ASSERT_TRUE(back.is_pure());
  for (std::size_t q = 0; q < 4; ++q) EXPECT_NEAR(std::abs(back.amplitudes()[q] - pair.amplitudes()[q]), 0.0, 1e-15);
}

TEST(SerializeTest, MixedPairRoundTrip) {
  SeededRng rng(22);
  const QubitPairState pair = random_mixed_pair(rng);
  const json j = pair_to_json(pair);
  EXPECT_EQ(j.size(), 16u);
  const QubitPairState back = pair_from_json(j);
  EXPECT_FALSE(back.is_pure());
  EXPECT_LT((back.density() - pair.density()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SerializeTest, SmallNormErrorIsRenormalized) {
  const json j = json::array({{0.8, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-0.6000001, 0.0}});
  const QubitPairState pair = pair_from_json(j);
  EXPECT_NEAR(std::norm(pair.amplitudes()[0]) + std::norm(pair.amplitudes()[3]), 1.0, 1e-15);
}

TEST(SerializeTest, Rejections) {
  EXPECT_THROW(pair_from_json(json::array({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})), ParseError);
  EXPECT_THROW(pair_from_json(json::array({{1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})), ParseError);
  EXPECT_THROW(pair_from_json(json::array({{1.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}})), ParseError);
  EXPECT_THROW(pair_from_json(json::array({"a", "b", "c", "d"})), ParseError);
  EXPECT_THROW(pairs_from_json(json{{"pairs", json::array()}}), ParseError);
  EXPECT_THROW(pairs_from_json(json{{"other", 1}}), ParseError);
  const json one = pair_to_json(QubitPairState::blank());
  EXPECT_THROW(pairs_from_json(json{{"pairs", {one}}, {"pairs_density", {one}}}), ParseError);
}

TEST(SerializeTest, ListKeyFollowsPurity) {
  SeededRng rng(23);
  std::vector<QubitPairState> pure{random_pure_pair(rng), QubitPairState::blank()};
  EXPECT_TRUE(pairs_to_json(pure).contains("pairs"));
  EXPECT_EQ(pairs_from_json(pairs_to_json(pure)).size(), 2u);
  std::vector<QubitPairState> mixed{random_pure_pair(rng), random_mixed_pair(rng)};
  const json j = pairs_to_json(mixed);
  ASSERT_TRUE(j.contains("pairs_density"));
  const auto back = pairs_from_json(j);
  EXPECT_LT((back[0].density() - mixed[0].density()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(SerializeTest, CVStateLayout) {
  const auto s = make_tmsv(TMSVParams::from_lambda(0.5), FockCutoff(4), {1e-12, true});
  const json j = cv_state_to_json(s);
  EXPECT_EQ(j.at("cutoff").get<int>(), 4);
  EXPECT_EQ(j.at("coefficients").size(), 4u);
  EXPECT_EQ(j.at("coefficients")[1][0].get<int>(), 1);
  EXPECT_EQ(j.at("coefficients")[1][1].get<int>(), 1);
  EXPECT_NEAR(j.at("tail_weight").get<double>(), std::pow(0.5, 8), 1e-18);
}
