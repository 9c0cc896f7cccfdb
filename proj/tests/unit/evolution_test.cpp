#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "entconv/dense_oracle.hpp"
#include "entconv/entanglement.hpp"
#include "entconv/evolution.hpp"
#include "entconv/random.hpp"

using namespace entconv;

namespace {

const Complex kI{0.0, 1.0};

JointState basis_joint(FockCutoff cutoff, std::size_t a, std::size_t b, std::size_t q) {
  PairAmplitudes amps{};
  amps[q] = Complex{1.0};
  return JointState(cutoff, {{FockIndex{a, b}, amps}});
}

QubitPairState tmsv_pair(double x) {
  return QubitPairState::pure_normalized({Complex{1.0}, {}, {}, Complex{-x}});
}

// Field (A, B) plus `pairs` qubit pairs as one dense vector, index
// ((a * N + b) * 4 + q_1) * 4 + q_2 ... with q_j = 2 c_j + d_j.
struct MultiPairVector {
  std::size_t levels;
  unsigned pairs;
  Eigen::VectorXcd psi;

  std::size_t pair_dim() const { return std::size_t{1} << (2 * pairs); }

  // Step j on both sides, built from the single-mode propagator.
  void apply_step(unsigned j) {
    const Eigen::MatrixXcd u = side_unitary(j, FockCutoff(levels), Direction::Forward);
    const std::size_t shift = 2 * (pairs - j);
    for (bool on_a : {true, false}) {
      Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
      for (std::size_t a = 0; a < levels; ++a) {
        for (std::size_t b = 0; b < levels; ++b) {
          for (std::size_t qs = 0; qs < pair_dim(); ++qs) {
            const Complex amp = psi(static_cast<Eigen::Index>((a * levels + b) * pair_dim() + qs));
            if (amp == Complex{}) continue;
            const std::size_t qj = (qs >> shift) & 3;
            const std::size_t bit = on_a ? (qj >> 1) : (qj & 1);
            const std::size_t mode = on_a ? a : b;
            for (std::size_t m2 = 0; m2 < levels; ++m2) {
              for (std::size_t bit2 = 0; bit2 < 2; ++bit2) {
                const Complex g = u(static_cast<Eigen::Index>(m2 * 2 + bit2),
                                    static_cast<Eigen::Index>(mode * 2 + bit));
                if (g == Complex{}) continue;
                const std::size_t qj2 = on_a ? (bit2 << 1 | (qj & 1)) : ((qj & 2) | bit2);
                const std::size_t qs2 = (qs & ~(std::size_t{3} << shift)) | (qj2 << shift);
                const std::size_t a2 = on_a ? m2 : a;
                const std::size_t b2 = on_a ? b : m2;
                out(static_cast<Eigen::Index>((a2 * levels + b2) * pair_dim() + qs2)) += g * amp;
              }
            }
          }
        }
      }
      psi = out;
    }
  }

  // Reduced density over the pairs in the library's (C index, D index) order.
  Eigen::MatrixXcd qubit_density() const {
    const auto side = static_cast<Eigen::Index>(std::size_t{1} << pairs);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(side * side, side * side);
    auto reorder = [&](std::size_t qs) {
      std::size_t c = 0, d = 0;
      for (unsigned j = 1; j <= pairs; ++j) {
        const std::size_t qj = (qs >> (2 * (pairs - j))) & 3;
        c |= (qj >> 1) << (j - 1);
        d |= (qj & 1) << (j - 1);
      }
      return static_cast<Eigen::Index>(c * static_cast<std::size_t>(side) + d);
    };
    for (std::size_t f = 0; f < levels * levels; ++f) {
      for (std::size_t q = 0; q < pair_dim(); ++q) {
        for (std::size_t q2 = 0; q2 < pair_dim(); ++q2) {
          rho(reorder(q), reorder(q2)) += psi(static_cast<Eigen::Index>(f * pair_dim() + q)) *
                                          std::conj(psi(static_cast<Eigen::Index>(f * pair_dim() + q2)));
        }
      }
    }
    return rho;
  }
};

MultiPairVector field_with_blank_pairs(const PureCVState& cv, unsigned pairs) {
  const std::size_t n = cv.cutoff().levels();
  MultiPairVector v{n, pairs, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n * n) << (2 * pairs))};
  for (const auto& [idx, c] : cv.entries()) {
    v.psi(static_cast<Eigen::Index>((idx.a * n + idx.b) * v.pair_dim())) = c;
  }
  return v;
}

}  // namespace

TEST(StepTimeTest, HalvesEachStep) {
  EXPECT_DOUBLE_EQ(step_time(1), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(step_time(2), std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(step_time(5), std::numbers::pi / 32);
}

TEST(CouplingBlocksTest, StructureMatchesDenseSideMatrix) {
  for (unsigned k = 1; k <= 3; ++k) {
    const FockCutoff cutoff(16);
    const auto blocks = coupling_blocks(k, cutoff);
    const std::size_t half = std::size_t{1} << (k - 1);
    ASSERT_EQ(blocks.size(), 16 - half);
    const Eigen::MatrixXcd u = side_unitary(k, cutoff, Direction::Forward);
    std::size_t coupled = 0;
    for (const auto& blk : blocks) {
      EXPECT_EQ(blk.m_high - blk.m_low, half);
      const Rotation rot = block_rotation(k, blk.m_high);
      EXPECT_NEAR(rot.cos, u(static_cast<Eigen::Index>(blk.m_high * 2),
                             static_cast<Eigen::Index>(blk.m_high * 2)).real(), 1e-14);
      coupled += 2;
    }
    // Singletons: |m, -> below 2^(k-1) and |m, +> at the top.
    EXPECT_EQ(32 - coupled, 2 * half);
  }
}

TEST(BlockRotationTest, ExactQuarterTurns) {
  EXPECT_EQ(block_rotation(1, 1).cos, 0.0);
  EXPECT_EQ(block_rotation(1, 1).sin, 1.0);
  EXPECT_EQ(block_rotation(1, 2).cos, -1.0);
  EXPECT_EQ(block_rotation(1, 2).sin, 0.0);
  EXPECT_EQ(block_rotation(3, 12).cos, 0.0);
  EXPECT_EQ(block_rotation(3, 12).sin, -1.0);
  EXPECT_NEAR(block_rotation(3, 5).cos, std::cos(5 * std::numbers::pi / 8), 1e-15);
}

TEST(HalfStepTest, SingleSideActions) {
  const FockCutoff c(4);
  const auto one = apply_half_step(basis_joint(c, 1, 0, 0), Side::AC, 1, Direction::Forward);
  EXPECT_EQ(one.entries().size(), 1u);
  EXPECT_NEAR(std::abs(one.at(0, 0)[2] - (-kI)), 0.0, 1e-15);

  const auto two = apply_half_step(basis_joint(c, 2, 0, 0), Side::AC, 1, Direction::Forward);
  EXPECT_NEAR(std::abs(two.at(2, 0)[0] - Complex{-1.0}), 0.0, 1e-15);

  for (Direction dir : {Direction::Forward, Direction::Reverse}) {
    const auto vac = apply_half_step(basis_joint(c, 0, 0, 0), Side::AC, 1, dir);
    EXPECT_EQ(vac.at(0, 0)[0], Complex{1.0});
  }

  const auto bd = apply_half_step(basis_joint(c, 0, 1, 0), Side::BD, 1, Direction::Forward);
  EXPECT_NEAR(std::abs(bd.at(0, 0)[1] - (-kI)), 0.0, 1e-15);
}

TEST(HalfStepTest, ReverseLastStepRaisesField) {
  for (unsigned k = 1; k <= 4; ++k) {
    const FockCutoff c(std::size_t{1} << k);
    const auto out = apply_half_step(basis_joint(c, 0, 0, 2), Side::AC, k, Direction::Reverse);
    EXPECT_NEAR(std::abs(out.at(std::size_t{1} << (k - 1), 0)[0] - kI), 0.0, 1e-15) << "k=" << k;
    EXPECT_NEAR(out.norm(), 1.0, 1e-15);
  }
}

TEST(HalfStepTest, ForwardThenReverseIsIdentity) {
  SeededRng rng(11);
  const FockCutoff c(8);
  const JointState psi = random_joint_state(rng, c);
  for (unsigned k = 1; k <= 3; ++k) {
    const auto back = apply_step(apply_step(psi, k, Direction::Forward), k, Direction::Reverse);
    EXPECT_LT((to_dense_vector(back) - to_dense_vector(psi)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(HalfStepTest, SidesCommute) {
  SeededRng rng(12);
  const FockCutoff c(8);
  const JointState psi = random_joint_state(rng, c);
  const auto ac_bd = apply_half_step(apply_half_step(psi, Side::AC, 2, Direction::Forward), Side::BD, 2,
                                     Direction::Forward);
  const auto bd_ac = apply_half_step(apply_half_step(psi, Side::BD, 2, Direction::Forward), Side::AC, 2,
                                     Direction::Forward);
  EXPECT_LT((to_dense_vector(ac_bd) - to_dense_vector(bd_ac)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HalfStepTest, RequiresCompatibleCutoff) {
  const FockCutoff c(6);
  EXPECT_THROW(apply_half_step(basis_joint(c, 0, 0, 0), Side::AC, 2, Direction::Forward),
               std::invalid_argument);
}

TEST(ForwardStepTest, FirstPairOfSqueezedVacuum) {
  const auto cv = make_tmsv(TMSVParams::from_lambda(0.5), FockCutoff(64));
  const auto step = forward_step(cv, 1);
  const auto& amps = step.pair.amplitudes();
  EXPECT_NEAR(std::abs(amps[0] - Complex{0.894427190999916}), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(amps[1]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(amps[2]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(amps[3] - Complex{-0.447213595499958}), 0.0, 1e-12);
  EXPECT_LT(step.defect, 1e-12);

  // Dense evolution of the whole joint state agrees with the split.
  const JointState joint = JointState::product(cv, QubitPairState::blank().amplitudes());
  Eigen::VectorXcd psi = to_dense_vector(joint);
  psi = dense_oracle_step(psi, cv.cutoff(), Side::AC, 1, Direction::Forward);
  psi = dense_oracle_step(psi, cv.cutoff(), Side::BD, 1, Direction::Forward);
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (Eigen::Index f = 0; f < psi.size() / 4; ++f) rho += psi.segment<4>(f * 4) * psi.segment<4>(f * 4).adjoint();
  EXPECT_LT((rho - step.pair.density()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForwardStepTest, ResidualKeepsEvenPhotonNumbers) {
  const auto cv = make_tmsv(TMSVParams::from_lambda(0.5), FockCutoff(64));
  const auto step = forward_step(cv, 1);
  const Complex ref = step.residual.coeff(0, 0);
  for (const auto& [idx, c] : step.residual.entries()) {
    EXPECT_EQ(idx.a, idx.b);
    EXPECT_EQ(idx.a % 2, 0u);
    EXPECT_NEAR(std::abs(c / ref - std::pow(0.25, static_cast<double>(idx.a / 2))), 0.0, 1e-12);
  }
}

TEST(ForwardStepTest, RejectsUnexpectedSupport) {
  const FockCutoff c(8);
  const auto odd = PureCVState::normalized(c, {{{0, 0}, Complex{1.0}}, {{1, 1}, Complex{1.0}}});
  EXPECT_THROW(forward_step(odd, 2), ProtocolError);
}

TEST(ForwardConvertTest, VacuumGivesBlankPairs) {
  const auto out = forward_convert(make_tmsv(TMSVParams::from_lambda(0.0), FockCutoff(8)), 3);
  ASSERT_EQ(out.pairs.size(), 3u);
  for (const auto& p : out.pairs) EXPECT_NEAR(std::abs(p.amplitudes()[0] - Complex{1.0}), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.residual.coeff(0, 0)), 1.0, 1e-15);
}

TEST(ForwardConvertTest, PairRatioFollowsRepeatedSquaring) {
  const FockCutoff c = tmsv_cutoff_for(0.8, 3, 1e-12, 256);
  const auto out = forward_convert(make_tmsv(TMSVParams::from_lambda(0.8), c), 3);
  for (unsigned k = 1; k <= 3; ++k) {
    const auto& a = out.pairs[k - 1].amplitudes();
    const Complex ratio = a[3] / a[0];
    EXPECT_NEAR(std::abs(ratio - Complex{-std::pow(0.8, std::pow(2.0, k - 1))}), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::real(out.pairs[2].amplitudes()[3] / out.pairs[2].amplitudes()[0]), -0.4096, 1e-12);
  EXPECT_EQ(out.report.steps.size(), 3u);
  EXPECT_LT(out.report.max_defect(), 1e-12);
}

TEST(ForwardConvertTest, RejectsIncompatibleCutoff) {
  const auto cv = make_tmsv(TMSVParams::from_lambda(0.5), FockCutoff(6), {1e-12, true});
  EXPECT_THROW(forward_convert(cv, 3), std::invalid_argument);
}

TEST(ForwardDiagonalTest, ColdFieldGivesBlankPairs) {
  const auto out = forward_convert_diagonal(make_thermal(0.0, FockCutoff(8)), 3);
  for (const auto& p : out.pairs) EXPECT_NEAR(p.density()(0, 0).real(), 1.0, 1e-15);
}

TEST(ForwardDiagonalTest, FirstPairMarginalMatchesDigitCount) {
  const auto mixture = make_thermal(0.5, FockCutoff(16), {1e-12, true});
  const auto out = forward_convert_diagonal(mixture, 1);
  // Brute force: probability that the lowest binary digit of a is 1.
  double odd = 0.0;
  for (Eigen::Index a = 0; a < 16; ++a)
    for (Eigen::Index b = 0; b < 16; ++b)
      if (a % 2 == 1) odd += mixture.weights()(a, b);
  const Eigen::Matrix4cd rho = out.pairs[0].density();
  const double c_plus = (rho(2, 2) + rho(3, 3)).real();
  EXPECT_NEAR(c_plus, odd, 1e-14);
  EXPECT_NEAR(1.0 - c_plus, 2.0 / 3.0, 1e-4);
  EXPECT_LT(out.defect, 1e-14);
}

TEST(ForwardDiagonalTest, ResidualIsGeometricInBlocks) {
  for (unsigned k = 1; k <= 4; ++k) {
    const auto out = forward_convert_diagonal(make_thermal(0.5, FockCutoff(64)), k);
    const std::size_t step = std::size_t{1} << k;
    const double ratio = std::pow(0.5, static_cast<double>(step));
    const auto& w = out.residual.weights();
    EXPECT_NEAR(w(static_cast<Eigen::Index>(step), 0) / w(0, 0), ratio, 1e-12);
    EXPECT_NEAR(w(static_cast<Eigen::Index>(2 * step), static_cast<Eigen::Index>(step)) /
                    w(static_cast<Eigen::Index>(step), static_cast<Eigen::Index>(step)),
                ratio, 1e-12);
    EXPECT_EQ(w(1, 0), 0.0);
  }
}

TEST(ForwardWernerTest, MarginalMatchesBruteForceEvolution) {
  const WernerCVState werner = make_werner(0.5, 0.5, 0.5, FockCutoff(8), {1e-12, true});
  const ConvertedWerner converted = forward_convert_werner(werner, 2);

  MultiPairVector pure = field_with_blank_pairs(werner.pure_branch(), 2);
  pure.apply_step(1);
  pure.apply_step(2);
  Eigen::MatrixXcd expected = werner.pure_weight() * pure.qubit_density();
  const auto& w = werner.thermal_branch().weights();
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      const auto fock = PureCVState::normalized(FockCutoff(8), {{{a, b}, Complex{1.0}}});
      MultiPairVector branch = field_with_blank_pairs(fock, 2);
      branch.apply_step(1);
      branch.apply_step(2);
      expected += werner.thermal_weight() * w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) *
                  branch.qubit_density();
    }
  }
  const Eigen::MatrixXcd actual = converted.qubit_density();
  EXPECT_LT((actual - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(actual.trace().real(), 1.0, 1e-12);
}

TEST(ForwardWernerTest, PureLimitIsProductOfPairs) {
  const ConvertedWerner converted =
      forward_convert_werner(make_werner(1.0, 0.5, 0.5, werner_cutoff_for(0.5, 0.5, 2)), 2);
  EXPECT_LT((converted.qubit_density() - pairs_tensor_density(converted.pure.pairs)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(ReverseConvertTest, BlankPairsGiveVacuum) {
  const std::vector<QubitPairState> pairs(3, QubitPairState::blank());
  const auto out = reverse_convert(pairs);
  const auto& cv = std::get<PureCVState>(out.state);
  EXPECT_EQ(cv.cutoff().levels(), 8u);
  EXPECT_NEAR(std::abs(cv.coeff(0, 0)), 1.0, 1e-15);
  EXPECT_EQ(cv.entries().size(), 1u);
}

TEST(ReverseConvertTest, SinglePairRoundTrip) {
  const std::vector<QubitPairState> pairs{tmsv_pair(0.5)};
  const auto cv = std::get<PureCVState>(reverse_convert(pairs).state);
  const auto target = make_tmsv(TMSVParams::from_lambda(0.5), FockCutoff(2), {1e-12, true});
  EXPECT_NEAR(fidelity(cv, target), 1.0, 1e-14);
}

TEST(ReverseConvertTest, DoublyExcitedPairRaisesBothModes) {
  const std::vector<QubitPairState> pairs{QubitPairState::pure(PairAmplitudes{Complex{}, Complex{}, Complex{}, Complex{1.0}})};
  const auto cv = std::get<PureCVState>(reverse_convert(pairs).state);
  EXPECT_NEAR(std::abs(cv.coeff(1, 1)), 1.0, 1e-15);
  const auto closed = reverse_closed_form(pairs);
  EXPECT_NEAR(std::abs(closed.coeff(1, 1) - Complex{-1.0}), 0.0, 1e-15);
  EXPECT_NEAR(max_diff_up_to_phase(cv, closed), 0.0, 1e-15);
}

TEST(ReverseConvertTest, ClosedFormMatchesStepwise) {
  SeededRng rng(5);
  for (unsigned k = 1; k <= 4; ++k) {
    std::vector<QubitPairState> pairs;
    for (unsigned j = 0; j < k; ++j) pairs.push_back(random_pure_pair(rng));
    const PureCVState stepwise = std::get<PureCVState>(reverse_convert(pairs).state);
    EXPECT_LT(max_diff_up_to_phase(reverse_closed_form(pairs), stepwise), 1e-10) << "K=" << k;
  }
}

TEST(ReverseConvertTest, DroppingAPhaseFactorIsDetectable) {
  SeededRng rng(6);
  std::vector<QubitPairState> pairs{random_pure_pair(rng), random_pure_pair(rng)};
  const PureCVState stepwise = std::get<PureCVState>(reverse_convert(pairs).state);
  EXPECT_GT(max_diff_up_to_phase(reverse_closed_form(pairs, {false, true}), stepwise), 1e-3);
  EXPECT_GT(max_diff_up_to_phase(reverse_closed_form(pairs, {true, false}), stepwise), 1e-3);
}

TEST(ReverseConvertTest, ClosedFormRejectsMixedPairs) {
  const std::vector<QubitPairState> pairs{QubitPairState::mixed(Eigen::Matrix4cd::Identity() / 4.0)};
  EXPECT_THROW(reverse_closed_form(pairs), std::invalid_argument);
}

TEST(ReverseConvertTest, MixedSinglePairMatchesDenseOracle) {
  SeededRng rng(8);
  const QubitPairState pair = random_mixed_pair(rng);
  const std::vector<QubitPairState> pairs{pair};
  const auto out = reverse_convert(pairs);
  ASSERT_FALSE(out.is_pure());
  const auto& rho = std::get<CVDensity>(out.state).matrix();

  // Vacuum field (x) pair, both reversed half steps, then trace out the pair.
  const FockCutoff c(2);
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(16, 16);
  joint.topLeftCorner(4, 4) = pair.density();
  joint = dense_oracle_step(joint, c, Side::AC, 1, Direction::Reverse);
  joint = dense_oracle_step(joint, c, Side::BD, 1, Direction::Reverse);
  Eigen::MatrixXcd field = Eigen::MatrixXcd::Zero(4, 4);
  for (Eigen::Index f = 0; f < 4; ++f)
    for (Eigen::Index g = 0; g < 4; ++g)
      for (Eigen::Index q = 0; q < 4; ++q) field(f, g) += joint(f * 4 + q, g * 4 + q);
  EXPECT_LT((rho - field).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(out.max_leftover, 1e-12);
}

TEST(ReverseConvertTest, MixedRouteSizeLimit) {
  std::vector<QubitPairState> pairs(4, QubitPairState::mixed(Eigen::Matrix4cd::Identity() / 4.0));
  EXPECT_THROW(reverse_convert(pairs), std::invalid_argument);
}

TEST(ReverseConvertTest, LargerOutputCutoff) {
  const std::vector<QubitPairState> pairs{tmsv_pair(0.3), tmsv_pair(0.09)};
  ReverseOptions options;
  options.cutoff = FockCutoff(16);
  const auto cv = std::get<PureCVState>(reverse_convert(pairs, options).state);
  EXPECT_EQ(cv.cutoff().levels(), 16u);
  options.cutoff = FockCutoff(6);
  EXPECT_THROW(reverse_convert(pairs, options), std::invalid_argument);
}
