#include <gtest/gtest.h>

#include "jetflow/analysis.hpp"
#include "jetflow/flow.hpp"
#include "jetflow/generators.hpp"
#include "jetflow/properties.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace jetflow;

namespace {

void expect_identical_over_horizon(const ChainSpec& a, const ChainSpec& b,
                                   Step t) {
  for (Step n = 0; n < t; ++n) {
    EXPECT_EQ(matrix_at(a, n).data(), matrix_at(b, n).data())
        << "chains diverge at step " << n;
  }
}

}  // namespace

TEST(DoublyStochastic, TwoAgentFormIsSymmetricConvex) {
  const ChainSpec spec = gen_doubly_stochastic(2, 42);
  for (Step n = 0; n < 10; ++n) {
    const StochasticMatrix a = matrix_at(spec, n);
    EXPECT_NEAR(a(0, 0), a(1, 1), 1e-12);
    EXPECT_NEAR(a(0, 1), a(1, 0), 1e-12);
    EXPECT_NEAR(a(0, 0) + a(0, 1), 1.0, 1e-12);
  }
}

TEST(DoublyStochastic, ColumnSumsAreOne) {
  const ChainSpec spec = gen_doubly_stochastic(5, 3);
  for (Step n = 0; n < 20; ++n) {
    const Eigen::VectorXd colsums = matrix_at(spec, n).data().colwise().sum();
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(colsums(j), 1.0, 1e-9);
  }
}

TEST(DoublyStochastic, UniformIsLeftFixedVector) {
  const ChainSpec spec = gen_doubly_stochastic(4, 9);
  const Eigen::RowVectorXd uniform = Eigen::RowVectorXd::Constant(4, 0.25);
  for (Step n = 0; n < 10; ++n) {
    const Eigen::RowVectorXd out = uniform * matrix_at(spec, n).data();
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(out(j), 0.25, 1e-12);
  }
}

TEST(SelfConfidentCutBalanced, DiagonalsRespectDelta) {
  const ChainSpec spec = gen_self_confident_cut_balanced(3, 17, 0.9, 1.5);
  for (Step n = 0; n < 25; ++n) {
    const StochasticMatrix a = matrix_at(spec, n);
    for (int i = 0; i < 3; ++i) EXPECT_GE(a(i, i), 0.9 - 1e-12);
  }
}

TEST(SelfConfidentCutBalanced, PassesCutBalanceCheck) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ChainSpec spec =
        gen_self_confident_cut_balanced(6, seed, 0.25, 1.5);
    for (Step n = 0; n < 10; ++n) {
      const StochasticMatrix a = matrix_at(spec, n);
      EXPECT_TRUE(check_cut_balance(a, 1.5).holds);
      EXPECT_TRUE(oracle::cut_balanced(oracle::to_mat(a), 1.5));
    }
  }
}

TEST(SelfConfidentCutBalanced, SeedsAreReproducible) {
  expect_identical_over_horizon(
      gen_self_confident_cut_balanced(5, 123, 0.4, 2.0),
      gen_self_confident_cut_balanced(5, 123, 0.4, 2.0), 20);
}

TEST(SelfConfidentCutBalanced, BlocksNeverCouple) {
  const ChainSpec spec = gen_self_confident_cut_balanced(6, 5, 0.3, 1.0, 2);
  for (Step n = 0; n < 20; ++n) {
    const StochasticMatrix a = matrix_at(spec, n);
    for (int i = 0; i < 3; ++i) {
      for (int j = 3; j < 6; ++j) {
        EXPECT_EQ(a(i, j), 0.0);
        EXPECT_EQ(a(j, i), 0.0);
      }
    }
  }
}

TEST(SelfConfidentCutBalanced, RejectsBadParams) {
  EXPECT_THROW(gen_self_confident_cut_balanced(4, 0, 1.5, 2.0), ParamError);
  EXPECT_THROW(gen_self_confident_cut_balanced(4, 0, 0.3, 0.5), ParamError);
  EXPECT_THROW(gen_self_confident_cut_balanced(4, 0, 0.3, 2.0, 9), ParamError);
}

TEST(TwoLeader, TinyCaseIsIdentity) {
  const ChainSpec spec = gen_two_leader(2, 7);
  for (Step n = 0; n < 5; ++n) {
    EXPECT_EQ(matrix_at(spec, n).data(), Eigen::MatrixXd::Identity(2, 2));
  }
}

TEST(TwoLeader, BlocksHaveZeroInboundInfluence) {
  const ChainSpec spec = gen_two_leader(5, 31);
  const Jet block1 = Jet::constant(AgentSet::of({0, 1, 2}));
  const Jet block2 = Jet::constant(AgentSet::of({3, 4}));
  const LeaderReport r1 = is_leader(spec, block1, 50, 0.0);
  const LeaderReport r2 = is_leader(spec, block2, 50, 0.0);
  EXPECT_TRUE(r1.leader_at_horizon);
  EXPECT_TRUE(r2.leader_at_horizon);
  EXPECT_EQ(r1.influence.back(), 0.0);
  EXPECT_EQ(r2.influence.back(), 0.0);
}

TEST(TwoLeader, NeverClassifiesErgodic) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const ChainSpec spec = gen_two_leader(4, seed);
    const DecompositionReport rep = classify(spec, 500, 1e-6, 50.0);
    EXPECT_NE(rep.verdict, Verdict::kErgodic);
  }
}

TEST(PeriodicSwap, ProductsAlternate) {
  const ChainSpec spec = gen_periodic_swap(2);
  // Even-length products (odd top index) collapse to the identity.
  const StochasticMatrix even = backward_product(spec, 0, 1);
  EXPECT_EQ(even(0, 0), 1.0);
  const StochasticMatrix odd = backward_product(spec, 0, 2);
  EXPECT_EQ(odd(0, 1), 1.0);
  EXPECT_EQ(odd(0, 0), 0.0);
}

TEST(PeriodicSwap, ClassifiesInconclusive) {
  const DecompositionReport rep = classify(gen_periodic_swap(2), 100, 1e-6, 50.0);
  EXPECT_EQ(rep.verdict, Verdict::kInconclusive);
}

TEST(PeriodicSwap, RejectsOtherSizes) {
  EXPECT_THROW(gen_periodic_swap(3), ParamError);
}

TEST(BalancedAsymmetric, PermutationMatricesPassExactly) {
  const ChainSpec spec = gen_balanced_asymmetric(5, 2, 1.0, /*kperms=*/1);
  for (Step n = 0; n < 8; ++n) {
    const StochasticMatrix a = matrix_at(spec, n);
    int ones = 0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        EXPECT_TRUE(a(i, j) == 0.0 || a(i, j) == 1.0);
        if (a(i, j) == 1.0) ++ones;
      }
    }
    EXPECT_EQ(ones, 5);
    EXPECT_TRUE(check_balanced_asymmetry(a, 1.0).holds);
    EXPECT_TRUE(oracle::balanced_asymmetric(oracle::to_mat(a), 1.0));
  }
}

TEST(BalancedAsymmetric, PermutedDoublyStochasticPasses) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ChainSpec spec = gen_balanced_asymmetric(5, seed);
    const StochasticMatrix a = matrix_at(spec, 0);
    EXPECT_TRUE(check_balanced_asymmetry(a, 1.0).holds);
    EXPECT_TRUE(oracle::balanced_asymmetric(oracle::to_mat(a), 1.0));
  }
}

TEST(BalancedAsymmetric, RejectionCountsAreDeterministic) {
  const ChainSpec a = gen_balanced_asymmetric(4, 77, 1.2, 4, /*jitter=*/0.05);
  const ChainSpec b = gen_balanced_asymmetric(4, 77, 1.2, 4, /*jitter=*/0.05);
  for (Step n = 0; n < 10; ++n) {
    EXPECT_EQ(rejections_at(a, n), rejections_at(b, n));
    EXPECT_EQ(matrix_at(a, n).data(), matrix_at(b, n).data());
  }
}

TEST(Generators, AllOutputsValidateAndReproduce) {
  const std::vector<ChainSpec> specs = {
      gen_doubly_stochastic(4, 1),
      gen_self_confident_cut_balanced(5, 1, 0.3, 2.0, 2),
      gen_two_leader(5, 1),
      gen_balanced_asymmetric(4, 1, 1.0, 2),
  };
  for (const auto& spec : specs) {
    for (Step n = 0; n < 15; ++n) {
      const StochasticMatrix a = matrix_at(spec, n);
      EXPECT_NO_THROW(validate_stochastic(a.data()));
      EXPECT_EQ(a.data(), matrix_at(spec, n).data());  // random access
    }
  }
}

TEST(Generators, FamilyRegistryDispatches) {
  const ChainSpec spec =
      make_chain("doubly_stochastic", 4, 7, {});
  EXPECT_EQ(spec.kind(), ChainSpec::Kind::kGenerator);
  EXPECT_EQ(spec.agents(), 4);
  expect_identical_over_horizon(spec, gen_doubly_stochastic(4, 7), 5);
  EXPECT_THROW(make_chain("no_such_family", 4, 7, {}), ParamError);
  EXPECT_THROW(make_chain("doubly_stochastic", 4, 7, {{"bogus", 1.0}}),
               ParamError);
  EXPECT_EQ(list_families().size(), 5u);
}
