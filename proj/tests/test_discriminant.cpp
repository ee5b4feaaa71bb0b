#include <gtest/gtest.h>

#include "mixdisc/discriminant.hpp"
#include "oracles.hpp"

using namespace mixdisc;
using namespace mixdisc::testing;

namespace {

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

double bapat(int n) { return factorial(n) / std::pow(n, n); }

HermitianMatrix diag(std::vector<double> d) { return HermitianMatrix::diagonal(d); }

constexpr Algorithm kAll[] = {Algorithm::Polarized, Algorithm::SigmaDet, Algorithm::DoublePerm,
                              Algorithm::SignedPermanent, Algorithm::Tensor};

}  // namespace

TEST(MatrixTuple, RejectsNonSquareTuples) {
  EXPECT_THROW(MatrixTuple({HermitianMatrix::identity(2)}), DimensionMismatch);
  EXPECT_THROW(MatrixTuple({HermitianMatrix::identity(2), HermitianMatrix::identity(3)}), DimensionMismatch);
  EXPECT_THROW(MatrixTuple(std::vector<HermitianMatrix>{}), DimensionMismatch);
}

TEST(Evaluators, IdentityPairGivesTwo) {
  const MatrixTuple t({HermitianMatrix::identity(2), HermitianMatrix::identity(2)});
  for (Algorithm a : kAll) EXPECT_NEAR(evaluate(t, a), 2.0, 1e-14) << algorithm_name(a);
}

TEST(Evaluators, SingleEntryTuple) {
  const MatrixTuple t({diag({2.5})});
  for (Algorithm a : kAll) EXPECT_DOUBLE_EQ(evaluate(t, a), 2.5) << algorithm_name(a);
}

TEST(Evaluators, UniformTupleAtThree) {
  for (Algorithm a : kAll) EXPECT_NEAR(evaluate(MatrixTuple::uniform(3), a), 6.0 / 27.0, 1e-15);
}

TEST(Evaluators, DiagonalPermutationTupleEqualsPermanentOfIdentity) {
  const MatrixTuple t({diag({1, 0}), diag({0, 1})});
  const double per = brute_permanent(RMatrix(RMatrix::Identity(2, 2)));
  for (Algorithm a : kAll) EXPECT_NEAR(evaluate(t, a), per, 1e-15);
}

TEST(Evaluators, TensorNEqualsTwoHandExpansion) {
  Rng rng(21);
  const MatrixTuple t = random_hermitian_tuple(2, rng);
  const CMatrix& a = t[0].matrix();
  const CMatrix& b = t[1].matrix();
  const Complex want = a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0) - a(0, 1) * b(1, 0) - a(1, 0) * b(0, 1);
  EXPECT_NEAR(eval_tensor(t), want.real(), 1e-14);
  EXPECT_NEAR(eval_sigma_det(t), want.real(), 1e-14);
}

TEST(Evaluators, PolarizedNEqualsTwo) {
  Rng rng(22);
  const MatrixTuple t = random_psd_tuple(2, rng);
  const double want = det_hermitian(t[0] + t[1]) - det_hermitian(t[0]) - det_hermitian(t[1]);
  EXPECT_NEAR(eval_polarized(t), want, 1e-12 * (1 + std::abs(want)));
}

TEST(Evaluators, PolarizedUniformAtEight) {
  EXPECT_LE(rel_err(eval_polarized(MatrixTuple::uniform(8)), bapat(8)), 1e-12);
}

TEST(Evaluators, RandomCrossOracleAtFour) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixTuple t = random_psd_tuple(4, rng);
    const double ref = eval_sigma_det(t);
    for (Algorithm a : kAll) EXPECT_LE(rel_gap(evaluate(t, a), ref), 1e-9) << algorithm_name(a);
  }
}

TEST(Evaluators, GatesAreEnforced) {
  EXPECT_THROW(eval_double_perm(MatrixTuple::uniform(7)), DimensionTooLarge);
  EXPECT_THROW(eval_tensor(MatrixTuple::uniform(7)), DimensionTooLarge);
  EXPECT_THROW(eval_signed_permanent(MatrixTuple::uniform(8)), DimensionTooLarge);
  EXPECT_THROW(eval_sigma_det(MatrixTuple::uniform(11)), DimensionTooLarge);
  EXPECT_THROW(eval_polarized(MatrixTuple::uniform(21)), DimensionTooLarge);
  EXPECT_THROW(permanent(RMatrix(RMatrix::Ones(21, 21))), DimensionTooLarge);
}

TEST(Evaluators, AlgorithmNamesRoundTrip) {
  for (Algorithm a : kAll) EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
  EXPECT_THROW(parse_algorithm("bogus"), PreconditionViolated);
}

TEST(Permanent, Examples) {
  EXPECT_NEAR(permanent(RMatrix(RMatrix::Identity(5, 5))), 1.0, 1e-15);
  EXPECT_NEAR(permanent(RMatrix(RMatrix::Constant(4, 4, 0.25))), 3.0 / 32.0, 1e-16);
  RMatrix b = RMatrix::Identity(6, 6);
  for (int i = 0; i < 6; ++i) b(i, (i + 1) % 6) = 1.0;
  EXPECT_EQ(permanent(b), 2.0);
}

TEST(Permanent, MatchesBruteForceOnComplexInput) {
  Rng rng(24);
  for (int n = 1; n <= 7; ++n) {
    const CMatrix c = random_complex(n, n, rng);
    const Complex want = brute_permanent(c);
    EXPECT_LT(std::abs(permanent(c) - want), 1e-11 * (1 + std::abs(want)));
  }
}

TEST(Properties, RankOneTupleIsDeterminantOfSum) {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    std::vector<CMatrix> general;
    std::vector<HermitianMatrix> hermitian;
    CMatrix sum_general = CMatrix::Zero(n, n);
    CMatrix sum_hermitian = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      const CVector x = random_complex(n, 1, rng);
      const CVector y = random_complex(n, 1, rng);
      general.push_back(x * y.adjoint());
      sum_general += x * y.adjoint();
      hermitian.push_back(HermitianMatrix::outer(x));
      sum_hermitian += x * x.adjoint();
    }
    const Complex want = det(sum_general);
    EXPECT_LE(std::abs(mixed_discriminant_complex(general) - want), 1e-9 * std::abs(want));
    EXPECT_LE(rel_err(eval_polarized(MatrixTuple(hermitian)), det(sum_hermitian).real()), 1e-9);
  }
}

TEST(Properties, MultilinearInEachSlot) {
  Rng rng(26);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const int slot = trial % n;
    const HermitianMatrix x = random_hermitian(n, rng);
    const HermitianMatrix y = random_hermitian(n, rng);
    const double alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
    const double lhs = eval_polarized(t.with_slot(slot, x * alpha + y * beta));
    const double rhs = alpha * eval_polarized(t.with_slot(slot, x)) + beta * eval_polarized(t.with_slot(slot, y));
    const double scale = std::abs(alpha * eval_polarized(t.with_slot(slot, x))) +
                         std::abs(beta * eval_polarized(t.with_slot(slot, y)));
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * scale);
  }
}

TEST(Properties, CongruenceScalesByDeterminants) {
  Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const CMatrix x = random_complex(n, n, rng);
    std::vector<HermitianMatrix> moved;
    for (const auto& a : t) moved.push_back(a.congruence(x));
    const double want = std::norm(det(x)) * eval_polarized(t);
    EXPECT_LE(rel_err(eval_polarized(MatrixTuple(moved)), want), 1e-8);
  }
}

TEST(Properties, ScalarFactorsPullOut) {
  Rng rng(28);
  const MatrixTuple t = random_psd_tuple(4, rng);
  std::vector<HermitianMatrix> scaled;
  double prod = 1;
  for (int i = 0; i < 4; ++i) {
    const double a = rng.uniform(0.5, 2.0);
    prod *= a;
    scaled.push_back(t[i] * a);
  }
  EXPECT_LE(rel_err(eval_polarized(MatrixTuple(scaled)), prod * eval_polarized(t)), 1e-12);
}

TEST(Properties, NonnegativeOnPsdTuples) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 5;
    std::vector<HermitianMatrix> mats;
    for (int i = 0; i < n; ++i) {
      // low-rank members push D towards zero
      const CMatrix g = random_complex(n, 1 + static_cast<int>(rng.uniform() * 2), rng);
      mats.push_back(HermitianMatrix(CMatrix(g * g.adjoint())));
    }
    EXPECT_GE(eval_polarized(MatrixTuple(mats)), -1e-10);
  }
}

TEST(Properties, SymmetricUnderSlotPermutation) {
  Rng rng(30);
  const MatrixTuple t = random_psd_tuple(4, rng);
  const double ref = eval_polarized(t);
  int count = 0;
  std::vector<int> p{0, 1, 2, 3};
  do {
    std::vector<HermitianMatrix> mats;
    for (int i : p) mats.push_back(t[i]);
    EXPECT_LE(rel_err(eval_polarized(MatrixTuple(mats)), ref), 1e-12);
    ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  EXPECT_EQ(count, 24);
}

TEST(Properties, DiagonalTupleIsPermanent) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 6;
    const RMatrix c = random_nonnegative(n, rng);
    const double want = brute_permanent(c);
    EXPECT_LE(rel_err(eval_polarized(MatrixTuple::diagonal_from_columns(c)), want), 1e-9);
    EXPECT_LE(rel_err(permanent(c), want), 1e-12);
  }
}

TEST(Gradient, UniformTupleHasScalarGradients) {
  for (int n = 1; n <= 6; ++n) {
    const auto g = gradient(MatrixTuple::uniform(n));
    const double want = factorial(n - 1) / std::pow(n, n - 1);
    for (const auto& q : g.q) {
      EXPECT_LE(max_abs(CMatrix(q.matrix() - want * CMatrix::Identity(n, n))), 1e-13) << "n=" << n;
    }
  }
}

TEST(Gradient, UniformTupleFiniteDifference) {
  // D(I/n, ..., X, ...) should have derivative (n-1)!/n^(n-1) tr X
  const int n = 4;
  Rng rng(32);
  const MatrixTuple t = MatrixTuple::uniform(n);
  const HermitianMatrix x = random_hermitian(n, rng);
  const double eps = 1e-6;
  const double fd = (eval_polarized(t.with_slot(1, t[1] + x * eps)) -
                     eval_polarized(t.with_slot(1, t[1] - x * eps))) / (2 * eps);
  EXPECT_NEAR(fd, factorial(n - 1) / std::pow(n, n - 1) * x.trace(), 1e-8);
}

TEST(Gradient, TraceIdentityAndDirectionalDerivative) {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const auto g = gradient(t);
    EXPECT_LE(rel_err(g.value, eval_sigma_det(t)), 1e-10);
    for (int i = 0; i < n; ++i) {
      const double tr = (t[i].matrix() * g.q[i].matrix()).trace().real();
      EXPECT_LE(rel_err(tr, g.value), 1e-9);
    }
    const int slot = trial % n;
    const HermitianMatrix x = random_hermitian(n, rng);
    const double eps = 1e-6;
    const double fd = (eval_polarized(t.with_slot(slot, t[slot] + x * eps)) - g.value) / eps;
    const double exact = (x.matrix() * g.q[slot].matrix()).trace().real();
    const double scale = g.q[slot].matrix().norm() * x.matrix().norm();
    EXPECT_NEAR(fd, exact, 1e-4 * (1 + scale));
  }
}

TEST(Euler, ResidualSmallOnRandomTuples) {
  Rng rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 6;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const auto g = gradient(t);
    EXPECT_LE(euler_identity_residual(t, g), 1e-8 * (1 + std::abs(g.value)));
    const CVector w = random_complex(n, 1, rng);
    EXPECT_LE(euler_quadratic_residual(t, g, w), 1e-8 * (1 + std::abs(g.value)) * w.squaredNorm());
  }
}

TEST(Euler, UniformAndScalarCases) {
  for (int n = 1; n <= 6; ++n) EXPECT_LE(euler_identity_residual(MatrixTuple::uniform(n)), 1e-14);
  EXPECT_EQ(euler_identity_residual(MatrixTuple({diag({3.0})})), 0.0);
}

TEST(DoublyStochastic, Reports) {
  auto r = check_doubly_stochastic(MatrixTuple::uniform(4));
  EXPECT_TRUE(r.is_doubly_stochastic);
  EXPECT_LE(r.trace_violation, 1e-15);
  EXPECT_LE(r.sum_violation, 1e-15);
  EXPECT_EQ(r.psd_violation, 0.0);

  EXPECT_TRUE(check_doubly_stochastic(MatrixTuple({diag({1, 0}), diag({0, 1})})).is_doubly_stochastic);

  r = check_doubly_stochastic(MatrixTuple({diag({0.45, 0.45}), diag({0.5, 0.5})}));
  EXPECT_FALSE(r.is_doubly_stochastic);
  EXPECT_NEAR(r.trace_violation, 0.1, 1e-15);
  EXPECT_NEAR(r.sum_violation, 0.05, 1e-15);

  r = check_doubly_stochastic(MatrixTuple({diag({1.5, -0.5}), diag({-0.5, 1.5})}));
  EXPECT_NEAR(r.psd_violation, 0.5, 1e-15);
  EXPECT_FALSE(r.is_doubly_stochastic);
}

TEST(Exchange, UniformTupleIsFixed) {
  const auto e = exchange_value(MatrixTuple::uniform(4), 0, 2);
  EXPECT_NEAR(e.d_ij, bapat(4), 1e-15);
  EXPECT_NEAR(e.d_ji, bapat(4), 1e-15);
}

TEST(Exchange, DirectAndTraceFormsAgreeAndSatisfyAlexandrovFenchel) {
  Rng rng(35);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixTuple t = random_psd_tuple(n, rng);
    const int i = trial % n, j = (i + 1) % n;
    const auto e = exchange_value(t, i, j);
    EXPECT_LE(rel_gap(e.d_ij, e.trace_ij), 1e-8);
    EXPECT_LE(rel_gap(e.d_ji, e.trace_ji), 1e-8);
    const double d = eval_polarized(t);
    EXPECT_GE(d * d, e.d_ij * e.d_ji - 1e-8 * std::max(d * d, e.d_ij * e.d_ji));
  }
  EXPECT_THROW(exchange_value(MatrixTuple::uniform(3), 1, 1), PreconditionViolated);
}
