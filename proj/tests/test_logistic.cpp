#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "eppv/errors.hpp"
#include "eppv/logistic.hpp"
#include "test_support.hpp"

namespace eppv {
namespace {

Eigen::MatrixXd intercept_and(const Eigen::VectorXd& z) {
  Eigen::MatrixXd design(z.size(), 2);
  design.col(0).setOnes();
  design.col(1) = z;
  return design;
}

// Independent Bernoulli log-likelihood in the (b0, b1) plane.
double oracle_loglik(const Eigen::VectorXd& y, const Eigen::VectorXd& z, double b0, double b1) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double eta = b0 + b1 * z[i];
    total += y[i] * eta - std::log1p(std::exp(eta));
  }
  return total;
}

struct GridMax {
  double b0, b1, value;
};

// Grid step 1e-2 over [-5, 5]^2, then step 1e-3 and 1e-5 around the best point.
GridMax grid_search(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  GridMax best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
  auto scan = [&](double c0, double c1, double half, double step) {
    const GridMax centre = best;
    const int k = static_cast<int>(std::round(half / step));
    for (int i = -k; i <= k; ++i) {
      for (int j = -k; j <= k; ++j) {
        const double b0 = c0 + i * step, b1 = c1 + j * step;
        const double v = oracle_loglik(y, z, b0, b1);
        if (v > best.value) best = {b0, b1, v};
      }
    }
    (void)centre;
  };
  scan(0.0, 0.0, 5.0, 1e-2);
  scan(best.b0, best.b1, 2e-2, 1e-3);
  scan(best.b0, best.b1, 2e-3, 1e-5);
  return best;
}

TEST(FitLogistic, BalancedInterceptOnlyGivesHalf) {
  const Eigen::VectorXd y{{1, 0, 0, 1}};
  const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(4, 1));
  EXPECT_EQ(fit.beta[0], 0.0);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(fit.pi_hat[i], 0.5);
  EXPECT_TRUE(fit.converged);
}

TEST(FitLogistic, AllOnesResponseIsSeparated) {
  const Eigen::VectorXd y{{1, 1, 1, 1}};
  EXPECT_THROW(fit_logistic(y, Eigen::MatrixXd::Ones(4, 1)), SeparationError);
}

TEST(FitLogistic, PerfectlySeparatedCovariateIsDetected) {
  // y = 1 exactly when z > -0.1: no finite MLE.
  const Eigen::VectorXd y{{1, 0, 1, 0, 0}};
  const Eigen::VectorXd z{{0.2, -1.1, 0.9, -0.4, -0.8}};
  EXPECT_THROW(fit_logistic(y, intercept_and(z)), SeparationError);
}

TEST(FitLogistic, MatchesGridSearchOracle) {
  const Eigen::VectorXd y{{1, 0, 0, 1, 0}};
  const Eigen::VectorXd z{{0.2, -1.1, 0.9, -0.4, -0.8}};
  const LogisticFit fit = fit_logistic(y, intercept_and(z));
  const GridMax oracle = grid_search(y, z);
  ASSERT_TRUE(fit.converged);
  EXPECT_NEAR(fit.beta[0], oracle.b0, 1e-3);
  EXPECT_NEAR(fit.beta[1], oracle.b1, 1e-3);
  EXPECT_GE(fit.loglik, oracle.value - 1e-12);
  EXPECT_NEAR(fit.loglik, oracle_loglik(y, z, fit.beta[0], fit.beta[1]), 1e-12);
}

TEST(FitLogistic, RankDeficientDesignThrows) {
  Eigen::MatrixXd design(5, 3);
  design << 1, 0.1, 0.2, 1, 0.4, 0.8, 1, -0.3, -0.6, 1, 0.7, 1.4, 1, 0.0, 0.0;
  const Eigen::VectorXd y{{1, 0, 1, 0, 1}};
  EXPECT_THROW(fit_logistic(y, design), RankError);
}

TEST(FitLogistic, DimensionMismatchThrows) {
  EXPECT_THROW(fit_logistic(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Ones(4, 1)),
               DimensionError);
}

TEST(FitLogistic, ScoreEquationHoldsOnRandomData) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> n_dist(10, 60), p_dist(1, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const Dataset data = testing::random_dataset(gen, n_dist(gen), p_dist(gen));
    const LogisticFit fit = fit_logistic(data.y, data.null_design);
    ASSERT_TRUE(fit.converged);
    const Eigen::VectorXd score = data.null_design.transpose() * fit.residuals;
    EXPECT_LT(score.lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_LE(std::abs(fit.residuals.sum()), 1e-7);
    EXPECT_TRUE((fit.pi_hat.array() > 0.0).all() && (fit.pi_hat.array() < 1.0).all());
  }
}

TEST(FitLogistic, LogLikelihoodIsMonotoneAcrossIterations) {
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Dataset data = testing::random_dataset(gen, 25, 3);
    const LogisticFit fit = fit_logistic(data.y, data.null_design);
    for (std::size_t k = 1; k < fit.loglik_trace.size(); ++k) {
      // Rounding can cost an ulp or two once the optimum is reached.
      EXPECT_GE(fit.loglik_trace[k], fit.loglik_trace[k - 1] - 1e-12);
    }
  }
}

TEST(FitLogistic, InterceptOnlyReturnsSampleMean) {
  std::mt19937_64 gen(13);
  std::bernoulli_distribution coin(0.3);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd y(17);
    do {
      for (auto& v : y) v = coin(gen) ? 1.0 : 0.0;
    } while (y.sum() == 0.0 || y.sum() == 17.0);
    const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(17, 1));
    for (Eigen::Index i = 0; i < 17; ++i) EXPECT_NEAR(fit.pi_hat[i], y.mean(), 1e-10);
  }
}

TEST(FitLogistic, RestartFromEstimateConvergesImmediately) {
  std::mt19937_64 gen(14);
  for (int rep = 0; rep < 50; ++rep) {
    const Dataset data = testing::random_dataset(gen, 40, 3);
    const LogisticFit fit = fit_logistic(data.y, data.null_design);
    FitOptions options;
    options.start = fit.beta;
    const LogisticFit refit = fit_logistic(data.y, data.null_design, options);
    EXPECT_TRUE(refit.converged);
    EXPECT_LE(refit.iterations, 2);
  }
}

TEST(FitLogistic, OffsetShiftsTheIntercept) {
  const Eigen::VectorXd y{{1, 0, 0, 1, 0, 1}};
  FitOptions options;
  options.offset = Eigen::VectorXd::Constant(6, 0.75);
  const LogisticFit fit = fit_logistic(y, Eigen::MatrixXd::Ones(6, 1), options);
  EXPECT_NEAR(fit.beta[0], -0.75, 1e-9);
  EXPECT_NEAR(fit.pi_hat[0], 0.5, 1e-9);
}

TEST(PredictProbs, ZeroCoefficientsGiveHalf) {
  const Eigen::VectorXd pi = predict_probs(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Random(5, 2));
  for (double v : pi) EXPECT_EQ(v, 0.5);
}

TEST(PredictProbs, SaturatesWithoutOverflow) {
  const Eigen::MatrixXd design = Eigen::MatrixXd::Ones(1, 1);
  EXPECT_EQ(predict_probs(Eigen::VectorXd::Constant(1, 40.0), design)[0], 1.0);
  EXPECT_EQ(predict_probs(Eigen::VectorXd::Constant(1, 1000.0), design)[0], 1.0);
  const double tiny = predict_probs(Eigen::VectorXd::Constant(1, -1000.0), design)[0];
  EXPECT_GE(tiny, 0.0);
  EXPECT_TRUE(std::isfinite(tiny));
}

TEST(PredictProbs, DirectEvaluation) {
  Eigen::MatrixXd row(1, 2);
  row << 1.0, 0.7;
  const double pi = predict_probs(Eigen::VectorXd{{0.0, 1.0}}, row)[0];
  EXPECT_NEAR(pi, 1.0 / (1.0 + std::exp(-0.7)), 1e-15);
  EXPECT_NEAR(pi, 0.6682, 5e-5);
}

TEST(PredictProbs, DimensionMismatchThrows) {
  EXPECT_THROW(predict_probs(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Ones(4, 2)),
               DimensionError);
}

TEST(LogLikelihood, InterceptModelAtZero) {
  const Eigen::VectorXd y{{1, 0, 0, 1}};
  EXPECT_NEAR(log_likelihood(Eigen::VectorXd::Zero(1), y, Eigen::MatrixXd::Ones(4, 1)),
              4.0 * std::log(0.5), 1e-12);
  EXPECT_NEAR(4.0 * std::log(0.5), -2.772589, 1e-6);
}

TEST(LogLikelihood, DirectEvaluation) {
  const double value = log_likelihood(Eigen::VectorXd{{1, 0}}, Eigen::VectorXd{{0.8, 0.3}});
  EXPECT_NEAR(value, std::log(0.8) + std::log(0.7), 1e-15);
  EXPECT_NEAR(value, -0.579818, 1e-6);
}

TEST(LogLikelihood, ClampsBoundaryProbabilities) {
  const double value = log_likelihood(Eigen::VectorXd{{1, 0}}, Eigen::VectorXd{{0.0, 1.0}});
  EXPECT_TRUE(std::isfinite(value));
  EXPECT_NEAR(value, 2.0 * std::log(1e-12), 1e-3);
}

TEST(LogLikelihood, MaximumDominatesOracleGrid) {
  const Eigen::VectorXd y{{1, 0, 0, 1, 0}};
  const Eigen::VectorXd z{{0.2, -1.1, 0.9, -0.4, -0.8}};
  const LogisticFit fit = fit_logistic(y, intercept_and(z));
  for (double b0 = -3.0; b0 <= 3.0; b0 += 0.05) {
    for (double b1 = -3.0; b1 <= 3.0; b1 += 0.05) {
      EXPECT_GE(fit.loglik, oracle_loglik(y, z, b0, b1) - 1e-12);
    }
  }
}

TEST(LogLikelihoodSupremum, EqualsMaximumWhenMleExists) {
  const Eigen::VectorXd y{{1, 0, 0, 1, 0}};
  const Eigen::VectorXd z{{0.2, -1.1, 0.9, -0.4, -0.8}};
  const LogisticFit fit = fit_logistic(y, intercept_and(z));
  EXPECT_NEAR(log_likelihood_supremum(y, intercept_and(z)), fit.loglik, 1e-10);
}

TEST(LogLikelihoodSupremum, ApproachesZeroUnderCompleteSeparation) {
  const Eigen::VectorXd y{{1, 0, 1, 0, 0}};
  const Eigen::VectorXd z{{0.2, -1.1, 0.9, -0.4, -0.8}};
  const double sup = log_likelihood_supremum(y, intercept_and(z));
  EXPECT_LE(sup, 0.0);
  EXPECT_GT(sup, -1e-6);
}

TEST(Dataset, ValidateRejectsNonBinaryResponse) {
  Dataset data{Eigen::VectorXd{{0, 2, 1}}, Eigen::MatrixXd::Ones(3, 1), Eigen::VectorXd::Zero(3)};
  EXPECT_THROW(validate(data), ConfigError);
  data.y = Eigen::VectorXd{{0, 1, 1}};
  data.tested = Eigen::VectorXd::Zero(2);
  EXPECT_THROW(validate(data), DimensionError);
}

}  // namespace
}  // namespace eppv
