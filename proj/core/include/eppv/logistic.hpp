#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

namespace eppv {

/// Binary responses, the null-model design and the covariate under test.
struct Dataset {
  Eigen::VectorXd y;            ///< n responses, each 0 or 1
  Eigen::MatrixXd null_design;  ///< n x p covariates of the null model
  Eigen::VectorXd tested;       ///< n values of the tested covariate
};

/// Throws DimensionError / ConfigError when the dataset violates its invariants
/// (binary y, n >= 2, conforming sizes, p <= n). Rank is checked by the fitter.
void validate(const Dataset& data);

/// Null design with the tested covariate appended as the last column.
Eigen::MatrixXd full_design(const Dataset& data);

/// True when some column of `design` is identically 1.
bool has_intercept_column(const Eigen::MatrixXd& design);

struct FitOptions {
  double score_tolerance = 1e-8;
  int max_iterations = 25;
  int max_step_halvings = 20;
  double coefficient_bound = 15.0;
  double probability_bound = 1e-10;
  std::optional<Eigen::VectorXd> start;
  /// Fixed additive term in the linear predictor; empty means none.
  Eigen::VectorXd offset;
};

struct LogisticFit {
  Eigen::VectorXd beta;
  Eigen::VectorXd pi_hat;
  Eigen::VectorXd residuals;
  double loglik = 0.0;
  Eigen::MatrixXd cov_beta;
  int iterations = 0;
  bool converged = false;
  double score_norm = 0.0;
  /// Log-likelihood after each accepted Newton step, starting value first.
  std::vector<double> loglik_trace;

  Eigen::VectorXd standard_errors() const { return cov_beta.diagonal().cwiseSqrt(); }
};

/// Maximum likelihood logistic regression by Newton-Raphson with step halving.
///
/// An intercept-only design without offset is solved in closed form
/// (pi_hat = mean(y) exactly). Otherwise iterates until the max-norm of the
/// score falls below `score_tolerance` or `max_iterations` is reached, in
/// which case `converged` is false.
///
/// Throws RankError for a rank-deficient design and SeparationError when a
/// coefficient exceeds `coefficient_bound` in magnitude or a fitted
/// probability leaves [probability_bound, 1 - probability_bound].
LogisticFit fit_logistic(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
                         const FitOptions& options = {});

/// Supremum over beta of the log-likelihood. Unlike fit_logistic this is
/// defined under separation, where it is approached as |beta| grows without
/// bound. Newton steps with halving run until the score, the log-likelihood
/// gain or the information matrix vanishes (at most 200 steps).
double log_likelihood_supremum(const Eigen::VectorXd& y, const Eigen::MatrixXd& design);

/// Inverse logit of design * beta (+ offset when non-empty).
Eigen::VectorXd predict_probs(const Eigen::VectorXd& beta, const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& offset = {});

double inverse_logit(double eta);

/// Bernoulli log-likelihood with probabilities clamped to [1e-12, 1 - 1e-12].
double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& pi);

double log_likelihood(const Eigen::VectorXd& beta, const Eigen::VectorXd& y,
                      const Eigen::MatrixXd& design, const Eigen::VectorXd& offset = {});

}  // namespace eppv
