#include "eppv/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eppv/errors.hpp"

namespace eppv {
namespace {

constexpr double kLogClamp = 1e-12;

bool is_all_ones(const Eigen::VectorXd& column) {
  return (column.array() == 1.0).all();
}

void check_probabilities(const Eigen::VectorXd& pi, double bound) {
  for (Eigen::Index i = 0; i < pi.size(); ++i) {
    if (!(pi[i] >= bound && pi[i] <= 1.0 - bound)) {
      throw SeparationError("fitted probability " + std::to_string(pi[i]) +
                            " at observation " + std::to_string(i + 1) +
                            " is at the boundary; the MLE does not exist");
    }
  }
}

void check_coefficients(const Eigen::VectorXd& beta, double bound) {
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    if (!std::isfinite(beta[j]) || std::abs(beta[j]) > bound) {
      throw SeparationError("coefficient " + std::to_string(j) + " diverged (" +
                            std::to_string(beta[j]) + "); the MLE does not exist");
    }
  }
}

Eigen::MatrixXd information(const Eigen::MatrixXd& design, const Eigen::VectorXd& pi) {
  const Eigen::VectorXd w = pi.array() * (1.0 - pi.array());
  return design.transpose() * w.asDiagonal() * design;
}

}  // namespace

void validate(const Dataset& data) {
  const auto n = data.y.size();
  if (n < 2) throw ConfigError("need at least two observations");
  if (data.null_design.rows() != n) {
    throw DimensionError("null design has " + std::to_string(data.null_design.rows()) +
                         " rows, expected " + std::to_string(n));
  }
  if (data.tested.size() != n) {
    throw DimensionError("tested covariate has length " + std::to_string(data.tested.size()) +
                         ", expected " + std::to_string(n));
  }
  if (data.null_design.cols() > n) throw RankError("more covariates than observations");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.y[i] != 0.0 && data.y[i] != 1.0) {
      throw ConfigError("response " + std::to_string(i + 1) + " is not 0/1");
    }
  }
}

Eigen::MatrixXd full_design(const Dataset& data) {
  Eigen::MatrixXd design(data.null_design.rows(), data.null_design.cols() + 1);
  design << data.null_design, data.tested;
  return design;
}

bool has_intercept_column(const Eigen::MatrixXd& design) {
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (is_all_ones(design.col(j))) return true;
  }
  return false;
}

double inverse_logit(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

Eigen::VectorXd predict_probs(const Eigen::VectorXd& beta, const Eigen::MatrixXd& design,
                              const Eigen::VectorXd& offset) {
  if (design.cols() != beta.size()) {
    throw DimensionError("design has " + std::to_string(design.cols()) + " columns but beta has " +
                         std::to_string(beta.size()) + " entries");
  }
  if (offset.size() != 0 && offset.size() != design.rows()) {
    throw DimensionError("offset length does not match design rows");
  }
  Eigen::VectorXd eta = design * beta;
  if (offset.size() != 0) eta += offset;
  return eta.unaryExpr([](double v) { return inverse_logit(v); });
}

double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& pi) {
  if (y.size() != pi.size()) throw DimensionError("y and pi lengths differ");
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double p = std::clamp(pi[i], kLogClamp, 1.0 - kLogClamp);
    total += y[i] * std::log(p) + (1.0 - y[i]) * std::log1p(-p);
  }
  return total;
}

double log_likelihood(const Eigen::VectorXd& beta, const Eigen::VectorXd& y,
                      const Eigen::MatrixXd& design, const Eigen::VectorXd& offset) {
  if (design.rows() != y.size()) throw DimensionError("design rows and y length differ");
  return log_likelihood(y, predict_probs(beta, design, offset));
}

LogisticFit fit_logistic(const Eigen::VectorXd& y, const Eigen::MatrixXd& design,
                         const FitOptions& options) {
  const auto n = y.size();
  const auto p = design.cols();
  if (design.rows() != n) throw DimensionError("design rows and y length differ");
  if (options.offset.size() != 0 && options.offset.size() != n) {
    throw DimensionError("offset length does not match y");
  }
  if (p == 0) throw RankError("empty design");
  if (p > n) throw RankError("more covariates than observations");
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < p) {
      throw RankError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                      " < " + std::to_string(p) + ")");
    }
  }

  LogisticFit fit;

  if (p == 1 && options.offset.size() == 0 && is_all_ones(design.col(0))) {
    const double ybar = y.mean();
    if (ybar <= 0.0 || ybar >= 1.0) {
      throw SeparationError("all responses are equal; the intercept MLE is infinite");
    }
    fit.beta = Eigen::VectorXd::Constant(1, std::log(ybar / (1.0 - ybar)));
    fit.pi_hat = Eigen::VectorXd::Constant(n, ybar);
    check_coefficients(fit.beta, options.coefficient_bound);
    check_probabilities(fit.pi_hat, options.probability_bound);
    fit.residuals = y - fit.pi_hat;
    fit.loglik = log_likelihood(y, fit.pi_hat);
    fit.loglik_trace = {fit.loglik};
    fit.cov_beta = information(design, fit.pi_hat).inverse();
    fit.score_norm = std::abs(fit.residuals.sum());
    fit.converged = true;
    return fit;
  }

  Eigen::VectorXd beta = options.start.value_or(Eigen::VectorXd::Zero(p));
  if (beta.size() != p) throw DimensionError("start vector has wrong length");

  Eigen::VectorXd pi = predict_probs(beta, design, options.offset);
  double loglik = log_likelihood(y, pi);
  fit.loglik_trace.push_back(loglik);

  Eigen::VectorXd score = design.transpose() * (y - pi);
  int iteration = 0;
  while (score.lpNorm<Eigen::Infinity>() >= options.score_tolerance &&
         iteration < options.max_iterations) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(information(design, pi));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw SeparationError("information matrix is singular; fitted probabilities degenerate");
    }
    const Eigen::VectorXd step = ldlt.solve(score);

    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    Eigen::VectorXd candidate_pi = predict_probs(candidate, design, options.offset);
    double candidate_loglik = log_likelihood(y, candidate_pi);
    for (int h = 0; h < options.max_step_halvings && !(candidate_loglik >= loglik); ++h) {
      scale *= 0.5;
      candidate = beta + scale * step;
      candidate_pi = predict_probs(candidate, design, options.offset);
      candidate_loglik = log_likelihood(y, candidate_pi);
    }

    beta = std::move(candidate);
    pi = std::move(candidate_pi);
    loglik = candidate_loglik;
    ++iteration;
    fit.loglik_trace.push_back(loglik);

    check_coefficients(beta, options.coefficient_bound);
    check_probabilities(pi, options.probability_bound);
    score = design.transpose() * (y - pi);
  }

  // One extra Newton step once the tolerance is met. Convergence is quadratic
  // there, so the score drops to rounding level and identities that rely on
  // residuals being orthogonal to the design hold to ~1e-14.
  if (score.lpNorm<Eigen::Infinity>() < options.score_tolerance) {
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(information(design, pi));
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::VectorXd candidate = beta + ldlt.solve(score);
      const Eigen::VectorXd candidate_pi = predict_probs(candidate, design, options.offset);
      const Eigen::VectorXd candidate_score = design.transpose() * (y - candidate_pi);
      if (candidate_score.lpNorm<Eigen::Infinity>() < score.lpNorm<Eigen::Infinity>()) {
        beta = candidate;
        pi = candidate_pi;
        score = candidate_score;
        loglik = log_likelihood(y, pi);
      }
    }
  }

  fit.beta = beta;
  fit.pi_hat = pi;
  fit.residuals = y - pi;
  fit.loglik = loglik;
  fit.iterations = iteration;
  fit.score_norm = score.lpNorm<Eigen::Infinity>();
  fit.converged = fit.score_norm < options.score_tolerance;
  fit.cov_beta = information(design, pi).inverse();
  return fit;
}

}  // namespace eppv

namespace eppv {

double log_likelihood_supremum(const Eigen::VectorXd& y, const Eigen::MatrixXd& design) {
  if (design.rows() != y.size()) throw DimensionError("design rows and y length differ");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(design.cols());
  Eigen::VectorXd pi = predict_probs(beta, design);
  double loglik = log_likelihood(y, pi);
  for (int iteration = 0; iteration < 200; ++iteration) {
    const Eigen::VectorXd score = design.transpose() * (y - pi);
    if (score.lpNorm<Eigen::Infinity>() < 1e-10) break;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(information(design, pi));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
    const Eigen::VectorXd step = ldlt.solve(score);
    if (!step.allFinite()) break;

    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    Eigen::VectorXd candidate_pi = predict_probs(candidate, design);
    double candidate_loglik = log_likelihood(y, candidate_pi);
    for (int h = 0; h < 20 && !(candidate_loglik >= loglik); ++h) {
      scale *= 0.5;
      candidate = beta + scale * step;
      candidate_pi = predict_probs(candidate, design);
      candidate_loglik = log_likelihood(y, candidate_pi);
    }
    if (!(candidate_loglik >= loglik)) break;
    const double gain = candidate_loglik - loglik;
    beta = std::move(candidate);
    pi = std::move(candidate_pi);
    loglik = candidate_loglik;
    if (gain < 1e-12) break;
  }
  return loglik;
}

}  // namespace eppv
