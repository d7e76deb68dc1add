#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ckf/kalman.hpp"
#include "ckf/model.hpp"

namespace ckf {

/// Moment accumulators from the smoothed posteriors. With S(t) denoting
/// P_{i,t|T} + x_{i,t|T} x_{i,t|T}', the fields are
///   gamma1 = sum_i S(0)
///   a1     = sum_{i,t=1..T} S(t-1)
///   a2     = sum_{i,t=1..T} P_{i,t,t-1|T} + x_{i,t|T} x_{i,t-1|T}'
///   s_curr = sum_{i,t=1..T} S(t)
///   v1[j]  = sum over (i,t) that rated item j of S(t)   (zero matrix when never rated)
///   v2     = row j accumulates y_{ijt} x_{i,t|T}'  (the filled-observation cross term)
///   r_yy   = sum of squared ratings
///   r_yx   = the measurement-variance cross term, accumulated like v2
struct SufficientStats {
  Eigen::MatrixXd gamma1;
  Eigen::MatrixXd a1;
  Eigen::MatrixXd a2;
  Eigen::MatrixXd s_curr;
  std::vector<Eigen::MatrixXd> v1;
  Eigen::MatrixXd v2;
  double r_yy = 0.0;
  Eigen::MatrixXd r_yx;
  std::int64_t obs_count = 0;
};

enum class UpdateParam { sigma_u2, sigma_q2, sigma_r2, A, V };

std::set<UpdateParam> all_update_params();

/// Optional per-iteration diagnostic: (rmse_state, rmse_tensor) against a
/// ground truth the caller has access to.
using EmDiagnostics = std::function<std::pair<double, double>(
    const ModelParams&, const std::vector<SmoothedPosterior>&)>;

struct EmConfig {
  int max_iters = 50;
  double rel_tol = 1e-5;
  std::set<UpdateParam> update_set = all_update_params();
  std::uint64_t seed = 0;
  CovMode cov_mode = CovMode::isotropic;
  /// When set, EM starts from these parameters instead of the data-driven policy.
  std::optional<ModelParams> init;
  int threads = 1;
  EmDiagnostics diagnostics;
};

struct EmTraceRow {
  int iter = 0;
  double loglik = 0.0;
  double sigma_u2 = 0.0;
  double sigma_q2 = 0.0;
  double sigma_r2 = 0.0;
  double norm_a = 0.0;
  double norm_v = 0.0;
  // filled only when diagnostics were supplied
  std::optional<double> rmse_state;
  std::optional<double> rmse_tensor;
};

struct EmTrace {
  std::vector<EmTraceRow> rows;
  bool has_diagnostics() const;
  /// `iter,loglik,sigma_u2,sigma_q2,sigma_r2,normA,normV[,rmse_state,rmse_tensor]`
  std::string to_csv() const;
};

/// Accumulates every sufficient statistic from already-smoothed posteriors.
SufficientStats accumulate_stats(const ObservationSet& obs,
                                 const std::vector<SmoothedPosterior>& posteriors);

/// smooth_all followed by accumulate_stats; the returned likelihood is the
/// marginal innovation log-likelihood of the current parameters.
std::pair<SufficientStats, double> e_step(const ModelParams& params, const ObservationSet& obs,
                                          int threads = 1);

/// Closed-form variance updates. sigma_r2 is absent when obs_count == 0 (the
/// update is skipped; the caller keeps its current value). All returned values
/// are floored at 1e-12.
struct VarianceEstimates {
  double sigma_u2 = 0.0;
  double sigma_q2 = 0.0;
  std::optional<double> sigma_r2;
};

VarianceEstimates m_step_variances(const SufficientStats& stats, const Eigen::MatrixXd& A,
                                   const Eigen::MatrixXd& V, const Dims& dims);

/// Full-covariance updates: Sigma0 = gamma1 / N and Q assembled from the
/// statistics at the supplied A, both symmetrized with eigenvalues floored at 1e-12.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> m_step_full_cov(const SufficientStats& stats,
                                                            const Eigen::MatrixXd& A,
                                                            const Dims& dims);

/// Transition update solving A_hat a1 = a2; a rank-deficient a1 gets a ridge of
/// 1e-10 * trace(a1) / K and a warning on stderr.
Eigen::MatrixXd m_step_A(const SufficientStats& stats);

/// Row-wise item-factor update. Items never observed keep their prev_V row;
/// near-singular v1[j] gets a ridge of 1e-10 * trace / K.
Eigen::MatrixXd m_step_V(const SufficientStats& stats, const Eigen::MatrixXd& prev_V);

/// The three expected log-likelihood terms (initial state, transitions,
/// measurements), Gaussian normalizing constants included. A diagnostic for
/// stationarity checks, not the convergence monitor.
struct ExpectedLoglik {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double total() const { return l1 + l2 + l3; }
};

ExpectedLoglik expected_loglik(const ModelParams& params, const SufficientStats& stats);

/// Data-driven start: sigma_u2 = sigma_r2 = sample variance of the ratings,
/// sigma_q2 a tenth of that, A = I, V entries iid N(0, 1/K) from config.seed.
ModelParams init_params(const ObservationSet& obs, const Dims& dims, const EmConfig& config);

struct EmResult {
  ModelParams params;
  std::vector<SmoothedPosterior> posteriors;
  EmTrace trace;
  bool converged = false;
  double final_loglik = 0.0;
};

/// EM loop: each iteration reuses one smoothing pass as the E-step, then
/// applies the closed-form M-step (V, then A, then variances, all from the
/// same statistics). Stops when the relative improvement of the marginal
/// log-likelihood drops below rel_tol or after max_iters iterations.
/// Throws NumericalError when the likelihood turns non-finite.
EmResult run_em(const ObservationSet& obs, const Dims& dims, const EmConfig& config);

}  // namespace ckf
