#pragma once

#include <Eigen/Dense>

#include <vector>

#include "ckf/model.hpp"

namespace ckf {

/// Measurement at one (user, time): the observed item indices, their ratings,
/// and the measurement matrix H whose row r is row items[r] of V.
struct MeasurementSlice {
  std::vector<int> items;
  Eigen::VectorXd y;
  Eigen::MatrixXd H;

  bool empty() const { return items.empty(); }
  Eigen::Index count() const { return static_cast<Eigen::Index>(items.size()); }
};

/// Builds the slice for (user, time); empty when nothing was rated there.
MeasurementSlice make_slice(const ObservationSet& obs, const Eigen::MatrixXd& V,
                            int user, int time);

/// Forward-pass record for one user. Predicted moments exist for t = 1..T
/// (stored at [t-1]), filtered moments for t = 0..T. The t = 0 entries hold
/// the prior: zero mean and the prior covariance.
struct FilterTrace {
  std::vector<Eigen::VectorXd> x_pred;
  std::vector<Eigen::MatrixXd> p_pred;
  std::vector<Eigen::VectorXd> x_filt;
  std::vector<Eigen::MatrixXd> p_filt;
  Eigen::MatrixXd gain_last;  // K_{T}: K x |items at T| (0 columns when unobserved)
  double loglik = 0.0;
};

/// RTS output for one user: smoothed moments for t = 0..T and lag-one
/// covariances P_{t,t-1|T} for t = 1..T (stored at [t-1], not symmetric).
struct SmoothedPosterior {
  std::vector<Eigen::VectorXd> x_smooth;
  std::vector<Eigen::MatrixXd> p_smooth;
  std::vector<Eigen::MatrixXd> p_lag;

  const Eigen::MatrixXd& lag(int t) const { return p_lag[static_cast<size_t>(t) - 1]; }
};

struct UpdateResult {
  Eigen::VectorXd x_filt;
  Eigen::MatrixXd p_filt;
  Eigen::MatrixXd gain;  // K x |items|
  double innovation_loglik = 0.0;
};

/// x_pred = A x_filt, P_pred = A P_filt A' + Q (symmetrized).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> predict_step(const Eigen::VectorXd& x_filt,
                                                         const Eigen::MatrixXd& p_filt,
                                                         const Eigen::MatrixXd& A,
                                                         const Eigen::MatrixXd& Q);

/// Measurement update with gain K = P H'(H P H' + sigma_r2 I)^-1. An empty
/// slice passes the prediction through with zero likelihood contribution.
/// innovation_loglik is log N(y; H x_pred, H P H' + sigma_r2 I).
UpdateResult update_step(const Eigen::VectorXd& x_pred, const Eigen::MatrixXd& p_pred,
                         const MeasurementSlice& slice, double sigma_r2);

/// Runs the forward filter for one user from the prior through t = T.
FilterTrace filter_user(int user, const ModelParams& params, const ObservationSet& obs);

/// Backward RTS pass. Smoothed covariances are symmetrized; the lag-one
/// sequence is seeded at t = T with (I - K_T H_T) A P_{T-1|T-1} and then
/// follows the recursion P_{t,t-1|T} = P_{t|t} J_{t-1}' + J_t (P_{t+1,t|T} - A P_{t|t}) J_{t-1}'.
SmoothedPosterior smooth_user(int user, const FilterTrace& trace, const ModelParams& params,
                              const ObservationSet& obs);

struct SmoothResult {
  std::vector<SmoothedPosterior> users;
  double total_loglik = 0.0;
};

/// Filter + smooth every user independently. Users may be processed on
/// `threads` workers; per-user outputs and the likelihood reduction (fixed
/// user-index order) do not depend on the worker count.
SmoothResult smooth_all(const ModelParams& params, const ObservationSet& obs, int threads = 1);

}  // namespace ckf
