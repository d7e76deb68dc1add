#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "ckf/datagen.hpp"
#include "ckf/kalman.hpp"
#include "ckf/model.hpp"

namespace ckf {

struct SigmaErrors {
  double sigma_u2 = 0.0;
  double sigma_q2 = 0.0;
  double sigma_r2 = 0.0;
};

/// RMSE metrics against ground truth. rmse_state and rmse_v are computed after
/// rotating the estimate by aligned_rotation (orthogonal Procrustes on V);
/// rmse_tensor needs no alignment since predictions are rotation invariant.
struct Metrics {
  double rmse_tensor = 0.0;
  double rmse_state = 0.0;
  double rmse_v = 0.0;
  std::optional<SigmaErrors> rmse_sigma;  // per-parameter relative errors
  Eigen::MatrixXd aligned_rotation;
};

/// Predicted rating <x_{user,time|T}, V_item>. time must be in [1, T].
double predict(const ModelParams& params, const std::vector<SmoothedPosterior>& posteriors,
               int user, int item, int time);

/// Orthogonal R minimizing |est_v * R - true_v|_F (Procrustes via SVD of est_v' true_v).
Eigen::MatrixXd align(const Eigen::MatrixXd& est_v, const Eigen::MatrixXd& true_v);

/// Scores a fitted model + smoothed posteriors against the generator's truth.
Metrics score(const ModelParams& est, const std::vector<SmoothedPosterior>& posteriors,
              const GroundTruth& truth, int threads = 1);

struct BaselineConfig {
  double lambda1 = 0.05;
  double lambda2 = 0.05;
  double learning_rate = 0.02;
  int epochs = 100;
  std::uint64_t seed = 0;
};

/// Static factorization fit by SGD on the regularized squared-error program,
/// time pooled away. objective holds the full regularized objective after each
/// epoch (entry 0 is the value at initialization).
struct BaselineModel {
  Eigen::MatrixXd U;  // N x K
  Eigen::MatrixXd V;  // M x K
  std::vector<double> objective;
};

/// Throws NumericalError with a hint to lower the learning rate on divergence.
BaselineModel fit_baseline(const ObservationSet& obs, const Dims& dims,
                           const BaselineConfig& config);

/// The regularized objective of the static program at (U, V).
double baseline_objective(const ObservationSet& obs, const Eigen::MatrixXd& U,
                          const Eigen::MatrixXd& V, const BaselineConfig& config);

/// Scores the static baseline (prediction <u_i, v_j> at every t) against truth.
/// No sigma errors: the baseline has no noise parameters.
Metrics score_baseline(const BaselineModel& baseline, const GroundTruth& truth);

}  // namespace ckf
