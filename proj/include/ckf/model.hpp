#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ckf {

/// Malformed or inconsistent input data (files, indices, dimensions).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerical breakdown (singular innovation covariance, diverged likelihood).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem sizes. States live at t = 0..num_steps, observations at t = 1..num_steps.
/// num_factors is a free modeling choice; it is not required to be <= min(N, M).
struct Dims {
  int num_users = 0;    // N
  int num_items = 0;    // M
  int num_steps = 0;    // T
  int num_factors = 0;  // K
};

/// One rating: user/item are zero-based, time is one-based.
struct Observation {
  int user = 0;
  int item = 0;
  int time = 0;
  double rating = 0.0;
};

enum class CovMode { isotropic, full };

/// Learnable parameter set. In isotropic mode (the default) the initial-state
/// covariance is sigma_u2 * I and the process covariance sigma_q2 * I; full
/// mode replaces those two with Sigma0 and Q. Measurement noise is always
/// isotropic sigma_r2 * I.
struct ModelParams {
  Dims dims;
  Eigen::MatrixXd A;  // K x K transition
  Eigen::MatrixXd V;  // M x K item factors (measurement dictionary)
  double sigma_u2 = 1.0;
  double sigma_q2 = 0.0;
  double sigma_r2 = 1.0;
  CovMode cov_mode = CovMode::isotropic;
  Eigen::MatrixXd Sigma0;  // K x K, full mode only
  Eigen::MatrixXd Q;       // K x K, full mode only

  Eigen::MatrixXd prior_cov() const;
  Eigen::MatrixXd process_cov() const;
};

/// Sparse rating triplets grouped into per-(user, time) measurement vectors.
/// Within each group item indices are ascending; this is the canonical row
/// order for the per-step measurement matrix, so the grouping is stable under
/// permutation of the input list.
class ObservationSet {
 public:
  struct Group {
    int user = 0;
    int time = 0;
    std::vector<int> items;
    Eigen::VectorXd ratings;
  };

  ObservationSet() = default;
  ObservationSet(Dims dims, std::vector<Observation> observations);

  const Dims& dims() const { return dims_; }
  const std::vector<Observation>& observations() const { return observations_; }
  std::int64_t size() const { return static_cast<std::int64_t>(observations_.size()); }

  /// Group observed by `user` at `time`, or nullptr when nothing was rated there.
  const Group* group(int user, int time) const;
  const std::vector<Group>& groups() const { return groups_; }

 private:
  Dims dims_;
  std::vector<Observation> observations_;
  std::vector<Group> groups_;
  std::vector<int> lookup_;  // (user, time) -> index into groups_, or -1
};

/// Every violated invariant, one message per violation.
struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
  std::string to_string() const;
};

ValidationReport validate_params(const ModelParams& params);
ValidationReport validate_observations(const ObservationSet& obs);
ValidationReport validate(const ModelParams& params, const ObservationSet& obs);

/// Throws DataError with the full report when validation fails.
void require_valid(const ModelParams& params, const ObservationSet& obs);

/// Model document (JSON text, format_version 1). Numbers are printed with 17
/// significant digits so a round trip reproduces every field exactly.
std::string serialize_model(const ModelParams& params,
                            std::optional<std::uint64_t> seed = std::nullopt);

/// Parses a model document. Throws DataError on malformed text or on a
/// format_version this build does not understand; never returns a partial model.
ModelParams deserialize_model(const std::string& text);

}  // namespace ckf
