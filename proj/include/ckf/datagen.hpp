#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ckf/model.hpp"

namespace ckf {

struct GenConfig {
  Dims dims;
  double sigma_u2 = 1.0;
  double sigma_v2 = 1.0;
  double sigma_q2 = 0.05;
  double sigma_r2 = 0.1;
  double identity_weight = 0.9;    // w in [0,1], mix between I and a random matrix
  double sampling_factor = 0.005;  // fraction of the N*M*T tensor observed
  std::uint64_t seed = 0;
};

/// Everything the generator knew: true parameters, full state trajectories,
/// and the dense noiseless preference tensor (row-major over (user, item, time),
/// time 1..T).
struct GroundTruth {
  ModelParams params;
  std::vector<Eigen::MatrixXd> states;  // per user: (T+1) x K, row t = x_{i,t}
  std::vector<double> preferences;      // N*M*T

  double preference(int user, int item, int time) const;
};

/// Transition matrix w*I + (1-w)*G with G iid N(0, 1/K), scaled so that the
/// expected state power stays at K*sigma_u2 under the process noise:
/// sigma_u2 * |A|_F^2 + K*sigma_q2 = K*sigma_u2. Throws when sigma_q2 >= sigma_u2
/// (no scaling can absorb that much process noise).
Eigen::MatrixXd build_transition(int num_factors, double identity_weight, double sigma_u2,
                                 double sigma_q2, std::uint64_t seed);
Eigen::MatrixXd build_transition(int num_factors, double identity_weight, double sigma_u2,
                                 double sigma_q2, std::mt19937_64& rng);

/// Samples a complete instance: V and initial states from their priors,
/// trajectories through the transition model, then round(rho*N*M*T) distinct
/// observation triplets drawn uniformly without replacement and measured with
/// noise. Bitwise reproducible from config.seed.
std::pair<GroundTruth, ObservationSet> generate(const GenConfig& config);

}  // namespace ckf
