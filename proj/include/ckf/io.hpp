#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckf/datagen.hpp"
#include "ckf/eval.hpp"
#include "ckf/model.hpp"

namespace ckf {

/// Shortest text that still round-trips the double exactly (%.17g).
std::string format_double(double value);

// Observations file: header `user,item,time,rating`, user/item zero-based,
// time one-based.
void write_observations_csv(const std::string& path, const ObservationSet& obs);
std::vector<Observation> read_observation_rows(const std::string& path);

// States file: header `user,time,f0,...,f{K-1}`, one row per (user, time) with
// time 0..T. Used for both true trajectories and smoothed means.
void write_states_csv(const std::string& path, const std::vector<Eigen::MatrixXd>& states);
std::vector<Eigen::MatrixXd> read_states_csv(const std::string& path);

/// Extracts the smoothed-mean matrices ((T+1) x K per user) from posteriors.
std::vector<Eigen::MatrixXd> smoothed_means(const std::vector<SmoothedPosterior>& posteriors);

/// Wraps bare mean trajectories as point-mass posteriors (zero covariances),
/// the form in which states files feed predict/score.
std::vector<SmoothedPosterior> posteriors_from_means(const std::vector<Eigen::MatrixXd>& means);

// Dense preference tensor: 16-byte header (magic "CKFT", uint32 N, M, T,
// little-endian) followed by N*M*T doubles, row-major over (user, item, time).
void write_preference_tensor(const std::string& path, const Dims& dims,
                             const std::vector<double>& preferences);
std::pair<Dims, std::vector<double>> read_preference_tensor(const std::string& path);

// Model files (JSON documents from serialize_model).
void write_model_file(const std::string& path, const ModelParams& params,
                      std::optional<std::uint64_t> seed = std::nullopt);
ModelParams read_model_file(const std::string& path);

// Metrics document (JSON).
std::string metrics_to_json(const Metrics& metrics);
void write_metrics_file(const std::string& path, const Metrics& metrics);

// Baseline factor document (JSON: dims, U, V row-major, config echoes, seed).
void write_baseline_file(const std::string& path, const BaselineModel& model, const Dims& dims,
                         const BaselineConfig& config);
std::pair<BaselineModel, Dims> read_baseline_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace ckf
