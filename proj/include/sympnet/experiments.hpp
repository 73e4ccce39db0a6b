#pragma once

#include "sympnet/dataset.hpp"
#include "sympnet/model_io.hpp"
#include "sympnet/training.hpp"
#include "sympnet/verification.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sympnet {

enum class Task { Solve, Predict };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

inline constexpr int kDefaultEpochs = 100000;
inline constexpr int kPaperEpochs = 1000000;

/// One reproducible experiment: data generation, training of one or both
/// model kinds, long rollouts and geometric checks.
struct ExperimentPreset {
  std::string name;
  Task task = Task::Solve;
  std::string system;
  double h = 0.1;

  // Solve task: box sampling.
  Vector box_lower;
  Vector box_upper;
  int n = 10000;

  // Predict task: one observed trajectory of n pairs from `start`.
  Vector start;

  bool train_fnn = true;
  SympNetShape sympnet;
  TrainConfig train;

  std::vector<Vector> rollout_starts;  // solve task only; predict starts at x_n
  int rollout_steps = 1000;
  int verify_points = 100;
  IntegratorConfig integrator;
};

const std::vector<ExperimentPreset>& experiment_presets();
std::vector<std::string> preset_names();
/// Throws std::invalid_argument listing the known presets.
const ExperimentPreset& preset_by_name(const std::string& name);

struct ExperimentOverrides {
  std::optional<int> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> rollout_steps;
  std::optional<int> log_every;
  std::optional<double> lr;
};

ExperimentPreset apply_overrides(ExperimentPreset preset, const ExperimentOverrides& o);

struct ModelRun {
  std::string kind;
  Model model;
  std::vector<LossRecord> history;
  int best_epoch = 0;
  double train_mse = 0.0;
  std::optional<double> test_mse = std::nullopt;
  double max_symplectic_residual = 0.0;
  std::vector<Rollout> rollouts = {};
  std::vector<EnergyDrift> drifts = {};  // one per rollout, over its computed prefix
  double max_energy_drift = 0.0;    // +inf when any rollout ended early
};

struct StageStatus {
  std::string stage;
  bool ok = true;
  std::string error;
};

struct ExperimentOutcome {
  ExperimentPreset preset;
  Dataset train;
  std::optional<Dataset> test;
  std::vector<ModelRun> runs;
  std::vector<StageStatus> stages;
  std::vector<std::string> files;  // relative to the output directory

  bool ok() const;
  const ModelRun* run(const std::string& kind) const;
};

/// Runs generate -> train -> rollout -> verify, writing
///   {out}/dataset/*.csv, {out}/models/*.json, {out}/rollouts/*.csv,
///   {out}/reports/*.{csv,json}, {out}/manifest.json.
/// A failing stage is recorded in the manifest and later stages are skipped.
ExperimentOutcome run_experiment(const ExperimentPreset& preset,
                                 const std::filesystem::path& out_dir, std::ostream* log = nullptr);

/// Columns: step, p1..pd, q1..qd, then the same with a _ref suffix when a
/// reference is given, then H (and H_ref) when a system is given.
void write_rollout_csv(std::ostream& out, const std::vector<Vector>& trajectory,
                       const std::vector<Vector>* reference, const HamiltonianSystem* energy_of);

/// Seed used for the held-out test set of a solve experiment.
std::uint64_t test_seed(std::uint64_t seed);

}  // namespace sympnet
