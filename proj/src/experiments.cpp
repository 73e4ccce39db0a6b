#include "sympnet/experiments.hpp"

#include "sympnet/format.hpp"
#include "sympnet/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

namespace sympnet {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string to_string(Task task) { return task == Task::Solve ? "solve" : "predict"; }

Task task_from_string(const std::string& name) {
  if (name == "solve") return Task::Solve;
  if (name == "predict") return Task::Predict;
  throw std::invalid_argument("unknown task '" + name + "' (expected solve or predict)");
}

std::uint64_t test_seed(std::uint64_t seed) { return SplitMix64(seed ^ 0x7E57DA7AULL).next(); }

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

ExperimentPreset base_preset(std::string name, Task task, std::string system) {
  ExperimentPreset p;
  p.name = std::move(name);
  p.task = task;
  p.system = std::move(system);
  p.h = 0.1;
  p.sympnet = SympNetShape{1, 8, 5, Activation::Sigmoid, false};
  p.train.epochs = kDefaultEpochs;
  p.train.lr = task == Task::Solve ? 0.1 : 0.01;
  p.train.seed = 1;
  p.train.log_every = 100;
  p.rollout_steps = 1000;
  return p;
}

std::vector<ExperimentPreset> make_presets() {
  using std::numbers::pi;
  std::vector<ExperimentPreset> out;

  auto solve_pd = base_preset("solve-pendulum", Task::Solve, "pendulum");
  solve_pd.box_lower = vec({-std::sqrt(2.0), -pi / 2});
  solve_pd.box_upper = vec({std::sqrt(2.0), pi / 2});
  solve_pd.n = 10000;
  solve_pd.rollout_starts = {vec({0, 0.5}), vec({0, 1.0}), vec({0, 1.5})};
  out.push_back(solve_pd);

  auto solve_lv = base_preset("solve-lv", Task::Solve, "lotka-volterra");
  solve_lv.box_lower = vec({-2.0, -0.5});
  solve_lv.box_upper = vec({1.5, 2.0});
  solve_lv.n = 10000;
  solve_lv.rollout_starts = {vec({0, 1.0}), vec({0, 1.25}), vec({0, 1.5})};
  out.push_back(solve_lv);

  auto predict_pd = base_preset("predict-pendulum", Task::Predict, "pendulum");
  predict_pd.start = vec({0, 1.0});
  predict_pd.n = 40;
  out.push_back(predict_pd);

  auto predict_lv = base_preset("predict-lv", Task::Predict, "lotka-volterra");
  predict_lv.start = vec({0, 1.0});
  predict_lv.n = 25;
  out.push_back(predict_lv);

  auto predict_kepler = base_preset("predict-kepler", Task::Predict, "kepler");
  predict_kepler.start = vec({1, 0, 0, 1});
  predict_kepler.n = 40;
  predict_kepler.sympnet.d = 2;
  predict_kepler.train_fnn = false;
  out.push_back(predict_kepler);

  return out;
}

template <typename Fn>
bool run_stage(ExperimentOutcome& outcome, const std::string& name, std::ostream* log, Fn&& fn) {
  StageStatus status{name, true, ""};
  try {
    fn();
  } catch (const std::exception& e) {
    status.ok = false;
    status.error = e.what();
    if (log) *log << "[" << name << "] failed: " << e.what() << '\n';
  }
  outcome.stages.push_back(status);
  return status.ok;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

json optional_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

double mse(const Model& model, const Dataset& data) {
  Matrix out;
  if (const auto* net = std::get_if<SympNet>(&model)) {
    out = forward_batch(*net, data.inputs);
  } else {
    out = fnn_forward_batch(std::get<Fnn>(model), data.inputs);
  }
  return (out - data.targets).squaredNorm() / static_cast<double>(data.size());
}

std::vector<Vector> columns(const Matrix& m, Eigen::Index limit) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < std::min(limit, m.cols()); ++i) out.push_back(m.col(i));
  return out;
}

}  // namespace

const std::vector<ExperimentPreset>& experiment_presets() {
  static const std::vector<ExperimentPreset> presets = make_presets();
  return presets;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : experiment_presets()) names.push_back(p.name);
  return names;
}

const ExperimentPreset& preset_by_name(const std::string& name) {
  for (const auto& p : experiment_presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + name + "' (known: " + known + ")");
}

ExperimentPreset apply_overrides(ExperimentPreset preset, const ExperimentOverrides& o) {
  if (o.epochs) preset.train.epochs = *o.epochs;
  if (o.seed) preset.train.seed = *o.seed;
  if (o.n) preset.n = *o.n;
  if (o.rollout_steps) preset.rollout_steps = *o.rollout_steps;
  if (o.log_every) preset.train.log_every = *o.log_every;
  if (o.lr) preset.train.lr = *o.lr;
  preset.train.validate();
  if (preset.n < 1) throw std::invalid_argument("preset: n must be >= 1");
  if (preset.rollout_steps < 0) throw std::invalid_argument("preset: rollout steps must be >= 0");
  return preset;
}

bool ExperimentOutcome::ok() const {
  for (const auto& s : stages) {
    if (!s.ok) return false;
  }
  return true;
}

const ModelRun* ExperimentOutcome::run(const std::string& kind) const {
  for (const auto& r : runs) {
    if (r.kind == kind) return &r;
  }
  return nullptr;
}

void write_rollout_csv(std::ostream& out, const std::vector<Vector>& trajectory,
                       const std::vector<Vector>* reference, const HamiltonianSystem* energy_of) {
  if (trajectory.empty()) throw std::invalid_argument("rollout csv: empty trajectory");
  const int d = degrees_of_freedom(trajectory.front().size());
  auto names = [&](const std::string& suffix) {
    std::string s;
    for (int i = 0; i < d; ++i) s += ",p" + (d > 1 ? std::to_string(i + 1) : "") + suffix;
    for (int i = 0; i < d; ++i) s += ",q" + (d > 1 ? std::to_string(i + 1) : "") + suffix;
    return s;
  };
  out << "step" << names("");
  if (reference) out << names("_ref");
  if (energy_of) out << ",H" << (reference ? ",H_ref" : "");
  out << '\n';
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    out << k;
    for (Eigen::Index c = 0; c < 2 * d; ++c) out << ',' << format_double(trajectory[k][c]);
    const bool has_ref = reference && k < reference->size();
    if (reference) {
      for (Eigen::Index c = 0; c < 2 * d; ++c) {
        out << ',';
        if (has_ref) out << format_double((*reference)[k][c]);
      }
    }
    if (energy_of) {
      out << ',' << format_double(energy_of->energy(trajectory[k]));
      if (reference) {
        out << ',';
        if (has_ref) out << format_double(energy_of->energy((*reference)[k]));
      }
    }
    out << '\n';
  }
}

ExperimentOutcome run_experiment(const ExperimentPreset& preset, const fs::path& out_dir,
                                 std::ostream* log) {
  ExperimentOutcome outcome;
  outcome.preset = preset;
  const HamiltonianSystem sys = system_by_name(preset.system);

  for (const char* sub : {"dataset", "models", "rollouts", "reports"}) {
    fs::create_directories(out_dir / sub);
  }
  auto record_file = [&](const std::string& rel) { outcome.files.push_back(rel); };

  bool ok = run_stage(outcome, "generate", log, [&] {
    if (preset.task == Task::Solve) {
      const Box box(preset.box_lower, preset.box_upper);
      outcome.train = sample_pairs(sys, box, preset.n, preset.h, preset.train.seed, preset.integrator);
      outcome.test = sample_pairs(sys, box, preset.n, preset.h, test_seed(preset.train.seed),
                                  preset.integrator);
      save_csv((out_dir / "dataset/train.csv").string(), outcome.train);
      save_csv((out_dir / "dataset/test.csv").string(), *outcome.test);
      record_file("dataset/train.csv");
      record_file("dataset/test.csv");
    } else {
      outcome.train = sample_trajectory(sys, preset.start, preset.n, preset.h, preset.integrator);
      save_csv((out_dir / "dataset/train.csv").string(), outcome.train);
      record_file("dataset/train.csv");
    }
    if (log) *log << "[generate] " << outcome.train.size() << " training pairs\n";
  });

  const Matrix& probe_points = outcome.test ? outcome.test->inputs : outcome.train.inputs;

  if (ok) {
    ok = run_stage(outcome, "train", log, [&] {
      std::vector<std::string> kinds{"sympnet"};
      if (preset.train_fnn) kinds.push_back("fnn");
      for (const auto& kind : kinds) {
        auto make_run = [&](auto result) {
          return ModelRun{.kind = kind,
                          .model = Model(std::move(result.model)),
                          .history = std::move(result.history),
                          .best_epoch = result.best_epoch};
        };
        ModelRun run = [&] {
          if (kind == "sympnet") {
            SympNetShape shape = preset.sympnet;
            shape.d = sys.dof();
            const auto init = SympNet::random(shape, preset.h, preset.train.seed);
            return make_run(train(init, outcome.train, preset.train));
          }
          const auto init = Fnn::random(Fnn::default_sizes(sys.dof()), preset.train.seed);
          StructureProbe<Fnn> probe = [&](const Fnn& net) {
            return fnn_structure_loss(net, probe_points);
          };
          return make_run(train(init, outcome.train, preset.train, probe));
        }();
        run.train_mse = mse(run.model, outcome.train);
        if (outcome.test) run.test_mse = mse(run.model, *outcome.test);

        save_model((out_dir / ("models/" + kind + ".json")).string(), run.model);
        record_file("models/" + kind + ".json");
        auto loss_csv = open_out(out_dir / ("reports/" + kind + "_loss.csv"));
        write_loss_csv(loss_csv, run.history);
        record_file("reports/" + kind + "_loss.csv");
        if (log) {
          *log << "[train] " << kind << ": " << model_parameter_count(run.model)
               << " parameters, train MSE " << run.train_mse;
          if (run.test_mse) *log << ", test MSE " << *run.test_mse;
          *log << '\n';
        }
        outcome.runs.push_back(std::move(run));
      }
    });
  }

  if (ok) {
    ok = run_stage(outcome, "rollout", log, [&] {
      std::vector<Vector> starts = preset.rollout_starts;
      if (preset.task == Task::Predict) starts = {outcome.train.final_point()};
      std::vector<Rollout> references;
      for (const auto& s : starts) {
        references.push_back(rollout(
            [&](const Vector& y) { return step(sys, y, preset.h, preset.integrator); }, s,
            preset.rollout_steps));
      }
      for (auto& run : outcome.runs) {
        run.max_energy_drift = 0.0;
        for (std::size_t i = 0; i < starts.size(); ++i) {
          Rollout r = rollout([&](const Vector& y) { return apply_model(run.model, y); }, starts[i],
                              preset.rollout_steps);
          EnergyDrift drift;
          bool energy_ok = true;
          try {
            drift = energy_drift(sys, r.states);
          } catch (const SingularityError& e) {
            energy_ok = false;
            if (!r.error) r.error = e.what();
          }
          if (r.error) drift.max_abs_drift = std::numeric_limits<double>::infinity();
          run.max_energy_drift = std::max(run.max_energy_drift, drift.max_abs_drift);

          const std::string rel = "rollouts/" + run.kind + "_" + std::to_string(i) + ".csv";
          auto csv = open_out(out_dir / rel);
          write_rollout_csv(csv, r.states, &references[i].states, energy_ok ? &sys : nullptr);
          record_file(rel);
          run.rollouts.push_back(std::move(r));
          run.drifts.push_back(std::move(drift));
        }
        if (log) *log << "[rollout] " << run.kind << ": max |H - H0| " << run.max_energy_drift << '\n';
      }
    });
  }

  if (ok) {
    run_stage(outcome, "verify", log, [&] {
      const auto points = columns(probe_points, preset.verify_points);
      for (auto& run : outcome.runs) {
        const SymplecticReport report =
            symplectic_residual([&](const Vector& x) { return model_jacobian(run.model, x); }, points);
        run.max_symplectic_residual = report.max_residual;
        const std::string base = "reports/" + run.kind + "_symplectic";
        auto csv = open_out(out_dir / (base + ".csv"));
        report.write_csv(csv);
        auto js = open_out(out_dir / (base + ".json"));
        report.write_json(js);
        record_file(base + ".csv");
        record_file(base + ".json");
        if (log) *log << "[verify] " << run.kind << ": max symplectic residual " << report.max_residual << '\n';
      }
    });
  }

  json manifest;
  manifest["preset"] = preset.name;
  manifest["task"] = to_string(preset.task);
  manifest["system"] = preset.system;
  manifest["h"] = preset.h;
  manifest["n"] = preset.n;
  manifest["seed"] = preset.train.seed;
  manifest["test_seed"] = outcome.test ? json(test_seed(preset.train.seed)) : json(nullptr);
  manifest["epochs"] = preset.train.epochs;
  manifest["lr"] = preset.train.lr;
  manifest["rollout_steps"] = preset.rollout_steps;
  json stages = json::array();
  for (const auto& s : outcome.stages) {
    json entry{{"stage", s.stage}, {"ok", s.ok}};
    if (!s.ok) entry["error"] = s.error;
    stages.push_back(std::move(entry));
  }
  manifest["stages"] = std::move(stages);
  json metrics = json::object();
  for (const auto& run : outcome.runs) {
    json m;
    m["parameters"] = model_parameter_count(run.model);
    m["best_epoch"] = run.best_epoch;
    m["train_mse"] = run.train_mse;
    m["test_mse"] = optional_number(run.test_mse);
    m["max_energy_drift"] = optional_number(run.max_energy_drift);
    m["max_symplectic_residual"] = run.max_symplectic_residual;
    json errors = json::array();
    for (const auto& r : run.rollouts) {
      if (r.error) errors.push_back(*r.error);
    }
    if (!errors.empty()) m["rollout_errors"] = std::move(errors);
    metrics[run.kind] = std::move(m);
  }
  manifest["metrics"] = std::move(metrics);
  manifest["files"] = outcome.files;
  auto out = open_out(out_dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace sympnet
