// Command-line front end: generate, train, rollout, verify, exp.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error, 3 verification
// threshold violated.

#include "sympnet/experiments.hpp"
#include "sympnet/format.hpp"
#include "sympnet/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace sympnet;
namespace fs = std::filesystem;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitThreshold = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Vector parse_point(const std::string& text, const std::string& flag) {
  try {
    return parse_vector(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::optional<Box> default_box(const std::string& system) {
  for (const auto& p : experiment_presets()) {
    if (p.system == system && p.task == Task::Solve) return Box(p.box_lower, p.box_upper);
  }
  if (system == "harmonic") return Box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  return std::nullopt;
}

Vector default_start(const std::string& system) {
  for (const auto& p : experiment_presets()) {
    if (p.system == system && p.task == Task::Predict) return p.start;
  }
  return Vector{{0.0, 1.0}};
}

struct IntegratorFlags {
  std::string scheme = "gauss4";
  int substeps = 10;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;

  void attach(CLI::App* app) {
    app->add_option("--scheme", scheme, "Reference scheme: gauss4 or implicit-midpoint")
        ->capture_default_str();
    app->add_option("--substeps", substeps, "Internal steps per reported step")->capture_default_str();
    app->add_option("--fp-tol", fp_tol, "Fixed-point tolerance")->capture_default_str();
    app->add_option("--fp-max-iter", fp_max_iter, "Fixed-point iteration cap")->capture_default_str();
  }

  IntegratorConfig config() const {
    IntegratorConfig cfg;
    try {
      cfg.scheme = scheme_from_string(scheme);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    cfg.substeps = substeps;
    cfg.fp_tol = fp_tol;
    cfg.fp_max_iter = fp_max_iter;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

HamiltonianSystem lookup_system(const std::string& name) {
  try {
    return system_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::string system;
  std::string task = "solve";
  int n = 10000;
  double h = 0.1;
  std::uint64_t seed = 1;
  std::string box_lower;
  std::string box_upper;
  std::string start;
  std::string out;
  IntegratorFlags integ;

  void attach(CLI::App* app) {
    app->add_option("--system", system, "pendulum, lotka-volterra, kepler or harmonic")->required();
    app->add_option("--task", task, "solve (box samples) or predict (one trajectory)")
        ->capture_default_str();
    app->add_option("--n", n, "Number of pairs")->capture_default_str();
    app->add_option("--h", h, "Time step")->capture_default_str();
    app->add_option("--seed", seed, "Sampling seed (solve task)")->capture_default_str();
    app->add_option("--box-lower", box_lower, "Box lower corner, comma separated");
    app->add_option("--box-upper", box_upper, "Box upper corner, comma separated");
    app->add_option("--start", start, "Trajectory start point (predict task)");
    app->add_option("--out", out, "Output CSV (default <system>_<task>.csv)");
    integ.attach(app);
  }

  int run() const {
    const auto sys = lookup_system(system);
    if (n < 1) throw UsageError("--n must be >= 1");
    Task t;
    try {
      t = task_from_string(task);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const IntegratorConfig cfg = integ.config();
    Dataset data;
    if (t == Task::Solve) {
      std::optional<Box> box = default_box(system);
      if (!box_lower.empty() || !box_upper.empty()) {
        if (box_lower.empty() || box_upper.empty()) {
          throw UsageError("--box-lower and --box-upper must be given together");
        }
        try {
          box.emplace(parse_point(box_lower, "--box-lower"), parse_point(box_upper, "--box-upper"));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      if (!box) throw UsageError("no default box for '" + system + "'; pass --box-lower/--box-upper");
      if (box->dim() != 2 * sys.dof()) throw UsageError("box dimension does not match the system");
      data = sample_pairs(sys, *box, n, h, seed, cfg);
    } else {
      const Vector x0 = start.empty() ? default_start(system) : parse_point(start, "--start");
      if (x0.size() != 2 * sys.dof()) throw UsageError("--start dimension does not match the system");
      data = sample_trajectory(sys, x0, n, h, cfg);
    }
    const std::string path = out.empty() ? system + "_" + task + ".csv" : out;
    save_csv(path, data);
    std::cout << "wrote " << data.size() << " pairs to " << path << '\n';
    for (const auto& [k, v] : data.meta.entries()) std::cout << "  " << k << " = " << v << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- train

struct TrainCmd {
  std::string model = "sympnet";
  int k = 8;
  int sublayers = 5;
  std::string activation = "sigmoid";
  bool trainable_gate_scale = false;
  double lr = 0.1;
  int epochs = kDefaultEpochs;
  bool paper_scale = false;
  std::uint64_t seed = 1;
  double w_penalty = 0.0;
  int log_every = 1000;
  std::optional<double> h;
  std::string data;
  std::string test;
  std::string out;
  std::string loss_csv;
  bool probe_structure = false;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "sympnet or fnn")->capture_default_str();
    app->add_option("--k", k, "SympNet gate units")->capture_default_str();
    app->add_option("--sublayers", sublayers, "Shears per SympNet linear unit")->capture_default_str();
    app->add_option("--activation", activation, "SympNet activation: sigmoid or tanh")
        ->capture_default_str();
    app->add_flag("--trainable-gate-scale", trainable_gate_scale, "Train a scale per SympNet gate");
    app->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    app->add_option("--epochs", epochs, "Full-batch epochs")->capture_default_str();
    app->add_flag("--paper-scale", paper_scale, "Use 1e6 epochs");
    app->add_option("--seed", seed, "Initialization seed")->capture_default_str();
    app->add_option("--w-penalty", w_penalty, "FNN structure penalty weight")->capture_default_str();
    app->add_option("--log-every", log_every, "Loss history interval")->capture_default_str();
    app->add_option("--h", h, "SympNet time step (default: dataset h)");
    app->add_option("--data", data, "Training CSV")->required();
    app->add_option("--test", test, "Test CSV");
    app->add_option("--out", out, "Model JSON")->required();
    app->add_option("--loss-csv", loss_csv, "Loss history CSV (default <out>.loss.csv)");
    app->add_flag("--probe-structure", probe_structure,
                  "FNN: log MSE_s on the test (else training) inputs");
  }

  int run() const {
    if (epochs < 1 && !paper_scale) throw UsageError("--epochs must be >= 1");
    if (!(lr > 0.0)) throw UsageError("--lr must be > 0");
    if (log_every < 1) throw UsageError("--log-every must be >= 1");
    if (model != "sympnet" && model != "fnn") throw UsageError("--model must be sympnet or fnn");

    const Dataset train_set = load_csv(data);
    std::optional<Dataset> test_set;
    if (!test.empty()) test_set = load_csv(test);

    TrainConfig cfg;
    cfg.epochs = paper_scale ? kPaperEpochs : epochs;
    cfg.lr = lr;
    cfg.seed = seed;
    cfg.w_penalty = w_penalty;
    cfg.log_every = log_every;

    const int d = train_set.dof();
    Model trained = Fnn::zeros({1, 1});
    std::vector<LossRecord> history;
    if (model == "sympnet") {
      double step_size = 0.0;
      if (h) {
        step_size = *h;
      } else if (auto meta_h = train_set.meta.get("h"); meta_h && parse_double(*meta_h)) {
        step_size = *parse_double(*meta_h);
      } else {
        throw UsageError("dataset has no h; pass --h");
      }
      SympNetShape shape{d, k, sublayers, activation_from_string(activation), trainable_gate_scale};
      const auto init = SympNet::random(shape, step_size, seed);
      std::cout << "sympnet: " << init.parameter_count() << " parameters\n";
      auto r = train(init, train_set, cfg);
      trained = std::move(r.model);
      history = std::move(r.history);
    } else {
      const auto init = Fnn::random(Fnn::default_sizes(d), seed);
      std::cout << "fnn: " << init.parameter_count() << " parameters\n";
      StructureProbe<Fnn> probe;
      if (probe_structure) {
        const Matrix& pts = test_set ? test_set->inputs : train_set.inputs;
        probe = [&pts](const Fnn& net) { return fnn_structure_loss(net, pts); };
      }
      auto r = train(init, train_set, cfg, probe);
      trained = std::move(r.model);
      history = std::move(r.history);
    }

    save_model(out, trained);
    const std::string loss_path = loss_csv.empty() ? out + ".loss.csv" : loss_csv;
    std::ofstream loss_out(loss_path);
    if (!loss_out) throw std::runtime_error("cannot open '" + loss_path + "'");
    write_loss_csv(loss_out, history);

    auto mse = [&](const Dataset& ds) {
      double total = 0.0;
      for (Eigen::Index i = 0; i < ds.size(); ++i) {
        total += (apply_model(trained, ds.x(i)) - ds.y(i)).squaredNorm();
      }
      return total / static_cast<double>(ds.size());
    };
    std::cout << "train MSE " << format_double(mse(train_set)) << '\n';
    if (test_set) std::cout << "test MSE " << format_double(mse(*test_set)) << '\n';
    std::cout << "wrote " << out << " and " << loss_path << '\n';
    return 0;
  }
};

// ---------------------------------------------------------------- rollout

struct RolloutCmd {
  std::string model;
  std::vector<std::string> starts;
  std::string from_dataset;
  int steps = 1000;
  std::string system;
  bool with_reference = false;
  bool with_energy = false;
  std::optional<double> h;
  std::string out = "rollout.csv";
  IntegratorFlags integ;

  void attach(CLI::App* app) {
    app->add_option("--model", model, "Model JSON")->required();
    app->add_option("--start", starts, "Start point, comma separated (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app->add_option("--from-dataset", from_dataset, "Start at the last point of a trajectory CSV");
    app->add_option("--steps", steps, "Number of steps")->capture_default_str();
    app->add_option("--system", system, "System for reference and energy columns");
    app->add_flag("--with-reference", with_reference, "Add reference-integrator columns");
    app->add_flag("--with-energy", with_energy, "Add energy columns");
    app->add_option("--h", h, "Reference step (default: SympNet h)");
    app->add_option("--out", out, "Output CSV; with several starts, _<i> is appended")
        ->capture_default_str();
    integ.attach(app);
  }

  int run() const {
    if (steps < 0) throw UsageError("--steps must be >= 0");
    const Model net = load_model(model);
    const int d = model_dof(net);

    std::vector<Vector> points;
    for (const auto& s : starts) points.push_back(parse_point(s, "--start"));
    if (!from_dataset.empty()) points.push_back(load_csv(from_dataset).final_point());
    if (points.empty()) throw UsageError("give --start or --from-dataset");
    for (const auto& p : points) {
      if (p.size() != 2 * d) throw UsageError("start dimension does not match the model");
    }

    std::optional<HamiltonianSystem> sys;
    if (!system.empty()) sys = lookup_system(system);
    if ((with_reference || with_energy) && !sys) {
      throw UsageError("--with-reference and --with-energy need --system");
    }
    if (sys && sys->dof() != d) throw UsageError("system dimension does not match the model");
    double ref_h = 0.0;
    if (with_reference) {
      if (h) {
        ref_h = *h;
      } else if (const auto* s = std::get_if<SympNet>(&net)) {
        ref_h = s->step();
      } else {
        throw UsageError("--with-reference on an fnn model needs --h");
      }
    }
    const IntegratorConfig cfg = integ.config();

    int status = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Rollout r =
          rollout([&](const Vector& y) { return apply_model(net, y); }, points[i], steps);
      std::optional<Rollout> ref;
      if (with_reference) {
        ref = rollout([&](const Vector& y) { return step(*sys, y, ref_h, cfg); }, points[i], steps);
      }
      std::string path = out;
      if (points.size() > 1) {
        const fs::path p(out);
        path = (p.parent_path() / (p.stem().string() + "_" + std::to_string(i) + p.extension().string()))
                   .string();
      }
      std::ofstream csv(path);
      if (!csv) throw std::runtime_error("cannot open '" + path + "'");
      write_rollout_csv(csv, r.states, ref ? &ref->states : nullptr, with_energy ? &*sys : nullptr);
      std::cout << "wrote " << r.states.size() << " states to " << path << '\n';
      if (r.error) {
        std::cerr << "rollout from start " << i << " stopped: " << *r.error << '\n';
        status = kExitRuntime;
      }
    }
    return status;
  }
};

// ---------------------------------------------------------------- verify

struct VerifyCmd {
  std::string check = "symplectic";
  std::string model;
  std::string model_kind = "sympnet";
  int points = 100;
  std::optional<double> threshold;
  std::string data;
  std::uint64_t seed = 1;
  double eps = 1e-6;
  std::string system;
  std::string start;
  int steps = 1000;
  std::string out_prefix;

  void attach(CLI::App* app) {
    app->add_option("--check", check, "symplectic, gradients or energy")->capture_default_str();
    app->add_option("--model", model, "Model JSON");
    app->add_option("--model-kind", model_kind, "Fixture kind when no --model: sympnet or fnn")
        ->capture_default_str();
    app->add_option("--points", points, "Number of test points")->capture_default_str();
    app->add_option("--threshold", threshold, "Fail (exit 3) above this value");
    app->add_option("--data", data, "Take test points (and targets) from this CSV");
    app->add_option("--seed", seed, "Seed for random points and fixtures")->capture_default_str();
    app->add_option("--eps", eps, "Finite-difference step for gradient checks")->capture_default_str();
    app->add_option("--system", system, "System for the energy check");
    app->add_option("--start", start, "Start point for the energy check");
    app->add_option("--steps", steps, "Rollout steps for the energy check")->capture_default_str();
    app->add_option("--out-prefix", out_prefix, "Write <prefix>.csv and <prefix>.json reports");
  }

  Matrix random_points(int d, int count, std::uint64_t s) const {
    SplitMix64 rng(s);
    Matrix pts(2 * d, count);
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
      for (Eigen::Index r = 0; r < pts.rows(); ++r) pts(r, c) = rng.uniform(-1.0, 1.0);
    }
    return pts;
  }

  int finish(double value, const std::string& what) const {
    std::cout << what << " = " << format_double(value) << '\n';
    if (threshold && !(value <= *threshold)) {
      std::cout << "FAIL: above threshold " << format_double(*threshold) << '\n';
      return kExitThreshold;
    }
    if (threshold) std::cout << "PASS: within threshold " << format_double(*threshold) << '\n';
    return 0;
  }

  int run() const {
    if (points < 1) throw UsageError("--points must be >= 1");
    std::optional<Dataset> dataset;
    if (!data.empty()) dataset = load_csv(data);

    if (check == "symplectic") {
      if (model.empty()) throw UsageError("--check symplectic needs --model");
      const Model net = load_model(model);
      const int d = model_dof(net);
      std::vector<Vector> pts;
      const Matrix source = dataset ? dataset->inputs : random_points(d, points, seed);
      for (Eigen::Index i = 0; i < std::min<Eigen::Index>(points, source.cols()); ++i) {
        pts.push_back(source.col(i));
      }
      const auto report =
          symplectic_residual([&](const Vector& x) { return model_jacobian(net, x); }, pts);
      if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + ".csv");
        report.write_csv(csv);
        std::ofstream js(out_prefix + ".json");
        report.write_json(js);
      }
      std::cout << "mean symplectic residual = " << format_double(report.mean_residual) << '\n';
      return finish(report.max_residual, "max symplectic residual");
    }

    if (check == "gradients") {
      std::optional<Model> net;
      if (!model.empty()) {
        net = load_model(model);
      } else if (model_kind == "sympnet") {
        net = SympNet::random({1, 2, 3, Activation::Sigmoid, false}, 0.1, seed, 0.5);
      } else if (model_kind == "fnn") {
        net = Fnn::random({2, 5, 5, 2}, seed);
      } else {
        throw UsageError("--model-kind must be sympnet or fnn");
      }
      const int d = model_dof(*net);
      Matrix x;
      Matrix y;
      if (dataset) {
        const Eigen::Index count = std::min<Eigen::Index>(points, dataset->size());
        x = dataset->inputs.leftCols(count);
        y = dataset->targets.leftCols(count);
      } else {
        const int count = std::min(points, 20);
        x = random_points(d, count, seed);
        y = random_points(d, count, seed + 1);
      }
      double worst = 0.0;
      if (const auto* s = std::get_if<SympNet>(&*net)) {
        worst = gradient_check(*s, x, y, eps);
      } else {
        worst = gradient_check(std::get<Fnn>(*net), x, y, eps);
      }
      return finish(worst, "max relative gradient error");
    }

    if (check == "energy") {
      if (model.empty() || system.empty()) throw UsageError("--check energy needs --model and --system");
      const Model net = load_model(model);
      const auto sys = lookup_system(system);
      if (sys.dof() != model_dof(net)) throw UsageError("system dimension does not match the model");
      Vector x0 = dataset ? dataset->final_point() : default_start(system);
      if (!start.empty()) x0 = parse_point(start, "--start");
      const Rollout r = rollout([&](const Vector& y) { return apply_model(net, y); }, x0, steps);
      const EnergyDrift drift = energy_drift(sys, r.states);
      if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + ".csv");
        csv << "step,drift\n";
        for (std::size_t i = 0; i < drift.drift.size(); ++i) {
          csv << i << ',' << format_double(drift.drift[i]) << '\n';
        }
        std::ofstream js(out_prefix + ".json");
        js << "{\"steps\": " << r.states.size() - 1
           << ", \"max_abs_drift\": " << format_double(drift.max_abs_drift) << "}\n";
      }
      if (r.error) {
        std::cout << "rollout stopped early: " << *r.error << '\n';
        return finish(std::numeric_limits<double>::infinity(), "max energy drift");
      }
      return finish(drift.max_abs_drift, "max energy drift");
    }
    throw UsageError("--check must be symplectic, gradients or energy");
  }
};

// ---------------------------------------------------------------- exp

struct ExpCmd {
  std::string preset;
  std::optional<int> epochs;
  bool paper_scale = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> steps;
  std::optional<int> log_every;
  std::optional<double> lr;
  std::string out;

  void attach(CLI::App* app) {
    std::string names;
    for (const auto& p : preset_names()) names += (names.empty() ? "" : ", ") + p;
    app->add_option("preset", preset, "One of: " + names)->required();
    app->add_option("--epochs", epochs, "Override epochs");
    app->add_flag("--paper-scale", paper_scale, "Use 1e6 epochs");
    app->add_option("--seed", seed, "Override seed");
    app->add_option("--n", n, "Override data size");
    app->add_option("--steps", steps, "Override rollout steps");
    app->add_option("--log-every", log_every, "Override loss history interval");
    app->add_option("--lr", lr, "Override learning rate");
    app->add_option("--out", out, "Output directory (default runs/<preset>)");
  }

  int run() const {
    ExperimentPreset base;
    try {
      base = preset_by_name(preset);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ExperimentOverrides o;
    o.epochs = paper_scale ? std::optional<int>(kPaperEpochs) : epochs;
    o.seed = seed;
    o.n = n;
    o.rollout_steps = steps;
    o.log_every = log_every;
    o.lr = lr;
    ExperimentPreset p;
    try {
      p = apply_overrides(base, o);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const fs::path dir = out.empty() ? fs::path("runs") / preset : fs::path(out);
    const auto outcome = run_experiment(p, dir, &std::cout);
    std::cout << "manifest: " << (dir / "manifest.json").string() << '\n';
    return outcome.ok() ? 0 : kExitRuntime;
  }
};

// Expands a JSON config object into flags placed before the user's flags, so
// flags given on the command line win.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("config '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config '" + path + "' must be a JSON object");
  std::vector<std::string> args;
  auto scalar = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
  };
  for (const auto& [key, value] : doc.items()) {
    const std::string flag = "--" + key;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      for (const auto& item : value) {
        args.push_back(flag);
        args.push_back(scalar(item));
      }
    } else {
      args.push_back(flag);
      args.push_back(scalar(value));
    }
  }
  return args;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      continue;
    }
    try {
      injected = config_args(path);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return kExitUsage;
    }
    break;
  }
  if (!injected.empty() && !args.empty()) {
    args.insert(args.begin() + 1, injected.begin(), injected.end());
  }

  CLI::App app{"Symplectic networks for learning Hamiltonian phase flows"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  // Long form only: "--h" is the time-step flag.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenerateCmd generate;
  TrainCmd train_cmd;
  RolloutCmd rollout_cmd;
  VerifyCmd verify;
  ExpCmd exp;
  auto* gen_app = app.add_subcommand("generate", "Generate a dataset CSV");
  generate.attach(gen_app);
  auto* train_app = app.add_subcommand("train", "Train a SympNet or FNN");
  train_cmd.attach(train_app);
  auto* rollout_app = app.add_subcommand("rollout", "Iterate a trained model");
  rollout_cmd.attach(rollout_app);
  auto* verify_app = app.add_subcommand("verify", "Symplecticity, gradient and energy checks");
  verify.attach(verify_app);
  auto* exp_app = app.add_subcommand("exp", "Run an experiment preset end to end");
  exp.attach(exp_app);
  app.add_option("--config", "JSON file supplying flags (flags on the command line win)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen_app->parsed()) return generate.run();
    if (train_app->parsed()) return train_cmd.run();
    if (rollout_app->parsed()) return rollout_cmd.run();
    if (verify_app->parsed()) return verify.run();
    if (exp_app->parsed()) return exp.run();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
