#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>

#include "csi/atoms.hpp"
#include "csi/io.hpp"
#include "csi/metrics.hpp"
#include "csi/model.hpp"
#include "csi/rng.hpp"
#include "csi/solver.hpp"
#include "csi/synth.hpp"
#include "csi/text.hpp"
#include "csi/version.hpp"

namespace csi {

namespace fs = std::filesystem;

namespace {

struct DataFlags {
  std::string path;
  bool sparse = false;
  std::size_t dims = 0;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--data", flags.path, "input dataset")->required();
  cmd->add_flag("--sparse", flags.sparse,
                "read `label idx:val ...` sparse rows instead of dense CSV");
  cmd->add_option("--dims", flags.dims,
                  "feature count override for sparse data (default: max index)");
}

Dataset load_data(const DataFlags& flags) {
  return flags.sparse ? load_sparse(flags.path, flags.dims)
                      : load_dense_csv(flags.path);
}

struct StructureFlags {
  std::string atoms = "sparse";
  std::string groups_file;
  std::string shape;  // "RxC"
  std::string row_laplacian_file;
  std::string col_laplacian_file;
  double epsilon = 1e-3;
};

void add_structure_flags(CLI::App* cmd, StructureFlags& flags) {
  cmd->add_option("--atoms", flags.atoms, "atomic family")
      ->check(CLI::IsMember({"sparse", "group", "lowrank", "graph"}))
      ->capture_default_str();
  cmd->add_option("--groups", flags.groups_file,
                  "group file (one line per group, zero-based indices)");
  cmd->add_option("--shape", flags.shape, "matrix shape RxC for lowrank atoms");
  cmd->add_option("--row-laplacian", flags.row_laplacian_file,
                  "dense CSV Laplacian of the row graph");
  cmd->add_option("--col-laplacian", flags.col_laplacian_file,
                  "dense CSV Laplacian of the column graph");
  cmd->add_option("--epsilon", flags.epsilon,
                  "Laplacian regularization for graph atoms")
      ->capture_default_str();
}

std::pair<std::size_t, std::size_t> parse_shape(const std::string& shape) {
  const auto parts = split(shape, 'x');
  std::size_t r = 0, c = 0;
  if (parts.size() != 2 || !parse_size(parts[0], r) || !parse_size(parts[1], c) ||
      r == 0 || c == 0)
    throw CLI::ValidationError("--shape", "expected RxC with positive integers");
  return {r, c};
}

std::shared_ptr<const AtomicProjector> build_projector(const StructureFlags& flags,
                                                       std::size_t d, std::size_t s,
                                                       RunManifest& manifest) {
  if (flags.atoms == "sparse") return std::make_shared<SparseProjector>(d, s);

  if (flags.atoms == "group") {
    if (flags.groups_file.empty())
      throw CLI::RequiredError("--groups (required with --atoms group)");
    manifest.input_digests[flags.groups_file] = fnv1a64_file(flags.groups_file);
    return std::make_shared<GroupProjector>(load_groups(flags.groups_file), s);
  }

  if (flags.atoms == "lowrank") {
    if (flags.shape.empty())
      throw CLI::RequiredError("--shape (required with --atoms lowrank)");
    const auto [rows, cols] = parse_shape(flags.shape);
    if (rows * cols != d)
      throw CLI::ValidationError("--shape", "rows*cols=" + std::to_string(rows * cols) +
                                                " does not match d=" + std::to_string(d));
    return std::make_shared<LowRankProjector>(rows, cols, s);
  }

  // graph
  if (flags.row_laplacian_file.empty() || flags.col_laplacian_file.empty())
    throw CLI::RequiredError(
        "--row-laplacian and --col-laplacian (required with --atoms graph)");
  manifest.input_digests[flags.row_laplacian_file] = fnv1a64_file(flags.row_laplacian_file);
  manifest.input_digests[flags.col_laplacian_file] = fnv1a64_file(flags.col_laplacian_file);
  const linalg::DenseMat row_lap = load_matrix_csv(flags.row_laplacian_file);
  const linalg::DenseMat col_lap = load_matrix_csv(flags.col_laplacian_file);
  if (row_lap.rows * col_lap.rows != d)
    throw CLI::ValidationError("--row-laplacian/--col-laplacian",
                               "Laplacian sizes " + std::to_string(row_lap.rows) + "x" +
                                   std::to_string(col_lap.rows) +
                                   " do not match d=" + std::to_string(d));
  auto [row_f, col_f] = build_graph_factors(row_lap, col_lap, flags.epsilon);
  return std::make_shared<GraphLowRankProjector>(std::move(row_f), std::move(col_f), s);
}

std::optional<MatrixShape> projector_shape(const StructureFlags& flags, std::size_t d) {
  if (flags.atoms == "lowrank") {
    const auto [rows, cols] = parse_shape(flags.shape);
    return MatrixShape{rows, cols};
  }
  if (flags.atoms == "graph") {
    const linalg::DenseMat row_lap = load_matrix_csv(flags.row_laplacian_file);
    const linalg::DenseMat col_lap = load_matrix_csv(flags.col_laplacian_file);
    if (row_lap.rows * col_lap.rows == d) return MatrixShape{row_lap.rows, col_lap.rows};
  }
  return std::nullopt;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

std::vector<double> parse_double_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  for (const auto tok : split(csv, ',')) {
    double v;
    if (!parse_double(trim(tok), v))
      throw CLI::ValidationError(what, "bad number '" + std::string(trim(tok)) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError(what, "empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& csv, const char* what) {
  std::vector<std::size_t> out;
  for (const auto tok : split(csv, ',')) {
    std::size_t v;
    if (!parse_size(trim(tok), v))
      throw CLI::ValidationError(what, "bad integer '" + std::string(trim(tok)) + "'");
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError(what, "empty list");
  return out;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  DataFlags data;
  StructureFlags structure;
  std::size_t s = 0;
  double eta = 1.0;
  double lambda = 0.0;
  std::size_t iters = 50;
  double lpav_tol = 1e-8;
  bool standardize_flag = false;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string model_out;
};

int run_train(const TrainArgs& args, RunManifest manifest) {
  manifest.input_digests[args.data.path] = fnv1a64_file(args.data.path);

  Dataset ds = load_data(args.data);
  std::optional<Preprocessing> prep;
  if (args.standardize_flag) {
    StandardizeResult st = standardize(ds);
    prep = Preprocessing{st.column_means, st.column_scales};
    ds = std::move(st.data);
  }

  TrainConfig cfg;
  cfg.eta = args.eta;
  cfg.lambda = args.lambda;
  cfg.iterations = args.iters;
  cfg.lpav_tol = args.lpav_tol;
  cfg.projector = build_projector(args.structure, ds.dim(), args.s, manifest);
  cfg.track_history = true;

  const FitReport report = csi_fit(ds, cfg);

  SimModel model(report.model.weights(), report.model.link(), prep,
                 projector_shape(args.structure, ds.dim()));
  model.save_file(args.model_out);

  manifest.config["projector"] = cfg.projector->describe();
  const fs::path out_dir = fs::path(args.model_out).has_parent_path()
                               ? fs::path(args.model_out).parent_path()
                               : fs::path(".");
  write_manifest(out_dir, manifest);

  std::cout << "trained " << cfg.projector->describe() << " on " << ds.size()
            << " samples; final objective "
            << format_double(report.objective_trace.back()) << "; model written to "
            << args.model_out << "\n";
  return 0;
}

// ---- predict / eval --------------------------------------------------------

struct PredictArgs {
  DataFlags data;
  std::string model_path;
  std::string out_dir;
  double threshold = 0.0;
};

int run_predict(const PredictArgs& args, RunManifest manifest) {
  manifest.input_digests[args.data.path] = fnv1a64_file(args.data.path);
  manifest.input_digests[args.model_path] = fnv1a64_file(args.model_path);

  const SimModel model = SimModel::load_file(args.model_path);
  const Dataset ds = load_data(args.data);
  const Vector scores = model.predict_all(ds.features());

  fs::create_directories(args.out_dir);
  std::ofstream out = open_out(fs::path(args.out_dir) / "scores.csv");
  out << "row,score,pred\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int pred = scores[i] >= args.threshold ? 1 : -1;
    out << i << ',' << format_double(scores[i]) << ',' << pred << '\n';
  }
  write_manifest(args.out_dir, manifest);
  std::cout << "scored " << scores.size() << " rows into " << args.out_dir
            << "/scores.csv\n";
  return 0;
}

struct EvalArgs {
  DataFlags data;
  std::string model_path;
  std::string metric;
  std::string out_dir;
  double threshold = 0.0;
};

int run_eval(const EvalArgs& args, RunManifest manifest) {
  manifest.input_digests[args.data.path] = fnv1a64_file(args.data.path);
  manifest.input_digests[args.model_path] = fnv1a64_file(args.model_path);

  const SimModel model = SimModel::load_file(args.model_path);
  const Dataset ds = load_data(args.data);
  const Vector scores = model.predict_all(ds.features());

  EvalResult result;
  result.metric = args.metric;
  result.n_evaluated = ds.size();
  if (args.metric == "auc") {
    result.value = auc(scores, ds.responses());
  } else if (args.metric == "mse") {
    result.value = mse(scores, ds.responses());
  } else {
    std::vector<double> cls(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i)
      cls[i] = scores[i] >= args.threshold ? 1.0 : -1.0;
    const Vector predictions(std::move(cls));
    result.value = args.metric == "f1" ? f1(predictions, ds.responses())
                                       : accuracy(predictions, ds.responses());
  }

  fs::create_directories(args.out_dir);
  std::ofstream out = open_out(fs::path(args.out_dir) / "eval.csv");
  out << "metric,value,n\n";
  out << result.metric << ',' << format_double(result.value) << ','
      << result.n_evaluated << '\n';
  write_manifest(args.out_dir, manifest);

  std::cout << "metric  value       n\n";
  std::cout << result.metric << "  " << format_double(result.value) << "  "
            << result.n_evaluated << "\n";
  return 0;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::size_t n = 0, d = 0, k = 0;
  std::string link = "logistic";
  std::string labels = "bernoulli";
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_synth(const SynthArgs& args, RunManifest manifest) {
  SynthSpec spec;
  spec.n = args.n;
  spec.d = args.d;
  spec.k = args.k;
  spec.link = args.link == "linear" ? SynthLink::kLinear : SynthLink::kLogistic;
  spec.noise = args.labels == "expected" ? LabelMechanism::kExpectedValue
                                         : LabelMechanism::kBernoulli;
  spec.seed = args.seed;

  const SynthData synth = generate(spec);

  fs::create_directories(args.out_dir);
  const std::string comment = std::string("rng=") + Rng::kIdentity +
                              " seed=" + std::to_string(args.seed) +
                              " link=" + synth.g_star_name + " labels=" + args.labels;
  save_dense_csv(synth.data, (fs::path(args.out_dir) / "data.csv").string(), comment);

  std::ofstream wout = open_out(fs::path(args.out_dir) / "wstar.csv");
  for (std::size_t j = 0; j < synth.w_star.size(); ++j)
    wout << format_double(synth.w_star[j]) << '\n';

  write_manifest(args.out_dir, manifest);
  std::cout << "wrote " << args.n << "x" << args.d << " dataset (k=" << args.k
            << ", link=" << synth.g_star_name << ") to " << args.out_dir << "\n";
  return 0;
}

// ---- convergence --------------------------------------------------------------

struct ConvergenceArgs {
  std::string dims = "400,1600,6400";
  std::string etas = "0.25,0.5,1,2,4,8,16";
  std::size_t n = 500;
  std::size_t iters = 50;
  double lambda = 1e-3;
  std::uint64_t seed = 0;
  std::string out_dir;
};

int run_convergence(const ConvergenceArgs& args, RunManifest manifest) {
  ConvergenceOptions opts;
  opts.n = args.n;
  opts.iterations = args.iters;
  opts.lambda = args.lambda;
  opts.etas = parse_double_list(args.etas, "--etas");
  const std::vector<std::size_t> dims = parse_size_list(args.dims, "--dims");

  const ConvergenceResult result = convergence_experiment(dims, args.seed, opts);

  fs::create_directories(args.out_dir);
  {
    std::ofstream out = open_out(fs::path(args.out_dir) / "trace.csv");
    out << "d,t,distance\n";
    for (const auto& row : result.trace)
      out << row.d << ',' << row.t << ',' << format_double(row.distance) << '\n';
  }
  {
    std::ofstream out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "d,best_eta,initial_distance,final_distance\n";
    for (const auto& run : result.runs)
      out << run.d << ',' << format_double(run.best_eta) << ','
          << format_double(run.initial_distance) << ','
          << format_double(run.final_distance) << '\n';
  }
  write_manifest(args.out_dir, manifest);

  for (const auto& run : result.runs)
    std::cout << "d=" << run.d << " best_eta=" << format_double(run.best_eta)
              << " ||w0-w*||=" << format_double(run.initial_distance)
              << " ||wT-w*||=" << format_double(run.final_distance) << "\n";
  return 0;
}

// ---- sweep ---------------------------------------------------------------------

struct SweepArgs {
  DataFlags data;
  StructureFlags structure;
  std::string s_grid;  // empty = default d/4 .. d/1024
  std::string etas = "1";
  double lambda = 0.0;
  std::size_t iters = 50;
  double lpav_tol = 1e-8;
  std::string fractions = "0.5,0.25,0.25";
  bool standardize_flag = false;
  std::uint64_t seed = 0;
  std::string out_dir;
};

std::vector<std::size_t> default_s_grid(std::size_t d) {
  std::vector<std::size_t> grid;
  std::set<std::size_t> seen;
  for (std::size_t denom = 4; denom <= 1024; denom *= 2) {
    const double raw = static_cast<double>(d) / static_cast<double>(denom);
    const auto s = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(raw)));
    if (seen.insert(s).second) grid.push_back(s);
  }
  return grid;
}

int run_sweep(const SweepArgs& args, RunManifest manifest) {
  manifest.input_digests[args.data.path] = fnv1a64_file(args.data.path);

  Dataset full = load_data(args.data);

  const auto fracs = parse_double_list(args.fractions, "--fractions");
  if (fracs.size() != 3)
    throw CLI::ValidationError("--fractions", "expected train,val,test");
  SplitResult parts = split(full, SplitFractions{fracs[0], fracs[1], fracs[2]}, args.seed);

  std::optional<Preprocessing> prep;
  if (args.standardize_flag) {
    StandardizeResult st = standardize(parts.train);
    prep = Preprocessing{st.column_means, st.column_scales};
    parts.train = std::move(st.data);
  }

  const bool classification = full.kind() == ResponseKind::kBinaryClassification;
  const std::string metric = classification ? "auc" : "mse";

  const std::vector<std::size_t> s_grid = args.s_grid.empty()
                                              ? default_s_grid(full.dim())
                                              : parse_size_list(args.s_grid, "--s-grid");
  const std::vector<double> etas = parse_double_list(args.etas, "--etas");

  struct Point {
    std::size_t s;
    double eta;
    double value;
    bool failed;
  };
  std::vector<Point> points;

  auto evaluate_on = [&](const SimModel& model, const Dataset& ds) {
    const Vector scores = model.predict_all(ds.features());
    if (classification) return auc(scores, ds.responses());
    return mse(scores, ds.responses());
  };

  std::optional<SimModel> best_model;
  double best_value = classification ? -1.0 : std::numeric_limits<double>::infinity();
  std::size_t best_s = 0;
  double best_eta = 0.0;

  // Grid points run sequentially; each point is fully deterministic so the
  // output does not depend on scheduling.
  for (std::size_t s : s_grid) {
    for (double eta : etas) {
      Point point{s, eta, 0.0, false};
      try {
        TrainConfig cfg;
        cfg.eta = eta;
        cfg.lambda = args.lambda;
        cfg.iterations = args.iters;
        cfg.lpav_tol = args.lpav_tol;
        RunManifest scratch;  // projector inputs already digested once below
        cfg.projector = build_projector(args.structure, full.dim(), s, scratch);
        cfg.track_history = false;
        const FitReport report = csi_fit(parts.train, cfg);
        SimModel model(report.model.weights(), report.model.link(), prep,
                       projector_shape(args.structure, full.dim()));
        point.value = evaluate_on(model, parts.val);
        const bool better = classification ? point.value > best_value
                                           : point.value < best_value;
        if (better) {
          best_value = point.value;
          best_model = std::move(model);
          best_s = s;
          best_eta = eta;
        }
      } catch (const std::runtime_error&) {
        point.failed = true;  // divergent step size; report and move on
      }
      points.push_back(point);
    }
  }

  if (!best_model) throw std::runtime_error("sweep: every grid point diverged");

  fs::create_directories(args.out_dir);
  {
    std::ofstream out = open_out(fs::path(args.out_dir) / "results.csv");
    out << "s,eta,val_" << metric << ",status\n";
    for (const auto& point : points)
      out << point.s << ',' << format_double(point.eta) << ','
          << (point.failed ? "" : format_double(point.value)) << ','
          << (point.failed ? "diverged" : "ok") << '\n';
  }
  const double test_value = evaluate_on(*best_model, parts.test);
  {
    std::ofstream out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "best_s,best_eta,val_" << metric << ",test_" << metric << "\n";
    out << best_s << ',' << format_double(best_eta) << ',' << format_double(best_value)
        << ',' << format_double(test_value) << '\n';
  }
  best_model->save_file((fs::path(args.out_dir) / "best_model.csi").string());

  if (const auto& gf = args.structure.groups_file; !gf.empty())
    manifest.input_digests[gf] = fnv1a64_file(gf);
  if (const auto& rl = args.structure.row_laplacian_file; !rl.empty())
    manifest.input_digests[rl] = fnv1a64_file(rl);
  if (const auto& cl = args.structure.col_laplacian_file; !cl.empty())
    manifest.input_digests[cl] = fnv1a64_file(cl);
  write_manifest(args.out_dir, manifest);

  std::cout << "best s=" << best_s << " eta=" << format_double(best_eta) << " val_"
            << metric << "=" << format_double(best_value) << " test_" << metric << "="
            << format_double(test_value) << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"structured single index model trainer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "fit a model");
  add_data_flags(train, train_args.data);
  add_structure_flags(train, train_args.structure);
  train->add_option("--s", train_args.s, "atom budget")->required();
  train->add_option("--eta", train_args.eta, "step size")->capture_default_str();
  train->add_option("--lambda", train_args.lambda, "ridge weight")->capture_default_str();
  train->add_option("--iters", train_args.iters, "iterations")->capture_default_str();
  train->add_option("--lpav-tol", train_args.lpav_tol, "link fit tolerance")
      ->capture_default_str();
  train->add_flag("--standardize", train_args.standardize_flag,
                  "standardize columns; stats are stored in the model");
  auto* train_seed = train->add_option("--seed", train_args.seed,
                                       "recorded in the manifest (training itself is "
                                       "deterministic)");
  train->add_option("--model-out", train_args.model_out, "output model path")->required();

  PredictArgs predict_args;
  CLI::App* predict = app.add_subcommand("predict", "score rows with a model");
  add_data_flags(predict, predict_args.data);
  predict->add_option("--model", predict_args.model_path, "model file")->required();
  predict->add_option("--threshold", predict_args.threshold, "classification threshold")
      ->capture_default_str();
  predict->add_option("--out", predict_args.out_dir, "output directory")->required();

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a model");
  add_data_flags(eval, eval_args.data);
  eval->add_option("--model", eval_args.model_path, "model file")->required();
  eval->add_option("--metric", eval_args.metric, "metric")
      ->check(CLI::IsMember({"auc", "f1", "mse", "acc"}))
      ->required();
  eval->add_option("--threshold", eval_args.threshold, "classification threshold")
      ->capture_default_str();
  eval->add_option("--out", eval_args.out_dir, "output directory")->required();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--n", synth_args.n, "samples")->required();
  synth->add_option("--d", synth_args.d, "dimension")->required();
  synth->add_option("--k", synth_args.k, "sparsity of w*")->required();
  synth->add_option("--link", synth_args.link, "transfer function")
      ->check(CLI::IsMember({"logistic", "linear"}))
      ->capture_default_str();
  synth->add_option("--labels", synth_args.labels, "label mechanism")
      ->check(CLI::IsMember({"bernoulli", "expected"}))
      ->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "rng seed")->required();
  synth->add_option("--out", synth_args.out_dir, "output directory")->required();

  ConvergenceArgs conv_args;
  CLI::App* convergence =
      app.add_subcommand("convergence", "iterate-distance experiment on synthetic data");
  convergence->add_option("--dims", conv_args.dims, "comma-separated dimensions")
      ->capture_default_str();
  convergence->add_option("--etas", conv_args.etas, "step sizes to sweep")
      ->capture_default_str();
  convergence->add_option("--n", conv_args.n, "samples")->capture_default_str();
  convergence->add_option("--iters", conv_args.iters, "iterations")->capture_default_str();
  convergence->add_option("--lambda", conv_args.lambda, "ridge weight")
      ->capture_default_str();
  convergence->add_option("--seed", conv_args.seed, "rng seed")->required();
  convergence->add_option("--out", conv_args.out_dir, "output directory")->required();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "grid over the atom budget");
  add_data_flags(sweep, sweep_args.data);
  add_structure_flags(sweep, sweep_args.structure);
  sweep->add_option("--s-grid", sweep_args.s_grid,
                    "comma-separated budgets (default d/4,d/8,...,d/1024)");
  sweep->add_option("--etas", sweep_args.etas, "step sizes")->capture_default_str();
  sweep->add_option("--lambda", sweep_args.lambda, "ridge weight")->capture_default_str();
  sweep->add_option("--iters", sweep_args.iters, "iterations")->capture_default_str();
  sweep->add_option("--lpav-tol", sweep_args.lpav_tol, "link fit tolerance")
      ->capture_default_str();
  sweep->add_option("--fractions", sweep_args.fractions, "train,val,test fractions")
      ->capture_default_str();
  sweep->add_flag("--standardize", sweep_args.standardize_flag,
                  "standardize training columns");
  sweep->add_option("--seed", sweep_args.seed, "rng seed for the split")->required();
  sweep->add_option("--out", sweep_args.out_dir, "output directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  RunManifest manifest;
  manifest.argv = args;

  try {
    if (*train) {
      manifest.command = "train";
      manifest.has_seed = train_seed->count() > 0;
      manifest.seed = train_args.seed;
      manifest.config = {{"atoms", train_args.structure.atoms},
                         {"s", std::to_string(train_args.s)},
                         {"eta", format_double(train_args.eta)},
                         {"lambda", format_double(train_args.lambda)},
                         {"iters", std::to_string(train_args.iters)},
                         {"lpav_tol", format_double(train_args.lpav_tol)},
                         {"standardize", train_args.standardize_flag ? "1" : "0"}};
      return run_train(train_args, std::move(manifest));
    }
    if (*predict) {
      manifest.command = "predict";
      manifest.config = {{"threshold", format_double(predict_args.threshold)}};
      return run_predict(predict_args, std::move(manifest));
    }
    if (*eval) {
      manifest.command = "eval";
      manifest.config = {{"metric", eval_args.metric},
                         {"threshold", format_double(eval_args.threshold)}};
      return run_eval(eval_args, std::move(manifest));
    }
    if (*synth) {
      manifest.command = "synth";
      manifest.has_seed = true;
      manifest.seed = synth_args.seed;
      manifest.config = {{"n", std::to_string(synth_args.n)},
                         {"d", std::to_string(synth_args.d)},
                         {"k", std::to_string(synth_args.k)},
                         {"link", synth_args.link},
                         {"labels", synth_args.labels}};
      return run_synth(synth_args, std::move(manifest));
    }
    if (*convergence) {
      manifest.command = "convergence";
      manifest.has_seed = true;
      manifest.seed = conv_args.seed;
      manifest.config = {{"dims", conv_args.dims},
                         {"etas", conv_args.etas},
                         {"n", std::to_string(conv_args.n)},
                         {"iters", std::to_string(conv_args.iters)},
                         {"lambda", format_double(conv_args.lambda)}};
      return run_convergence(conv_args, std::move(manifest));
    }
    if (*sweep) {
      manifest.command = "sweep";
      manifest.has_seed = true;
      manifest.seed = sweep_args.seed;
      manifest.config = {{"atoms", sweep_args.structure.atoms},
                         {"s_grid", sweep_args.s_grid.empty() ? "default" : sweep_args.s_grid},
                         {"etas", sweep_args.etas},
                         {"lambda", format_double(sweep_args.lambda)},
                         {"iters", std::to_string(sweep_args.iters)},
                         {"fractions", sweep_args.fractions},
                         {"standardize", sweep_args.standardize_flag ? "1" : "0"}};
      return run_sweep(sweep_args, std::move(manifest));
    }
  } catch (const CLI::Error& e) {
    std::cerr << "csi: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "csi: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace csi
