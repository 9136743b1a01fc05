#include "countreg/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "countreg/cross_validation.hpp"
#include "countreg/csv_io.hpp"
#include "countreg/dispersion.hpp"
#include "countreg/divergence.hpp"
#include "countreg/errors.hpp"
#include "countreg/irls.hpp"
#include "countreg/manifest.hpp"
#include "countreg/model_io.hpp"
#include "countreg/simulation.hpp"

namespace countreg {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << text;
  if (!f) throw IoError("failed writing '" + path + "'");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

GlmFamily family_from(const std::string& name, double alpha) {
  return name == "poisson" ? GlmFamily::poisson() : GlmFamily::negative_binomial(alpha);
}

double parse_positive(const std::string& flag, const std::string& text) {
  double v = 0.0;
  std::istringstream in(text);
  if (!(in >> v) || !in.eof() || !(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument(flag + " must be a positive number or a keyword, got '" + text + "'");
  }
  return v;
}

std::vector<double> grid_for(Method m, std::optional<double> lo, std::optional<double> hi, int size) {
  const auto def = default_grid(m);
  return log_grid(lo.value_or(def.front()), hi.value_or(def.back()), size);
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::string target = "y";
  std::string family = "poisson";
  std::string alpha = "auto";
  std::string penalty = "slope";
  std::string scale = "cv";
  int folds = 5;
  std::uint64_t seed = 0;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  int grid_size = 20;
  bool no_intercept = false;
  bool no_standardize = false;
  int max_iter = 5000;
  double tol = 1e-8;
  std::string out;
};

json alpha_auto(const Dataset& data, GlmFamily& family) {
  std::vector<Index> all;
  for (Index j = data.first_penalized(); j < data.d(); ++j) all.push_back(j);
  std::string basis = "full";
  VectorXd beta;
  try {
    beta = irls_fit(GlmFamily::poisson(), data, all);
  } catch (const Error&) {
    // Saturated or ill-posed design: fall back to the intercept-only fit.
    basis = "intercept_only";
    beta = irls_fit(GlmFamily::poisson(), data, {});
  }
  const AlphaEstimate est = estimate_alpha_mom(data, beta);
  family = GlmFamily::negative_binomial(est.alpha);
  return {{"value", est.alpha},
          {"method", "moments"},
          {"poisson_fit", basis},
          {"effectively_poisson", est.effectively_poisson}};
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
  json config = {{"data", a.data},         {"target", a.target},         {"family", a.family},
                 {"alpha", a.alpha},       {"penalty", a.penalty},       {"scale", a.scale},
                 {"folds", a.folds},       {"grid_size", a.grid_size},   {"intercept", !a.no_intercept},
                 {"standardize", !a.no_standardize}, {"max_iter", a.max_iter}, {"tol", a.tol}};
  config["grid_min"] = a.grid_min ? json(*a.grid_min) : json(nullptr);
  config["grid_max"] = a.grid_max ? json(*a.grid_max) : json(nullptr);
  RunManifest manifest = RunManifest::begin("fit", config, a.seed);

  const LoadedData loaded = load_csv(a.data, {a.target, !a.no_standardize, !a.no_intercept});
  const Dataset& data = loaded.data;
  if (data.penalized_count() < 1) throw InvalidArgument("the data have no feature columns");

  GlmFamily family = GlmFamily::poisson();
  json alpha_info = nullptr;
  if (a.family == "nb") {
    if (a.alpha == "auto") {
      alpha_info = alpha_auto(data, family);
    } else {
      family = GlmFamily::negative_binomial(parse_positive("--alpha", a.alpha));
    }
  }

  const Method method = parse_method(a.penalty);
  MethodOptions opts;
  opts.solver.max_iter = a.max_iter;
  opts.solver.tol = a.tol;

  double scale = 0.0;
  json cv_info = nullptr;
  if (a.scale == "cv") {
    CvOptions cv;
    cv.k_folds = a.folds;
    cv.seed = a.seed;
    cv.method = opts;
    const CvResult res = cross_validate(family, data, method, grid_for(method, a.grid_min, a.grid_max, a.grid_size), cv);
    scale = res.chosen;
    json losses = json::array();
    for (double l : res.mean_loss) losses.push_back(std::isfinite(l) ? json(l) : json(nullptr));
    cv_info = {{"grid", res.grid}, {"mean_loss", losses}, {"chosen", res.chosen}, {"folds", a.folds}, {"seed", a.seed}};
  } else {
    scale = parse_positive("--scale", a.scale);
  }

  const MethodFit fit = fit_method(family, data, method, scale, opts);

  SavedModel model;
  model.family = family;
  model.intercept = data.has_intercept();
  model.features = loaded.feature_names;
  model.column_norms = data.column_norms();
  model.beta = fit.beta;

  const VectorXd eta = data.X() * fit.beta;
  json support = json::array();
  for (Index j = data.first_penalized(); j < data.d(); ++j) {
    if (fit.beta(j) != 0.0) support.push_back(model.features[static_cast<std::size_t>(j - data.first_penalized())]);
  }

  json j = model.to_json();
  j["status"] = fit.converged ? "ok" : "not_converged";
  j["target"] = a.target;
  j["method"] = method_name(method);
  j["scale"] = scale;
  j["scale_selection"] = a.scale == "cv" ? "cv" : "fixed";
  j["support"] = support;
  j["model_size"] = fit.model_size;
  j["alpha_estimate"] = alpha_info;
  j["cv"] = cv_info;
  j["training"] = {{"n", data.n()},
                   {"test_kl", test_kl(family, data.y(), eta)},
                   {"normalized_deviance", normalized_deviance(family, data.y(), eta)}};
  manifest.finish();
  j["manifest"] = manifest.to_json();
  write_json(a.out, j);

  if (!fit.converged) {
    out << "solver did not converge; diagnostics written to " << a.out << "\n";
    return kExitConvergence;
  }
  out << "fitted " << method_name(method) << " (" << family.name() << ") scale " << fmt(scale) << ", "
      << fit.model_size << " features, training D* " << fmt(j["training"]["normalized_deviance"].get<double>())
      << "\n";
  if (!alpha_info.is_null() && alpha_info["effectively_poisson"].get<bool>()) {
    out << "note: no overdispersion detected; the data are effectively Poisson\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- predict / eval

struct ApplyArgs {
  std::string model;
  std::string data;
  std::string target;
  std::string out;
};

struct Applied {
  SavedModel model;
  std::string target;
  CsvTable table;
  VectorXd eta;
};

Applied apply_model(const ApplyArgs& a) {
  const json mj = read_json(a.model);
  Applied r{SavedModel::from_json(mj), a.target, read_csv_table(a.data), {}};
  if (r.target.empty() && mj.contains("target") && mj["target"].is_string()) r.target = mj["target"].get<std::string>();
  std::optional<std::string> skip;
  if (!r.target.empty() && r.table.column(r.target)) skip = r.target;
  r.eta = r.model.linear_predictor(select_features(r.table, r.model.features, skip));
  return r;
}

int cmd_predict(const ApplyArgs& a, std::ostream& out) {
  const Applied r = apply_model(a);
  const LinearPredictorGuard guard;
  std::ostringstream csv;
  csv << "eta,lambda_hat\n";
  for (Index i = 0; i < r.eta.size(); ++i) csv << fmt(r.eta(i)) << ',' << fmt(std::exp(guard.clamp(r.eta(i)))) << '\n';
  write_text(a.out, csv.str());
  out << "wrote " << r.eta.size() << " predictions to " << a.out << "\n";
  return kExitOk;
}

int cmd_eval(const ApplyArgs& a, std::ostream& out) {
  RunManifest manifest =
      RunManifest::begin("eval", {{"model", a.model}, {"data", a.data}, {"target", a.target}}, 0);
  const Applied r = apply_model(a);
  if (r.target.empty()) throw InvalidArgument("no target column given and none recorded in the model");
  const auto col = r.table.column(r.target);
  if (!col) throw SchemaError("target column '" + r.target + "' not found in '" + a.data + "'");
  const VectorXd y = validated_counts(r.table, *col);
  const double kl = test_kl(r.model.family, y, r.eta);
  const double dev = normalized_deviance(r.model.family, y, r.eta);
  manifest.finish();
  const json j = {{"n", y.size()},
                  {"family", r.model.family.name()},
                  {"alpha", r.model.family.is_poisson() ? json(nullptr) : json(r.model.family.alpha())},
                  {"test_kl", kl},
                  {"normalized_deviance", dev},
                  {"manifest", manifest.to_json()}};
  if (!a.out.empty()) write_json(a.out, j);
  out << "n " << y.size() << "  test_kl " << fmt(kl) << "  D* " << fmt(dev) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- simulate / bench

struct SimArgs {
  Index d = 20;
  double rho = 0.0;
  double epsilon = 0.1;
  Index n_train = 200;
  Index n_test = 100;
  int designs = 10;
  int replicates = 10;
  bool full_scale = false;
  std::string family = "poisson";
  double alpha = 1.0;
  std::vector<std::string> methods{"slope", "lasso", "forward"};
  std::uint64_t seed = 0;
  bool zero_beta = false;
  std::string normalize = "columns";
  int folds = 5;
  std::string out;
};

SimConfig sim_config(const SimArgs& a) {
  SimConfig c;
  c.d = a.d;
  c.rho = a.rho;
  c.epsilon = a.epsilon;
  c.n_train = a.n_train;
  c.n_test = a.n_test;
  c.n_designs = a.designs;
  c.n_replicates = a.replicates;
  if (a.full_scale) c = SimConfig::full_scale(c);
  c.family = family_from(a.family, a.alpha);
  c.seed = a.seed;
  c.methods.clear();
  for (const auto& m : a.methods) c.methods.push_back(parse_method(m));
  c.force_zero_beta = a.zero_beta;
  c.normalization = a.normalize == "rows" ? DesignNormalization::Rows : DesignNormalization::Columns;
  c.cv_folds = a.folds;
  c.validate();
  return c;
}

json config_json(const SimConfig& c) {
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(method_name(m));
  return {{"d", c.d},
          {"rho", c.rho},
          {"epsilon", c.epsilon},
          {"d0", c.force_zero_beta ? 0 : c.d0()},
          {"n_train", c.n_train},
          {"n_test", c.n_test},
          {"n_designs", c.n_designs},
          {"n_replicates", c.n_replicates},
          {"family", c.family.name()},
          {"alpha", c.family.is_poisson() ? json(nullptr) : json(c.family.alpha())},
          {"methods", methods},
          {"seed", c.seed},
          {"zero_beta", c.force_zero_beta},
          {"normalize", c.normalization == DesignNormalization::Rows ? "rows" : "columns"},
          {"cv_folds", c.cv_folds}};
}

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  const SimConfig c = sim_config(a);
  RunManifest manifest = RunManifest::begin("simulate", config_json(c), c.seed);
  RandomStream stream(c.seed, {0x51u});
  const MatrixXd X = sample_design(c, stream);
  const VectorXd beta = sample_beta(c.d, c.force_zero_beta ? 0 : c.d0(), stream);
  const VectorXd y = sample_response(c.family, X, beta, stream);

  std::ostringstream csv;
  for (Index j = 0; j < c.d; ++j) csv << 'x' << j + 1 << ',';
  csv << "y\n";
  for (Index i = 0; i < X.rows(); ++i) {
    for (Index j = 0; j < c.d; ++j) csv << fmt(X(i, j)) << ',';
    csv << static_cast<long long>(y(i)) << '\n';
  }
  write_text(a.out, csv.str());
  manifest.finish();
  json m = manifest.to_json();
  m["beta"] = vector_to_json(beta);
  write_json(a.out + ".manifest.json", m);
  out << "wrote " << X.rows() << " rows to " << a.out << "\n";
  return kExitOk;
}

int cmd_bench(const SimArgs& a, std::ostream& out) {
  const SimConfig c = sim_config(a);
  const json cfg = config_json(c);
  RunManifest manifest = RunManifest::begin("bench", cfg, c.seed);
  const BenchmarkReport report = run_benchmark(c);

  std::error_code ec;
  std::filesystem::create_directories(a.out, ec);
  if (ec) throw IoError("cannot create directory '" + a.out + "': " + ec.message());
  const std::filesystem::path dir(a.out);

  std::ostringstream csv;
  write_benchmark_csv(report, csv);
  write_text((dir / "benchmark.csv").string(), csv.str());
  std::ostringstream timings;
  write_timings_csv(report, timings);
  write_text((dir / "timings.csv").string(), timings.str());

  json groups = json::array();
  for (const auto& s : summarize(report)) {
    auto q = [](const Quartiles& x) {
      auto v = [](double d) { return std::isfinite(d) ? json(d) : json(nullptr); };
      return json{{"q1", v(x.q1)}, {"median", v(x.median)}, {"q3", v(x.q3)}};
    };
    groups.push_back({{"method", method_name(s.method)},
                      {"cells", s.cells},
                      {"failed", s.failed},
                      {"test_kl", q(s.test_kl)},
                      {"model_size", q(s.model_size)}});
    out << method_name(s.method) << ": median test_kl " << fmt(s.test_kl.median) << ", median size "
        << fmt(s.model_size.median) << " (" << s.failed << " failed of " << s.cells << ")\n";
  }
  write_json((dir / "summary.json").string(), {{"config", cfg}, {"methods", groups}});
  manifest.finish();
  write_json((dir / "manifest.json").string(), manifest.to_json());
  return kExitOk;
}

void add_sim_options(CLI::App* cmd, SimArgs& a, bool bench) {
  cmd->add_option("--d", a.d, "number of features")->check(CLI::PositiveNumber);
  cmd->add_option("--rho", a.rho, "AR(1) correlation in [0, 1)");
  cmd->add_option("--epsilon", a.epsilon, "proportion of active features");
  cmd->add_option("--family", a.family)->check(CLI::IsMember({"poisson", "nb"}));
  cmd->add_option("--alpha", a.alpha, "NB dispersion")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed);
  cmd->add_flag("--zero-beta", a.zero_beta, "generate a null signal");
  cmd->add_option("--normalize", a.normalize, "unit-norm columns or rows")->check(CLI::IsMember({"columns", "rows"}));
  cmd->add_option("--out", a.out)->required();
  if (bench) {
    cmd->add_option("--n-train", a.n_train);
    cmd->add_option("--n-test", a.n_test);
    cmd->add_option("--designs", a.designs);
    cmd->add_option("--replicates", a.replicates);
    cmd->add_flag("--full-scale", a.full_scale, "100 designs x 300 replicates");
    cmd->add_option("--methods", a.methods)->delimiter(',')->check(CLI::IsMember({"slope", "lasso", "forward"}));
    cmd->add_option("--folds", a.folds);
  } else {
    cmd->add_option("--n", a.n_train, "number of rows");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse Poisson and negative binomial regression"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit a penalized count regression");
  f->add_option("--data", fit.data, "CSV with a header row")->required();
  f->add_option("--target", fit.target, "count column");
  f->add_option("--family", fit.family)->check(CLI::IsMember({"poisson", "nb"}));
  f->add_option("--alpha", fit.alpha, "NB dispersion, or 'auto' for a moment estimate");
  f->add_option("--penalty", fit.penalty)->check(CLI::IsMember({"slope", "lasso", "forward"}));
  f->add_option("--scale", fit.scale, "penalty scale, or 'cv'");
  f->add_option("--folds", fit.folds);
  f->add_option("--seed", fit.seed);
  f->add_option("--grid-min", fit.grid_min);
  f->add_option("--grid-max", fit.grid_max);
  f->add_option("--grid-size", fit.grid_size)->check(CLI::PositiveNumber);
  f->add_flag("--no-intercept", fit.no_intercept);
  f->add_flag("--no-standardize", fit.no_standardize);
  f->add_option("--max-iter", fit.max_iter);
  f->add_option("--tol", fit.tol);
  f->add_option("--out", fit.out, "model JSON")->required();

  ApplyArgs pred;
  auto* p = app.add_subcommand("predict", "predict means for new data");
  p->add_option("--model", pred.model)->required();
  p->add_option("--data", pred.data)->required();
  p->add_option("--target", pred.target, "column to ignore (default: the model's target)");
  p->add_option("--out", pred.out, "CSV of eta and lambda_hat")->required();

  ApplyArgs ev;
  auto* e = app.add_subcommand("eval", "KL divergence and normalized deviance on labelled data");
  e->add_option("--model", ev.model)->required();
  e->add_option("--data", ev.data)->required();
  e->add_option("--target", ev.target);
  e->add_option("--out", ev.out, "JSON report");

  SimArgs sim;
  sim.n_train = 300;
  auto* s = app.add_subcommand("simulate", "draw one synthetic dataset");
  add_sim_options(s, sim, false);

  SimArgs bench;
  auto* b = app.add_subcommand("bench", "run the simulation benchmark");
  add_sim_options(b, bench, true);

  std::vector<std::string> argv_store{"countreg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*f) return cmd_fit(fit, out);
    if (*p) return cmd_predict(pred, out);
    if (*e) return cmd_eval(ev, out);
    if (*s) {
      sim.n_test = 0;
      return cmd_simulate(sim, out);
    }
    if (*b) return cmd_bench(bench, out);
  } catch (const IoError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const ConvergenceError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitConvergence;
  } catch (const NumericError& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitConvergence;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace countreg
