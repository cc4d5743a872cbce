#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fractal/fractal.hpp"

namespace fractal::cli {

inline constexpr int exit_usage = 2;
inline constexpr int exit_internal = 3;

/// Module errors map to 10 + the numeric error code.
inline int exit_code(errc code) { return 10 + static_cast<int>(code); }

/// Flags given on the command line, layered over an optional JSON config
/// file. The resolved values (defaults filled in) are recorded so every
/// output can embed the configuration that produced it.
class run_config {
 public:
  json raw = json::object();
  json resolved = json::object();

  template <typename T>
  T get(const std::string& key, const T& fallback) {
    T v = raw.contains(key) ? raw[key].get<T>() : fallback;
    resolved[key] = v;
    return v;
  }

  // Output paths are not recorded: the same run written to two paths must
  // produce identical files.
  bool has(const std::string& key) const { return raw.contains(key); }
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

inline std::string process_name(const point_transform& g) {
  return std::holds_alternative<transform::identity>(g) ? "gaussian" : transform_name(g);
}

/// Writes to --out when given, else to the supplied stream.
class output {
 public:
  output(const std::string& path, std::ostream& fallback, bool binary = false) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw error(errc::io_error, "cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }
  ~output() {
    if (file_) file_->flush();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

struct resolved_setup {
  int dim = 1;
  covariance_model model;
  grid_spec grid;
  point_transform transform;
  estimator_config est;
};

inline multi_index resolve_n0(run_config& cfg, int dim, std::int64_t fallback_side) {
  std::vector<std::int64_t> n0 = cfg.get<std::vector<std::int64_t>>(
      "n0", dim == 1 ? std::vector<std::int64_t>{fallback_side} : std::vector<std::int64_t>{fallback_side, fallback_side});
  if (n0.size() == 1 && dim == 2) n0.push_back(n0[0]);
  if (static_cast<int>(n0.size()) != dim)
    throw error(errc::invalid_argument, "--n0 needs " + std::to_string(dim) + " value(s) for dim " + std::to_string(dim));
  cfg.resolved["n0"] = n0;
  return dim == 1 ? multi_index(n0[0]) : multi_index(n0[0], n0[1]);
}

inline int resolve_dim(run_config& cfg) {
  int fallback = 1;
  if (cfg.has("n0") && cfg.raw["n0"].is_array() && cfg.raw["n0"].size() == 2) fallback = 2;
  const int dim = cfg.get<int>("dim", fallback);
  multi_index::check_dim(dim);
  return dim;
}

inline estimator_config resolve_estimator(run_config& cfg, int dim, const std::string& default_inc = "",
                                          const std::string& default_scheme = "ols", int default_m = 4) {
  estimator_config e;
  const auto inc_text = cfg.get<std::string>("increment", default_inc.empty() ? (dim == 1 ? "diff0" : "square") : default_inc);
  e.inc = parse_increment(inc_text);
  if (e.inc.dim() != dim) throw error(errc::invalid_argument, "increment dimension does not match --dim");
  e.m = cfg.get<int>("m", default_m);
  if (e.m < 2) throw error(errc::m_too_small, "--m must be at least 2");
  e.scheme = parse_scheme(cfg.get<std::string>("scheme", default_scheme));
  return e;
}

inline resolved_setup resolve_setup(run_config& cfg, std::int64_t default_side_1d = 1000,
                                    std::int64_t default_side_2d = 100, const std::string& default_inc = "",
                                    const std::string& default_scheme = "ols", int default_m = 4) {
  resolved_setup s;
  s.dim = resolve_dim(cfg);
  const double alpha = cfg.get<double>("alpha", 1.0);
  const double c = cfg.get<double>("c", default_scale(s.dim));
  s.model = covariance_model::make(alpha, s.dim, c);
  s.transform = parse_transform(cfg.get<std::string>("transform", "identity"));
  s.est = resolve_estimator(cfg, s.dim, default_inc, default_scheme, default_m);
  const multi_index n0 = resolve_n0(cfg, s.dim, s.dim == 1 ? default_side_1d : default_side_2d);
  const auto margin = cfg.get<std::int64_t>("margin", required_margin(s.est.inc, s.est.m));
  s.grid = grid_spec::make(n0, margin);
  return s;
}

inline int resolve_jobs(run_config& cfg) {
  const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  // Not recorded: the degree of parallelism does not affect any output.
  return cfg.raw.contains("jobs") ? std::max(1, cfg.raw["jobs"].get<int>()) : hw;
}

inline std::vector<double> resolve_alphas(run_config& cfg, std::vector<double> fallback) {
  if (!cfg.has("alphas") && cfg.has("alpha")) fallback = {cfg.raw["alpha"].get<double>()};
  return cfg.get<std::vector<double>>("alphas", fallback);
}

inline void write_header(std::ostream& out, const std::string& what, const run_config& cfg) {
  out << "# fractal " << what << '\n';
  out << "# config: " << cfg.resolved.dump() << '\n';
}

// ---- subcommands ------------------------------------------------------------

inline int cmd_simulate(run_config& cfg, std::ostream& out) {
  auto s = resolve_setup(cfg);
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  auto format = cfg.get<std::string>("format", s.dim == 1 ? "csv" : "bin");
  if (format == "binary") format = "bin";
  if (format != "csv" && format != "bin") throw error(errc::invalid_argument, "simulate --format must be csv or bin");
  const auto path = cfg.raw.value("out", std::string());

  const auto emb = build_embedding(s.model, s.grid);
  const auto sample = transform_field(sample_field(emb, seed).first, s.transform);
  output o(path, out, format == "bin");
  if (format == "csv")
    write_field_csv(o.get(), sample, cfg.resolved);
  else
    write_field_binary(o.get(), sample, cfg.resolved);
  return 0;
}

inline int cmd_estimate(run_config& cfg, const std::string& input, std::ostream& out) {
  const auto data = read_field(input);
  cfg.resolved["input"] = input;
  const int dim = data.grid.dim();
  const auto est = resolve_estimator(cfg, dim);
  const double c = cfg.get<double>("c", data.model.c);
  const auto format = cfg.get<std::string>("format", "json");
  const auto path = cfg.raw.value("out", std::string());

  const auto r = estimate(data, est, c);
  output o(path, out);
  if (format == "json") {
    o.get() << estimate_report(r, cfg.resolved).dump(2) << '\n';
  } else if (format == "csv") {
    write_header(o.get(), "estimate", cfg);
    o.get() << "# alpha_hat: " << fmt("%.17g", r.alpha_hat) << '\n';
    o.get() << "# dimension_hat: " << fmt("%.17g", r.dimension_hat) << '\n';
    o.get() << "# clamped: " << (r.clamped ? "true" : "false") << '\n';
    o.get() << "u,zbar,weight,residual\n";
    for (int u = 1; u <= r.weights.m(); ++u)
      o.get() << u << ',' << fmt("%.17g", r.zbar[u - 1]) << ',' << fmt("%.17g", r.weights.L[u - 1]) << ','
              << fmt("%.17g", r.residuals[u - 1]) << '\n';
  } else {
    throw error(errc::invalid_argument, "estimate --format must be json or csv");
  }
  return 0;
}

struct named_estimator {
  std::string name;
  estimator_config cfg;
};

inline std::vector<named_estimator> table_estimators(int m) {
  return {{"ols0", {increment::forward_difference(), m, weight_scheme::ols}},
          {"ols1", {increment::second_difference(), m, weight_scheme::ols}},
          {"gls1", {increment::second_difference(), m, weight_scheme::gls}}};
}

inline int cmd_table1(run_config& cfg, std::ostream& out) {
  const auto alphas = resolve_alphas(cfg, {0.1, 1.0, 1.9});
  const auto processes = cfg.get<std::vector<std::string>>(
      "processes", {"gaussian", "uniform", "exp1", "chisq1", "lognormal:1", "lognormal:4"});
  const double c = cfg.get<double>("c", 1.0);
  const auto n0 = resolve_n0(cfg, 1, 1000);
  const int m = cfg.get<int>("m", 4);
  const int R = cfg.get<int>("replications", 100);
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto format = cfg.get<std::string>("format", "csv");
  const auto path = cfg.raw.value("out", std::string());
  const int jobs = resolve_jobs(cfg);
  if (R < 2) throw error(errc::too_few_replications, "--replications must be at least 2");

  std::vector<point_transform> transforms;
  for (const auto& p : processes) transforms.push_back(parse_transform(p));
  const auto named = table_estimators(m);
  std::vector<estimator_config> ests;
  std::int64_t margin = 0;
  for (const auto& e : named) {
    ests.push_back(e.cfg);
    margin = std::max(margin, required_margin(e.cfg.inc, m));
  }
  margin = cfg.get<std::int64_t>("margin", margin);
  const auto grid = grid_spec::make(n0, margin);

  json rows = json::array();
  for (const double alpha : alphas) {
    const auto model = covariance_model::make(alpha, 1, c);
    const auto res = run_batch(model, grid, transforms, ests, R, seed, jobs);
    for (std::size_t t = 0; t < transforms.size(); ++t)
      for (std::size_t e = 0; e < ests.size(); ++e) {
        const auto st = summarize(res[t][e], alpha);
        rows.push_back({{"process", process_name(transforms[t])},
                        {"alpha", alpha},
                        {"estimator", named[e].name},
                        {"bias", st.bias},
                        {"sd", st.sd},
                        {"mse", st.mse},
                        {"mean_alpha", st.mean_alpha},
                        {"replications", st.R}});
      }
  }

  output o(path, out);
  if (format == "json") {
    o.get() << json{{"config", cfg.resolved}, {"rows", rows}}.dump(2) << '\n';
    return 0;
  }
  if (format != "csv") throw error(errc::invalid_argument, "--format must be csv or json");
  write_header(o.get(), "table1", cfg);
  o.get() << "process,alpha,estimator,bias,sd,mse,mean_alpha,replications\n";
  for (const auto& r : rows)
    o.get() << r["process"].get<std::string>() << ',' << fmt("%g", r["alpha"].get<double>()) << ','
            << r["estimator"].get<std::string>() << ',' << fmt("%.6f", r["bias"].get<double>()) << ','
            << fmt("%.6f", r["sd"].get<double>()) << ',' << fmt("%.6f", r["mse"].get<double>()) << ','
            << fmt("%.6f", r["mean_alpha"].get<double>()) << ',' << r["replications"].get<int>() << '\n';
  return 0;
}

inline int cmd_ratios(run_config& cfg, std::ostream& out) {
  const int dim = resolve_dim(cfg);
  const auto alphas = resolve_alphas(cfg, {0.1, 0.4, 0.7, 1.0, 1.3, 1.6, 1.9});
  const double c = cfg.get<double>("c", default_scale(dim));
  const auto g = parse_transform(cfg.get<std::string>("transform", "identity"));
  const auto est = resolve_estimator(cfg, dim);
  const auto sides = cfg.get<std::vector<std::int64_t>>(
      "sizes", dim == 1 ? std::vector<std::int64_t>{1000, 2000, 4000, 10000} : std::vector<std::int64_t>{50, 100, 500});
  const int R = cfg.get<int>("replications", 100);
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto margin = cfg.get<std::int64_t>("margin", required_margin(est.inc, est.m));
  const auto format = cfg.get<std::string>("format", "csv");
  const auto path = cfg.raw.value("out", std::string());
  const int jobs = resolve_jobs(cfg);

  json rows = json::array();
  for (const double alpha : alphas) {
    experiment_spec spec;
    spec.model = covariance_model::make(alpha, dim, c);
    spec.grid = grid_spec::make(dim == 1 ? multi_index(sides.front()) : multi_index(sides.front(), sides.front()), margin);
    spec.transform = g;
    spec.estimator = est;
    spec.replications = R;
    spec.master_seed = seed;
    spec.jobs = jobs;
    for (const auto& row : variance_ratio_report(spec, sides))
      rows.push_back({{"process", process_name(g)},
                      {"alpha", alpha},
                      {"increment", est.inc.name()},
                      {"side", row.side},
                      {"n", row.n},
                      {"variance", row.variance},
                      {"empirical_ratio", row.empirical_ratio},
                      {"asymptotic_ratio", row.asymptotic_ratio ? json(*row.asymptotic_ratio) : json(nullptr)},
                      {"rate", row.rate}});
  }

  output o(path, out);
  if (format == "json") {
    o.get() << json{{"config", cfg.resolved}, {"rows", rows}}.dump(2) << '\n';
    return 0;
  }
  if (format != "csv") throw error(errc::invalid_argument, "--format must be csv or json");
  write_header(o.get(), "ratios", cfg);
  o.get() << "process,alpha,increment,side,n,variance,empirical_ratio,asymptotic_ratio,rate\n";
  for (const auto& r : rows)
    o.get() << r["process"].get<std::string>() << ',' << fmt("%g", r["alpha"].get<double>()) << ','
            << r["increment"].get<std::string>() << ',' << r["side"].get<std::int64_t>() << ','
            << r["n"].get<std::int64_t>() << ',' << fmt("%.6g", r["variance"].get<double>()) << ','
            << fmt("%.4f", r["empirical_ratio"].get<double>()) << ','
            << (r["asymptotic_ratio"].is_null() ? std::string("NA") : fmt("%.4f", r["asymptotic_ratio"].get<double>()))
            << ',' << r["rate"].get<std::string>() << '\n';
  return 0;
}

inline int cmd_mse_vs_m(run_config& cfg, std::ostream& out) {
  const auto alphas = resolve_alphas(cfg, {0.1, 0.3, 1.0, 1.7, 1.9});
  const auto ms = cfg.get<std::vector<int>>("ms", {2, 4, 6, 8, 10});
  const double c = cfg.get<double>("c", 1.0);
  const auto g = parse_transform(cfg.get<std::string>("transform", "chisq1"));
  const auto n0 = resolve_n0(cfg, 1, 2000);
  const int R = cfg.get<int>("replications", 100);
  const auto seed = cfg.get<std::uint64_t>("seed", 1);
  const auto format = cfg.get<std::string>("format", "csv");
  const auto path = cfg.raw.value("out", std::string());
  const int jobs = resolve_jobs(cfg);

  std::vector<std::string> names;
  std::vector<int> m_of;
  std::vector<estimator_config> ests;
  std::int64_t margin = 0;
  for (const int m : ms)
    for (const auto& e : table_estimators(m)) {
      names.push_back(e.name);
      m_of.push_back(m);
      ests.push_back(e.cfg);
      margin = std::max(margin, required_margin(e.cfg.inc, m));
    }
  margin = cfg.get<std::int64_t>("margin", margin);
  const auto grid = grid_spec::make(n0, margin);

  json rows = json::array();
  for (const double alpha : alphas) {
    const auto res = run_batch(covariance_model::make(alpha, 1, c), grid, {g}, ests, R, seed, jobs);
    for (const auto* est_name : {"ols0", "ols1", "gls1"})
      for (std::size_t e = 0; e < ests.size(); ++e)
        if (names[e] == est_name)
          rows.push_back({{"process", process_name(g)},
                          {"alpha", alpha},
                          {"estimator", names[e]},
                          {"m", m_of[e]},
                          {"mse", summarize(res[0][e], alpha).mse}});
  }

  output o(path, out);
  if (format == "json") {
    o.get() << json{{"config", cfg.resolved}, {"rows", rows}}.dump(2) << '\n';
    return 0;
  }
  if (format != "csv") throw error(errc::invalid_argument, "--format must be csv or json");
  write_header(o.get(), "mse-vs-m", cfg);
  o.get() << "process,alpha,estimator,m,mse\n";
  for (const auto& r : rows)
    o.get() << r["process"].get<std::string>() << ',' << fmt("%g", r["alpha"].get<double>()) << ','
            << r["estimator"].get<std::string>() << ',' << r["m"].get<int>() << ','
            << fmt("%.6f", r["mse"].get<double>()) << '\n';
  return 0;
}

inline int cmd_qq(run_config& cfg, std::ostream& out) {
  auto s = resolve_setup(cfg, 2000, 100, "diff1", "gls", 10);
  experiment_spec spec;
  spec.model = s.model;
  spec.grid = s.grid;
  spec.transform = s.transform;
  spec.estimator = s.est;
  spec.replications = cfg.get<int>("replications", 100);
  spec.master_seed = cfg.get<std::uint64_t>("seed", 1);
  spec.jobs = resolve_jobs(cfg);
  const auto format = cfg.get<std::string>("format", "csv");
  const auto path = cfg.raw.value("out", std::string());

  const auto alphas = run_experiment(spec);
  const auto qq = qq_points(alphas);
  const auto ks = ks_normality(alphas);

  output o(path, out);
  if (format == "json") {
    json pts = json::array();
    for (const auto& [z, a] : qq.points) pts.push_back({z, a});
    o.get() << json{{"config", cfg.resolved},
                    {"slope", qq.slope},
                    {"intercept", qq.intercept},
                    {"ks_statistic", ks.statistic},
                    {"ks_p_value", ks.p_value},
                    {"points", pts}}
                   .dump(2)
            << '\n';
    return 0;
  }
  if (format != "csv") throw error(errc::invalid_argument, "--format must be csv or json");
  write_header(o.get(), "qq", cfg);
  o.get() << "# quartile_line: slope=" << fmt("%.17g", qq.slope) << " intercept=" << fmt("%.17g", qq.intercept) << '\n';
  o.get() << "# ks: statistic=" << fmt("%.6f", ks.statistic) << " p_value=" << fmt("%.6f", ks.p_value)
          << " (asymptotic Kolmogorov law with estimated mean/sd; anti-conservative)\n";
  o.get() << "theoretical,sample\n";
  for (const auto& [z, a] : qq.points) o.get() << fmt("%.17g", z) << ',' << fmt("%.17g", a) << '\n';
  return 0;
}

/// Command-line options shared by every subcommand.
struct flag_values {
  std::string config;
  double alpha = 0, c = 0;
  int dim = 0, m = 0, replications = 0, jobs = 0;
  std::vector<std::int64_t> n0, sizes;
  std::int64_t margin = 0;
  std::string transform, increment, scheme, format, out;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  std::vector<std::string> processes;
  std::vector<int> ms;
};

inline std::vector<std::pair<std::string, CLI::Option*>> add_common(CLI::App* app, flag_values& f) {
  std::vector<std::pair<std::string, CLI::Option*>> opts;
  app->add_option("--config", f.config, "JSON config file; explicit flags override its values");
  opts.emplace_back("alpha", app->add_option("--alpha", f.alpha, "fractal index in (0, 2]"));
  opts.emplace_back("c", app->add_option("--c", f.c, "scale c of exp(-c|t|^alpha) (default 1 for d=1, 10 for d=2)"));
  opts.emplace_back("dim", app->add_option("--dim", f.dim, "dimension, 1 or 2"));
  opts.emplace_back("n0", app->add_option("--n0", f.n0, "points per axis (one or two integers)")->expected(1, 2));
  opts.emplace_back("margin", app->add_option("--margin", f.margin, "extra points per side (default m*J)"));
  opts.emplace_back("transform", app->add_option("--transform", f.transform,
                                                 "identity | affine:a,b | uniform | exp1 | chisq1 | lognormal:tau"));
  opts.emplace_back("increment", app->add_option("--increment", f.increment, "diff0 | diff1 | square | offset:coef list"));
  opts.emplace_back("m", app->add_option("--m", f.m, "number of dilations"));
  opts.emplace_back("scheme", app->add_option("--scheme", f.scheme, "ols | gls"));
  opts.emplace_back("replications", app->add_option("--replications", f.replications, "Monte Carlo replications"));
  opts.emplace_back("seed", app->add_option("--seed", f.seed, "master seed"));
  opts.emplace_back("format", app->add_option("--format", f.format, "output format"));
  opts.emplace_back("out", app->add_option("--out", f.out, "output path (default stdout)"));
  opts.emplace_back("jobs", app->add_option("--jobs", f.jobs, "worker threads"));
  opts.emplace_back("alphas", app->add_option("--alphas", f.alphas, "list of fractal indices")->delimiter(','));
  opts.emplace_back("processes", app->add_option("--processes", f.processes, "list of processes (transform names)")->delimiter(','));
  opts.emplace_back("sizes", app->add_option("--sizes", f.sizes, "list of side lengths")->delimiter(','));
  opts.emplace_back("ms", app->add_option("--ms", f.ms, "list of m values")->delimiter(','));
  return opts;
}

inline json flag_json(const std::string& key, const flag_values& f) {
  if (key == "alpha") return f.alpha;
  if (key == "c") return f.c;
  if (key == "dim") return f.dim;
  if (key == "n0") return f.n0;
  if (key == "margin") return f.margin;
  if (key == "transform") return f.transform;
  if (key == "increment") return f.increment;
  if (key == "m") return f.m;
  if (key == "scheme") return f.scheme;
  if (key == "replications") return f.replications;
  if (key == "seed") return f.seed;
  if (key == "format") return f.format;
  if (key == "out") return f.out;
  if (key == "jobs") return f.jobs;
  if (key == "alphas") return f.alphas;
  if (key == "processes") return f.processes;
  if (key == "sizes") return f.sizes;
  return f.ms;
}

}  // namespace detail

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractal-index estimation for point-transformed stationary Gaussian processes and fields", "fractal"};
  app.require_subcommand(1);

  struct sub {
    CLI::App* app;
    detail::flag_values flags;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
  };
  std::vector<std::unique_ptr<sub>> subs;
  std::string input;
  auto make = [&](const char* name, const char* help) {
    auto s = std::make_unique<sub>();
    s->app = app.add_subcommand(name, help);
    s->opts = detail::add_common(s->app, s->flags);
    subs.push_back(std::move(s));
    return subs.back().get();
  };
  make("simulate", "simulate one (transformed) Gaussian field and write it as CSV or binary raster");
  auto* est = make("estimate", "estimate the fractal index of a field file");
  est->app->add_option("input", input, "field file (CSV or binary raster)")->required();
  make("table1", "bias/SD/MSE over processes x alpha x estimators");
  make("ratios", "empirical and asymptotic variance ratios across sample sizes");
  make("mse-vs-m", "MSE of the three estimators as the number of dilations m varies");
  make("qq", "normal QQ points, quartile line and KS normality check of alpha_hat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  for (auto& s : subs) {
    if (!s->app->parsed()) continue;
    try {
      run_config cfg;
      if (!s->flags.config.empty()) {
        std::ifstream in(s->flags.config);
        if (!in) throw error(errc::io_error, "cannot open config '" + s->flags.config + "'");
        try {
          cfg.raw = json::parse(in);
        } catch (const std::exception& e) {
          throw error(errc::parse_error, std::string("bad config file: ") + e.what());
        }
        if (!cfg.raw.is_object()) throw error(errc::parse_error, "config file must hold a JSON object");
      }
      for (const auto& [key, opt] : s->opts)
        if (opt->count() > 0) cfg.raw[key] = detail::flag_json(key, s->flags);

      const std::string name = s->app->get_name();
      if (name == "simulate") return detail::cmd_simulate(cfg, out);
      if (name == "estimate") return detail::cmd_estimate(cfg, input, out);
      if (name == "table1") return detail::cmd_table1(cfg, out);
      if (name == "ratios") return detail::cmd_ratios(cfg, out);
      if (name == "mse-vs-m") return detail::cmd_mse_vs_m(cfg, out);
      if (name == "qq") return detail::cmd_qq(cfg, out);
    } catch (const error& e) {
      err << "error: " << e.what() << '\n';
      return exit_code(e.code());
    } catch (const nlohmann::json::exception& e) {
      err << "error: ParseError: bad configuration value: " << e.what() << '\n';
      return exit_code(errc::parse_error);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_internal;
    }
  }
  return exit_usage;
}

}  // namespace fractal::cli
