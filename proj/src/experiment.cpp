#include "adcons/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "adcons/error.hpp"
#include "adcons/graph.hpp"

namespace adcons {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sha256_hex(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[k]);
  return os.str();
}

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void print_matrix(std::ostream& os, const std::string& name, const Eigen::MatrixXd& m) {
  os << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "  " : "") << std::setw(24) << format_number(m(i, j));
    os << '\n';
  }
}

std::string join_indices(const std::vector<int>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k] + 1;
  os << '}';
  return os.str();
}

std::string join_vector(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << '[';
  for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? ", " : "") << format_number(v(k));
  os << ']';
  return os.str();
}

// Files are written through this so the manifest can list them afterwards.
class RunDirectory {
 public:
  explicit RunDirectory(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  std::ofstream open(const std::string& name) {
    names_.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return out;
  }

  std::vector<FileRecord> inventory() const {
    std::vector<FileRecord> out;
    for (const auto& n : names_) out.push_back({n, sha256_hex(dir_ / n), fs::file_size(dir_ / n)});
    return out;
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

void write_trajectory(std::ostream& os, const Trajectory& tr, int N, int n, int m) {
  os << 't';
  for (int i = 1; i <= N; ++i)
    for (int d = 1; d <= n; ++d) os << ",x_" << i << '_' << d;
  for (int i = 1; i <= N; ++i) os << ",c_" << i;
  for (int i = 1; i <= N; ++i)
    for (int d = 1; d <= m; ++d) os << ",u_" << i << '_' << d;
  os << '\n';
  for (Eigen::Index k = 0; k < tr.samples(); ++k) {
    os << format_number(tr.times[static_cast<std::size_t>(k)]);
    for (Eigen::Index c = 0; c < tr.states.cols(); ++c) os << ',' << format_number(tr.states(k, c));
    for (Eigen::Index c = 0; c < tr.gains.cols(); ++c) os << ',' << format_number(tr.gains(k, c));
    for (Eigen::Index c = 0; c < tr.inputs.cols(); ++c) os << ',' << format_number(tr.inputs(k, c));
    os << '\n';
  }
}

void write_ms_curves(std::ostream& os, const MsCurves& mc) {
  os << 't';
  for (int i = 0; i < mc.N; ++i)
    if (i != mc.reference_agent) os << ",ms_err_" << i + 1;
  os << ",ms_theta";
  for (int i = 0; i < mc.N; ++i)
    if (i != mc.reference_agent) os << ",se_" << i + 1;
  os << '\n';
  for (std::size_t k = 0; k < mc.times.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    os << format_number(mc.times[k]);
    for (int i = 0; i < mc.N; ++i)
      if (i != mc.reference_agent) os << ',' << format_number(mc.pair_ms(r, i));
    os << ',' << format_number(mc.theta_ms(r));
    for (int i = 0; i < mc.N; ++i)
      if (i != mc.reference_agent) os << ',' << format_number(mc.pair_se(r, i));
    os << '\n';
  }
}

// Minimal line plot; log scale on y when requested.
void write_svg(std::ostream& os, const std::string& title, const std::vector<double>& t,
               const std::vector<Eigen::VectorXd>& series, bool log_y) {
  const double W = 640, H = 400, pad = 50;
  double ymin = INFINITY, ymax = -INFINITY;
  auto tr = [&](double v) { return log_y ? std::log10(std::max(v, 1e-300)) : v; };
  for (const auto& s : series)
    for (Eigen::Index k = 0; k < s.size(); ++k) {
      if (log_y && !(s(k) > 0.0)) continue;
      ymin = std::min(ymin, tr(s(k)));
      ymax = std::max(ymax, tr(s(k)));
    }
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double t0 = t.empty() ? 0.0 : t.front();
  const double t1 = t.size() < 2 ? t0 + 1.0 : t.back();
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n"
     << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[s % 7] << "\" points=\"";
    for (Eigen::Index k = 0; k < series[s].size(); ++k) {
      if (log_y && !(series[s](k) > 0.0)) continue;
      const double x = pad + (t[static_cast<std::size_t>(k)] - t0) / (t1 - t0) * (W - 2 * pad);
      const double y = H - pad - (tr(series[s](k)) - ymin) / (ymax - ymin) * (H - 2 * pad);
      os << x << ',' << y << ' ';
    }
    os << "\"/>\n";
  }
  os << "<text x=\"" << pad << "\" y=\"" << H - 15 << "\" font-family=\"sans-serif\" font-size=\"11\">t in [" << t0
     << ", " << t1 << "], y " << (log_y ? "log10 " : "") << "in [" << ymin << ", " << ymax << "]</text>\n</svg>\n";
}

json validation_json(const ValidationReport& r, bool overridden) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    const char* sev = c.severity == Severity::Hard ? "hard" : (c.severity == Severity::Warning ? "warning" : "info");
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"severity", sev}, {"message", c.message}});
  }
  json out = {{"ok", r.ok()}, {"override", overridden}, {"checks", checks}};
  if (r.gamma_lower) out["gamma_window"] = {*r.gamma_lower, *r.gamma_upper};
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();
  RunResult res;

  const SystemModel model = make_model(cfg);
  const WeightedDigraph graph = make_graph(cfg);
  const ProtocolSpec spec = make_protocol(cfg);
  res.x0 = resolve_x0(cfg);

  try {
    res.sol = solve_sare(model);
  } catch (const Error& e) {
    res.exit_code = exit_code::sare;
    res.message = e.what();
    return res;
  }
  log << "SARE: residual " << format_number(res.sol->residual) << ", lambda_max(P) "
      << format_number(res.sol->lambda_max_P) << ", " << res.sol->iterations << " iterations\n";

  res.report = validate(spec, *res.sol, graph);
  if (!res.report.topology_ok()) {
    res.exit_code = exit_code::validation;
    res.message = "topology requirement failed:\n" + res.report.to_text();
    return res;
  }
  if (!res.report.ok()) {
    if (!options.force) {
      res.exit_code = exit_code::validation;
      res.message = "protocol validation failed (use --force to run anyway):\n" + res.report.to_text();
      return res;
    }
    res.overridden = true;
    for (const auto& f : res.report.failures()) log << "override: " << f << '\n';
  }

  SimConfig sim;
  sim.model = model;
  sim.graph = graph;
  sim.spec = spec;
  sim.sol = *res.sol;
  sim.h = cfg.simulation.h;
  sim.T = cfg.simulation.T;
  sim.output_stride = cfg.simulation.output_stride;
  sim.master_seed = cfg.simulation.master_seed;
  sim.x0 = res.x0;
  sim.blowup_threshold = cfg.simulation.blowup_threshold;

  res.ensemble = run_ensemble(sim, cfg.simulation.M, options.threads);
  std::vector<Trajectory> completed;
  for (const auto& tr : res.ensemble) {
    if (tr.terminated_early()) {
      res.blowup_paths.push_back(tr.path_index);
    } else {
      completed.push_back(tr);
    }
  }
  log << "ensemble: " << res.ensemble.size() << " paths, " << res.blowup_paths.size() << " blow-ups\n";
  if (!res.blowup_paths.empty()) {
    res.exit_code = exit_code::blowup;
    std::ostringstream os;
    os << res.blowup_paths.size() << " path(s) blew up, first at path " << res.blowup_paths.front() << ", t = "
       << res.ensemble[res.blowup_paths.front()].termination_time;
    res.message = os.str();
  }

  if (!completed.empty()) {
    res.curves = ms_curves(completed);
    res.time_to_threshold = time_to_fraction(res.curves->times, res.curves->theta_ms, kThresholdFraction);
    try {
      res.rate = fit_exponential_rate_auto(res.curves->times, res.curves->theta_ms);
      res.rate->theory_delta = 1.0 / res.sol->lambda_max_P;
    } catch (const Error& e) {
      log << "rate fit skipped: " << e.what() << '\n';
    }
  }
  if (!options.write_files) return res;

  const int N = graph.size(), n = model.n(), m = model.m();
  RunDirectory dir(options.out ? *options.out : fs::path(cfg.output.directory));
  res.directory = dir.path();
  const auto& out = cfg.output;

  if (out.emits("trajectories")) {
    for (auto p : out.trajectory_paths) {
      auto f = dir.open("trajectory_path" + std::to_string(p) + ".csv");
      write_trajectory(f, res.ensemble[p], N, n, m);
    }
  }
  if (res.curves && out.emits("ms_curves")) {
    auto f = dir.open("ms_curves.csv");
    write_ms_curves(f, *res.curves);
  }
  if (res.rate && out.emits("rate_fit")) {
    const auto& r = *res.rate;
    {
      auto f = dir.open("rate_fit.csv");
      f << "delta_hat,t_lo,t_hi,r_squared,theory_delta,points\n"
        << format_number(r.delta_hat) << ',' << format_number(r.t_lo) << ',' << format_number(r.t_hi) << ','
        << format_number(r.r_squared) << ',' << format_number(r.theory_delta) << ',' << r.points << '\n';
    }
    auto f = dir.open("rate_fit.txt");
    f << "quantity: E|theta|^2\n"
      << "delta_hat: " << format_number(r.delta_hat) << '\n'
      << "window: [" << format_number(r.t_lo) << ", " << format_number(r.t_hi) << "]\n"
      << "r_squared: " << format_number(r.r_squared) << '\n'
      << "theory_delta: " << format_number(r.theory_delta) << '\n'
      << "points: " << r.points << '\n';
  }
  if (out.emits("gains")) {
    auto f = dir.open("gains.csv");
    f << "path,agent,c_final,plateau\n";
    for (const auto& tr : res.ensemble) {
      const auto st = gain_convergence(tr, 0.2);
      for (std::size_t i = 0; i < st.size(); ++i) {
        f << tr.path_index << ',' << i + 1 << ',' << format_number(st[i].c_final) << ',' << (st[i].plateau ? 1 : 0)
          << '\n';
      }
    }
  }
  if (out.emits("inputs")) {
    auto f = dir.open("inputs.csv");
    f << "path,agent,sup_norm,argmax_t\n";
    for (const auto& tr : res.ensemble) {
      const auto sup = input_sup(tr);
      for (std::size_t i = 0; i < sup.size(); ++i) {
        f << tr.path_index << ',' << i + 1 << ',' << format_number(sup[i].sup) << ','
          << format_number(sup[i].argmax_time) << '\n';
      }
    }
  }
  if (res.curves && out.emits("lyapunov") && is_connected_undirected(graph)) {
    const Eigen::MatrixXd L = build_laplacian(graph);
    const Eigen::VectorXd psi = default_psi(L);
    std::vector<Eigen::VectorXd> scaled, check, full;
    for (const auto& tr : res.ensemble) {
      if (tr.terminated_early()) continue;
      auto ly = lyapunov_monitor(tr, res.sol->P, L, psi, spec.gamma);
      scaled.push_back(std::move(ly.scaled));
      check.push_back(std::move(ly.V3_check));
      full.push_back(std::move(ly.V3));
    }
    const SeriesStats s = series_stats(scaled), c = series_stats(check), v = series_stats(full);
    auto f = dir.open("lyapunov.csv");
    f << "t,scaled_mean,scaled_se,V3_check_mean,V3_mean\n";
    for (std::size_t k = 0; k < res.curves->times.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      f << format_number(res.curves->times[k]) << ',' << format_number(s.mean(r)) << ',' << format_number(s.se(r))
        << ',' << format_number(c.mean(r)) << ',' << format_number(v.mean(r)) << '\n';
    }
  }
  if (options.emit_plots && res.curves) {
    {
      auto f = dir.open("ms_theta.svg");
      write_svg(f, "E|theta(t)|^2", res.curves->times, {res.curves->theta_ms}, true);
    }
    const auto& tr = res.ensemble[out.trajectory_paths.empty() ? 0 : out.trajectory_paths.front()];
    std::vector<Eigen::VectorXd> gains;
    for (Eigen::Index i = 0; i < tr.gains.cols(); ++i) gains.push_back(tr.gains.col(i));
    auto f = dir.open("gains_path" + std::to_string(tr.path_index) + ".svg");
    write_svg(f, "c_i(t), path " + std::to_string(tr.path_index), tr.times, gains, false);
  }

  res.files = dir.inventory();

  json manifest;
  manifest["config"] = to_json(cfg);
  manifest["x0"] = std::vector<double>(res.x0.data(), res.x0.data() + res.x0.size());
  const auto& sol = *res.sol;
  manifest["sare"] = {{"P", matrix_json(sol.P)},
                      {"K", matrix_json(sol.K)},
                      {"Gamma", matrix_json(sol.Gamma)},
                      {"residual", sol.residual},
                      {"lambda_max_P", sol.lambda_max_P},
                      {"iterations", sol.iterations}};
  if (cfg.model.reference_P) {
    const Eigen::MatrixXd Pref = row_major(*cfg.model.reference_P, n, n);
    manifest["sare"]["reference_P"] = {{"P", matrix_json(Pref)}, {"residual", sare_residual(model, Pref)}};
  }
  manifest["validation"] = validation_json(res.report, res.overridden);
  json blow = json::array();
  for (auto p : res.blowup_paths) blow.push_back({{"path", p}, {"t", res.ensemble[p].termination_time}});
  manifest["outcome"] = {{"exit_code", res.exit_code}, {"paths", res.ensemble.size()}, {"blowups", blow},
                         {"partial", !res.blowup_paths.empty()}};
  if (res.time_to_threshold) manifest["outcome"]["time_to_threshold"] = *res.time_to_threshold;
  json files = json::array();
  for (const auto& f : res.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  manifest["files"] = files;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  manifest["provenance"] = {{"master_seed", cfg.simulation.master_seed},
                            {"path_seed", "splitmix64(splitmix64(master_seed) ^ (path * 0xD1B54A32D192ED03 + 1))"},
                            {"rng", "mt19937_64 + std::normal_distribution"},
                            {"threads", options.threads},
                            {"started_utc", started_utc},
                            {"wall_clock_seconds", wall}};
  std::ofstream mf(dir.path() / "manifest.json");
  mf << manifest.dump(2) << '\n';
  return res;
}

namespace {

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::NotStabilizable:
      case ErrorCode::DivergedIteration: return exit_code::sare;
      default: return exit_code::config;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config;
  }
}

}  // namespace

int cmd_sare(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const SystemModel model = make_model(cfg);
    const RiccatiSolution sol = solve_sare(model);
    print_matrix(out, "P", sol.P);
    print_matrix(out, "K", sol.K);
    print_matrix(out, "Gamma", sol.Gamma);
    out << "residual = " << format_number(sol.residual) << '\n'
        << "lambda_max(P) = " << format_number(sol.lambda_max_P) << '\n'
        << "delta = " << format_number(1.0 / sol.lambda_max_P) << '\n'
        << "gamma window = [" << format_number(1.0 / sol.lambda_max_P) << ", "
        << format_number(1.5 / sol.lambda_max_P) << ")\n"
        << "iterations = " << sol.iterations << '\n';
    if (cfg.model.reference_P) {
      const Eigen::MatrixXd Pref = row_major(*cfg.model.reference_P, model.n(), model.n());
      out << "reference_P residual = " << format_number(sare_residual(model, Pref)) << '\n';
    }
    return exit_code::ok;
  });
}

int cmd_graph_check(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const WeightedDigraph g = make_graph(cfg);
    const Variant variant = *parse_variant(cfg.protocol.variant);
    const SccResult scc = strongly_connected_components(g);
    const bool tree = has_spanning_tree(g);
    const Eigen::MatrixXd L = build_laplacian(g);
    out << "agents: " << g.size() << " (numbered from 1)\n"
        << "symmetric: " << (g.is_symmetric() ? "yes" : "no") << '\n'
        << "strongly connected components: " << scc.count << '\n'
        << "spanning tree: " << (tree ? "yes" : "no") << '\n'
        << "rank(L) = " << numerical_rank(L) << '\n';
    if (tree) {
      try {
        const auto d = decompose_leader_follower(g);
        out << "leaders: " << join_indices(d.leader_indices) << '\n'
            << "followers: " << join_indices(d.follower_indices) << '\n'
            << "r = " << join_vector(d.r) << '\n';
        if (d.follower_count() > 0) out << "s = " << join_vector(d.s) << '\n';
        const auto sd = spectral_diagnostics(d);
        if (sd.lambda2_L11_tilde) out << "lambda_2(L11~) = " << format_number(*sd.lambda2_L11_tilde) << '\n';
        if (sd.lambda1_L22_tilde) out << "lambda_1(L22~) = " << format_number(*sd.lambda1_L22_tilde) << '\n';
        if (sd.sigma_max_SL21) out << "sigma_max(S L21) = " << format_number(*sd.sigma_max_SL21) << '\n';
      } catch (const Error& e) {
        out << "decomposition: " << e.what() << '\n';
      }
    }
    if (g.is_symmetric()) {
      const auto sd = spectral_diagnostics(L);
      out << "lambda_2(L) = " << format_number(*sd.lambda2_undirected) << '\n';
    }
    const ValidationReport topo = validate_topology(variant, g);
    out << "variant " << to_string(variant) << ":\n" << topo.to_text();
    return topo.topology_ok() ? exit_code::ok : exit_code::validation;
  });
}

int cmd_run(const fs::path& config_path, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_config(config_path);
    const RunResult res = run_experiment(cfg, options, out);
    if (res.exit_code != exit_code::ok) err << res.message << '\n';
    if (!res.files.empty()) out << "wrote " << res.files.size() + 1 << " files to " << res.directory.string() << '\n';
    if (res.time_to_threshold) out << "time to 1e-2 of initial E|theta|^2: " << *res.time_to_threshold << '\n';
    return res.exit_code;
  });
}

int cmd_sweep(const fs::path& config_path, const std::string& key, const std::vector<std::string>& values,
              const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    if (values.empty()) {
      err << "error: sweep needs at least one value\n";
      return exit_code::config;
    }
    const json base = load_config_json(config_path);
    std::vector<ExperimentConfig> runs;
    for (const auto& v : values) {
      json doc = base;
      set_scalar(doc, key, v);
      runs.push_back(parse_config(doc));
    }

    const fs::path root = options.out ? *options.out : fs::path(runs.front().output.directory);
    struct Row {
      std::string value;
      int code;
      std::optional<double> ttt;
      std::optional<RateFit> rate;
    };
    std::vector<Row> rows;
    int first_failure = exit_code::ok;
    for (std::size_t k = 0; k < runs.size(); ++k) {
      RunOptions sub = options;
      sub.out = root / (key + "=" + values[k]);
      out << "[" << key << " = " << values[k] << "]\n";
      RunResult res;
      try {
        res = run_experiment(runs[k], sub, out);
      } catch (const Error& e) {
        res.exit_code = exit_code::config;
        res.message = e.what();
      }
      if (res.exit_code != exit_code::ok) err << key << " = " << values[k] << ": " << res.message << '\n';
      rows.push_back({values[k], res.exit_code, res.time_to_threshold, res.rate});
      if (res.exit_code != exit_code::ok && first_failure == exit_code::ok) first_failure = res.exit_code;
      if (res.exit_code != exit_code::ok && !options.keep_going) break;
    }

    fs::create_directories(root);
    std::ofstream csv(root / "comparison.csv");
    csv << "value,exit_code,time_to_threshold,delta_hat,r_squared\n";
    for (const auto& r : rows) {
      csv << r.value << ',' << r.code << ',' << (r.ttt ? format_number(*r.ttt) : "") << ','
          << (r.rate ? format_number(r.rate->delta_hat) : "") << ',' << (r.rate ? format_number(r.rate->r_squared) : "")
          << '\n';
    }
    out << "comparison: " << (root / "comparison.csv").string() << '\n';
    return first_failure;
  });
}

}  // namespace adcons
