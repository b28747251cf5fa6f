#include "adcons/protocol.hpp"

#include <cmath>
#include <sstream>

#include "adcons/error.hpp"

namespace adcons {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::UnifiedDirected: return "UnifiedDirected";
    case Variant::UnifiedDirectedAlt: return "UnifiedDirectedAlt";
    case Variant::DirectedMuOne: return "DirectedMuOne";
    case Variant::UndirectedStatic: return "UndirectedStatic";
    case Variant::UndirectedExp: return "UndirectedExp";
  }
  return "Unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  for (Variant v : {Variant::UnifiedDirected, Variant::UnifiedDirectedAlt, Variant::DirectedMuOne,
                    Variant::UndirectedStatic, Variant::UndirectedExp}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

bool is_directed_variant(Variant v) {
  return v == Variant::UnifiedDirected || v == Variant::UnifiedDirectedAlt || v == Variant::DirectedMuOne;
}

Eigen::VectorXd neighborhood_error(const WeightedDigraph& g, const Eigen::VectorXd& x, int n) {
  const int N = g.size();
  if (n < 1 || x.size() != static_cast<Eigen::Index>(N) * n) {
    throw Error(ErrorCode::DimensionMismatch, "stacked state length must be N * n");
  }
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(x.size());
  for (int i = 0; i < N; ++i) {
    auto xi_i = xi.segment(i * n, n);
    const auto x_i = x.segment(i * n, n);
    for (int j = 0; j < N; ++j) {
      const double a = g.weight(i, j);
      if (a > 0.0) xi_i += a * (x_i - x.segment(j * n, n));
    }
  }
  return xi;
}

double sigma_form(const Eigen::Ref<const Eigen::VectorXd>& xi_i, const Eigen::MatrixXd& P) {
  return xi_i.dot(P * xi_i);
}

double aux_gain(const ProtocolSpec& spec, double sigma, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::NonpositiveGain, "adaptive gain must be positive");
  switch (spec.variant) {
    case Variant::UnifiedDirected: return spec.k1 * std::pow(spec.k2 + sigma / c, spec.mu);
    case Variant::UnifiedDirectedAlt: return spec.k1 * std::pow(spec.k2 + sigma, spec.mu);
    case Variant::DirectedMuOne: return spec.k1 * (spec.k2 + sigma / c);
    case Variant::UndirectedStatic:
    case Variant::UndirectedExp: return 1.0;
  }
  return 1.0;
}

double input_scale(const ProtocolSpec& spec, double sigma, double c) {
  switch (spec.variant) {
    case Variant::UnifiedDirected:
    case Variant::UnifiedDirectedAlt: return c * aux_gain(spec, sigma, c);
    case Variant::DirectedMuOne: return spec.k1 * (spec.k2 * c + sigma);
    case Variant::UndirectedStatic:
    case Variant::UndirectedExp: return c;
  }
  return c;
}

Eigen::VectorXd control_input(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::VectorXd& c,
                              const Eigen::MatrixXd& K, const Eigen::MatrixXd& P) {
  const auto N = c.size();
  const auto n = K.cols();
  const auto m = K.rows();
  if (xi.size() != N * n || P.rows() != n || P.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "control_input: xi, c, K and P disagree");
  }
  Eigen::VectorXd u(N * m);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto xi_i = xi.segment(i * n, n);
    const double sigma = sigma_form(xi_i, P);
    u.segment(i * m, m) = input_scale(spec, sigma, c(i)) * (K * xi_i);
  }
  return u;
}

Eigen::VectorXd gain_rate(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::MatrixXd& Gamma,
                          double t) {
  const auto n = Gamma.rows();
  if (n < 1 || xi.size() % n != 0) throw Error(ErrorCode::DimensionMismatch, "gain_rate: xi length");
  const auto N = xi.size() / n;
  const double weight = spec.gamma == 0.0 ? 1.0 : std::exp(spec.gamma * t);
  Eigen::VectorXd rate(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const auto xi_i = xi.segment(i * n, n);
    rate(i) = weight * xi_i.dot(Gamma * xi_i);
  }
  return rate;
}

AgentControlState agent_state(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::VectorXd& c,
                              const Eigen::MatrixXd& K, const Eigen::MatrixXd& P, int agent) {
  const auto n = K.cols();
  AgentControlState s;
  s.xi = xi.segment(agent * n, n);
  s.sigma = sigma_form(s.xi, P);
  s.c = c(agent);
  s.Sigma = aux_gain(spec, s.sigma, s.c);
  s.u = input_scale(spec, s.sigma, s.c) * (K * s.xi);
  return s;
}

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed && c.severity == Severity::Hard) return false;
  }
  return true;
}

bool ValidationReport::topology_ok() const {
  for (const auto& c : checks) {
    if (c.topology && !c.passed && c.severity == Severity::Hard) return false;
  }
  return true;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed && c.severity == Severity::Hard) out.push_back(c.message);
  }
  return out;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    std::string_view tag = "PASS";
    if (!c.passed) tag = c.severity == Severity::Hard ? "FAIL" : (c.severity == Severity::Warning ? "WARN" : "NOTE");
    os << tag << "  " << c.name << ": " << c.message << '\n';
  }
  os << "verdict: " << (ok() ? "ok" : "hypotheses violated") << '\n';
  return os.str();
}

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(ValidationReport& report) : report_(report) {}

  void require(std::string name, bool ok, std::string fail_msg, std::string pass_msg = "ok",
               Severity severity = Severity::Hard, bool topology = false) {
    report_.checks.push_back({std::move(name), ok, severity, ok ? std::move(pass_msg) : std::move(fail_msg), topology});
  }

 private:
  ValidationReport& report_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

ValidationReport validate_topology(Variant variant, const WeightedDigraph& g) {
  ValidationReport report;
  ReportBuilder b(report);
  const bool symmetric = g.is_symmetric();
  if (is_directed_variant(variant)) {
    b.require("topology.spanning_tree", has_spanning_tree(g), "digraph has no spanning tree", "spanning tree present",
              Severity::Hard, true);
    b.require("topology.directed", !symmetric, "directed variant on undirected graph", "asymmetric adjacency",
              Severity::Warning, true);
  } else {
    b.require("topology.symmetric", symmetric, "undirected variant on directed graph", "symmetric adjacency",
              Severity::Hard, true);
    b.require("topology.connected", is_connected_undirected(g), "undirected graph is not connected", "connected",
              Severity::Hard, true);
  }
  return report;
}

ValidationReport validate(const ProtocolSpec& spec, const RiccatiSolution& sol, const WeightedDigraph& g) {
  ValidationReport report;
  ReportBuilder b(report);
  const int N = g.size();
  const bool sized = spec.c0.size() == N;

  b.require("c0.size", sized, "c0 has " + std::to_string(spec.c0.size()) + " entries, graph has " + std::to_string(N));
  if (sized) b.require("c0.positive", spec.c0.minCoeff() > 0.0, "c_i(0) > 0 required");

  switch (spec.variant) {
    case Variant::UnifiedDirected:
    case Variant::UnifiedDirectedAlt: {
      b.require("mu", spec.mu > 1.0, "mu > 1 required (mu = " + fmt(spec.mu) + ")");
      b.require("k1", spec.k1 >= 1.0, "k1 >= 1 required");
      b.require("k2", spec.k2 >= 1.0, "k2 >= 1 required");
      if (sized) b.require("c0.lower", spec.c0.minCoeff() >= 1.0, "c_i(0) >= 1 required");
      b.require("gamma", spec.gamma == 0.0, "gamma = 0 required for directed variants");
      // Sigma_i(0) >= k1 k2^mu follows from the bounds above; reported, not enforced.
      const double floor = spec.k1 * std::pow(spec.k2, spec.mu);
      b.require("Sigma0", floor >= 1.0, "k1 k2^mu = " + fmt(floor) + " < 1", "Sigma_i(0) >= k1 k2^mu = " + fmt(floor),
                Severity::Info);
      break;
    }
    case Variant::DirectedMuOne:
      b.require("k1", spec.k1 > 0.0, "k1 > 0 required");
      b.require("k2", spec.k2 > 0.0, "k2 > 0 required");
      b.require("gamma", spec.gamma == 0.0, "gamma = 0 required for directed variants");
      break;
    case Variant::UndirectedStatic:
      b.require("gamma", spec.gamma == 0.0, "gamma = 0 required for UndirectedStatic");
      break;
    case Variant::UndirectedExp: {
      const double lmax = sol.lambda_max_P;
      if (lmax > 0.0) {
        report.gamma_lower = 1.0 / lmax;
        report.gamma_upper = 1.5 / lmax;
        const bool inside = spec.gamma >= *report.gamma_lower && spec.gamma < *report.gamma_upper;
        const std::string window = "[" + fmt(*report.gamma_lower) + ", " + fmt(*report.gamma_upper) + ")";
        b.require("gamma.window", inside, "gamma = " + fmt(spec.gamma) + " outside " + window,
                  "gamma = " + fmt(spec.gamma) + " in " + window);
      } else {
        b.require("gamma.window", false, "lambda_max(P) unavailable");
      }
      break;
    }
  }

  const ValidationReport topo = validate_topology(spec.variant, g);
  report.checks.insert(report.checks.end(), topo.checks.begin(), topo.checks.end());
  return report;
}

}  // namespace adcons
