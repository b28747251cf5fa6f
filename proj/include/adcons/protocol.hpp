#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "adcons/graph.hpp"
#include "adcons/riccati.hpp"

namespace adcons {

enum class Variant {
  UnifiedDirected,     // Sigma_i = k1 (k2 + sigma_i / c_i)^mu, mu > 1
  UnifiedDirectedAlt,  // Sigma_i = k1 (k2 + sigma_i)^mu
  DirectedMuOne,       // u_i = k1 (k2 c_i + sigma_i) K xi_i
  UndirectedStatic,    // Sigma_i = 1, gamma = 0
  UndirectedExp,       // Sigma_i = 1, c_i' = e^{gamma t} xi_i^T Gamma xi_i
};

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
bool is_directed_variant(Variant v);

struct ProtocolSpec {
  Variant variant = Variant::UndirectedStatic;
  double k1 = 1.0;
  double k2 = 1.0;
  double mu = 1.0;
  double gamma = 0.0;
  Eigen::VectorXd c0;
};

// Per-agent quantities at one instant, for logging and inspection.
struct AgentControlState {
  Eigen::VectorXd xi;
  double sigma = 0.0;
  double Sigma = 1.0;
  double c = 0.0;
  Eigen::VectorXd u;
};

// xi = (L (x) I_n) x, evaluated agent by agent as sum_j a_ij (x_i - x_j).
Eigen::VectorXd neighborhood_error(const WeightedDigraph& g, const Eigen::VectorXd& x, int n);

double sigma_form(const Eigen::Ref<const Eigen::VectorXd>& xi_i, const Eigen::MatrixXd& P);

// Throws NonpositiveGain when c <= 0.
double aux_gain(const ProtocolSpec& spec, double sigma, double c);

// Scalar multiplying K xi_i in u_i for the given variant.
double input_scale(const ProtocolSpec& spec, double sigma, double c);

Eigen::VectorXd control_input(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::VectorXd& c,
                              const Eigen::MatrixXd& K, const Eigen::MatrixXd& P);

Eigen::VectorXd gain_rate(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::MatrixXd& Gamma,
                          double t);

AgentControlState agent_state(const ProtocolSpec& spec, const Eigen::VectorXd& xi, const Eigen::VectorXd& c,
                              const Eigen::MatrixXd& K, const Eigen::MatrixXd& P, int agent);

enum class Severity { Hard, Warning, Info };

struct ValidationCheck {
  std::string name;
  bool passed = true;
  Severity severity = Severity::Hard;
  std::string message;
  bool topology = false;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  std::optional<double> gamma_lower;  // 1 / lambda_max(P)
  std::optional<double> gamma_upper;  // 3 / (2 lambda_max(P)), exclusive

  bool ok() const;           // no failed hard check
  bool topology_ok() const;  // no failed hard topology check
  std::vector<std::string> failures() const;
  std::string to_text() const;
};

// Topology requirement of the variant alone; the checks validate() appends.
ValidationReport validate_topology(Variant variant, const WeightedDigraph& g);

ValidationReport validate(const ProtocolSpec& spec, const RiccatiSolution& sol, const WeightedDigraph& g);

}  // namespace adcons
