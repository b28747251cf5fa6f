#include "adcons/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "adcons/error.hpp"
#include "adcons/sde.hpp"

namespace adcons {

using nlohmann::json;

bool OutputBlock::emits(const std::string& kind) const {
  return std::find(emit.begin(), emit.end(), kind) != emit.end();
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, "'" + key + "': " + what);
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Typed access to one JSON object; rejects keys outside the allowed set.
class Block {
 public:
  Block(const json& obj, std::string prefix, std::initializer_list<const char*> allowed)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) fail(prefix_, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : obj_.items()) {
      if (!ok.contains(item.key())) fail(key(item.key()), "unknown key");
    }
  }

  std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }
  bool has(const char* k) const { return obj_.contains(k); }

  const json& at(const char* k) const {
    if (!obj_.contains(k)) fail(key(k), "missing required key");
    return obj_.at(k);
  }

  double number(const char* k) const {
    const json& v = at(k);
    if (!v.is_number()) fail(key(k), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key(k), "expected a finite number");
    return d;
  }
  double number(const char* k, double fallback) const { return has(k) ? number(k) : fallback; }

  std::int64_t integer(const char* k) const {
    const json& v = at(k);
    if (!v.is_number_integer()) fail(key(k), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const char* k, std::int64_t fallback) const { return has(k) ? integer(k) : fallback; }

  std::uint64_t unsigned_integer(const char* k) const {
    const json& v = at(k);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      fail(key(k), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }

  std::vector<double> numbers(const char* k, std::size_t expected) const {
    const json& v = at(k);
    if (!v.is_array()) fail(key(k), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(key(k), "expected an array of numbers");
      out.push_back(e.get<double>());
      if (!std::isfinite(out.back())) fail(key(k), "entries must be finite");
    }
    if (out.size() != expected) {
      fail(key(k), "expected " + std::to_string(expected) + " entries, got " + std::to_string(out.size()));
    }
    return out;
  }

  std::string string(const char* k) const {
    const json& v = at(k);
    if (!v.is_string()) fail(key(k), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* k) const {
    const json& v = at(k);
    if (!v.is_boolean()) fail(key(k), "expected true or false");
    return v.get<bool>();
  }

 private:
  const json& obj_;
  std::string prefix_;
};

std::optional<std::array<double, 2>> parse_uniform(const std::string& text) {
  static const std::regex pattern(R"(^\s*uniform\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\s*$)");
  std::smatch match;
  if (!std::regex_match(text, match, pattern)) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string a = match[1].str(), b = match[2].str();
    const double lo = std::stod(a, &used);
    if (used != a.size()) return std::nullopt;
    const double hi = std::stod(b, &used);
    if (used != b.size()) return std::nullopt;
    return std::array<double, 2>{lo, hi};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Eigen::MatrixXd row_major(const std::vector<double>& values, int rows, int cols) {
  if (values.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw Error(ErrorCode::DimensionMismatch, "row-major data has the wrong length");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i) * cols + j];
  }
  return m;
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  Block root(doc, "", {"model", "graph", "protocol", "simulation", "output"});

  {
    Block b(root.at("model"), "model", {"n", "m", "A", "B", "C", "reference_P"});
    const auto n = b.integer("n");
    const auto m = b.integer("m");
    if (n < 1) fail("model.n", "must be >= 1");
    if (m < 1) fail("model.m", "must be >= 1");
    cfg.model.n = static_cast<int>(n);
    cfg.model.m = static_cast<int>(m);
    cfg.model.A = b.numbers("A", static_cast<std::size_t>(n * n));
    cfg.model.B = b.numbers("B", static_cast<std::size_t>(n * m));
    cfg.model.C = b.numbers("C", static_cast<std::size_t>(n * n));
    if (b.has("reference_P")) cfg.model.reference_P = b.numbers("reference_P", static_cast<std::size_t>(n * n));
  }

  {
    Block b(root.at("graph"), "graph", {"N", "adjacency", "undirected"});
    const auto N = b.integer("N");
    if (N < 2) fail("graph.N", "must be >= 2");
    cfg.graph.N = static_cast<int>(N);
    cfg.graph.adjacency = b.numbers("adjacency", static_cast<std::size_t>(N * N));
    try {
      WeightedDigraph g(row_major(cfg.graph.adjacency, cfg.graph.N, cfg.graph.N));
      const bool symmetric = g.is_symmetric();
      if (b.has("undirected")) {
        cfg.graph.undirected = b.boolean("undirected");
        if (cfg.graph.undirected != symmetric) {
          fail("graph.undirected", symmetric ? "adjacency is symmetric but flagged directed"
                                             : "flagged undirected but adjacency is not symmetric");
        }
      } else {
        cfg.graph.undirected = symmetric;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigInvalid) throw;
      fail("graph.adjacency", e.what());
    }
  }

  {
    Block b(root.at("protocol"), "protocol", {"variant", "k1", "k2", "mu", "gamma", "c0"});
    cfg.protocol.variant = b.string("variant");
    if (!parse_variant(cfg.protocol.variant)) fail("protocol.variant", "unknown variant '" + cfg.protocol.variant + "'");
    cfg.protocol.k1 = b.number("k1", 1.0);
    cfg.protocol.k2 = b.number("k2", 1.0);
    cfg.protocol.mu = b.number("mu", 1.0);
    cfg.protocol.gamma = b.number("gamma", 0.0);
    const auto N = static_cast<std::size_t>(cfg.graph.N);
    if (!b.has("c0")) {
      cfg.protocol.c0.assign(N, 1.0);
    } else if (b.at("c0").is_number()) {
      cfg.protocol.c0.assign(N, b.number("c0"));
    } else {
      cfg.protocol.c0 = b.numbers("c0", N);
    }
    for (double c : cfg.protocol.c0) {
      if (!(c > 0.0)) fail("protocol.c0", "initial gains must be positive");
    }
  }

  {
    Block b(root.at("simulation"), "simulation",
            {"h", "T", "output_stride", "master_seed", "M", "x0", "blowup_threshold"});
    auto& s = cfg.simulation;
    s.h = b.number("h", 1e-3);
    s.T = b.number("T", 10.0);
    if (!(s.h > 0.0)) fail("simulation.h", "must be > 0");
    if (!(s.T >= s.h)) fail("simulation.T", "must be >= h");
    const auto stride = b.integer("output_stride", 10);
    if (stride < 1) fail("simulation.output_stride", "must be >= 1");
    s.output_stride = static_cast<int>(stride);
    s.master_seed = b.unsigned_integer("master_seed");
    s.M = b.unsigned_integer("M");
    if (s.M < 1) fail("simulation.M", "must be >= 1");
    s.blowup_threshold = b.number("blowup_threshold", 1e9);
    if (!(s.blowup_threshold > 0.0)) fail("simulation.blowup_threshold", "must be > 0");

    const auto expected = static_cast<std::size_t>(cfg.graph.N) * static_cast<std::size_t>(cfg.model.n);
    if (b.at("x0").is_string()) {
      const std::string text = b.string("x0");
      s.x0_uniform = parse_uniform(text);
      if (!s.x0_uniform) fail("simulation.x0", "expected an array or \"uniform(lo,hi)\", got \"" + text + "\"");
      if (!((*s.x0_uniform)[0] < (*s.x0_uniform)[1])) fail("simulation.x0", "uniform bounds need lo < hi");
    } else {
      s.x0 = b.numbers("x0", expected);
    }
  }

  if (root.has("output")) {
    Block b(root.at("output"), "output", {"directory", "emit", "trajectory_paths"});
    auto& o = cfg.output;
    if (b.has("directory")) o.directory = b.string("directory");
    if (b.has("emit")) {
      const json& e = b.at("emit");
      if (!e.is_array()) fail("output.emit", "expected an array of strings");
      o.emit.clear();
      for (const auto& item : e) {
        if (!item.is_string()) fail("output.emit", "expected an array of strings");
        const std::string kind = item.get<std::string>();
        if (std::find(kEmitKinds.begin(), kEmitKinds.end(), kind) == kEmitKinds.end()) {
          fail("output.emit", "unknown file kind '" + kind + "'");
        }
        o.emit.push_back(kind);
      }
    }
    if (b.has("trajectory_paths")) {
      const json& p = b.at("trajectory_paths");
      if (!p.is_array()) fail("output.trajectory_paths", "expected an array of path indices");
      o.trajectory_paths.clear();
      for (const auto& item : p) {
        if (!item.is_number_integer() || item.get<std::int64_t>() < 0) fail("output.trajectory_paths", "expected nonnegative integers");
        o.trajectory_paths.push_back(item.get<std::uint64_t>());
      }
    }
    for (auto p : o.trajectory_paths) {
      if (p >= cfg.simulation.M) fail("output.trajectory_paths", "path index " + std::to_string(p) + " >= M");
    }
  }
  return cfg;
}

nlohmann::json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path.string() + ": " + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(load_config_json(path)); }

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["model"] = {{"n", cfg.model.n}, {"m", cfg.model.m}, {"A", cfg.model.A}, {"B", cfg.model.B}, {"C", cfg.model.C}};
  if (cfg.model.reference_P) doc["model"]["reference_P"] = *cfg.model.reference_P;
  doc["graph"] = {{"N", cfg.graph.N}, {"adjacency", cfg.graph.adjacency}, {"undirected", cfg.graph.undirected}};
  doc["protocol"] = {{"variant", cfg.protocol.variant}, {"k1", cfg.protocol.k1}, {"k2", cfg.protocol.k2},
                     {"mu", cfg.protocol.mu},           {"gamma", cfg.protocol.gamma}, {"c0", cfg.protocol.c0}};
  const auto& s = cfg.simulation;
  doc["simulation"] = {{"h", s.h},
                       {"T", s.T},
                       {"output_stride", s.output_stride},
                       {"master_seed", s.master_seed},
                       {"M", s.M},
                       {"blowup_threshold", s.blowup_threshold}};
  if (s.x0_uniform) {
    doc["simulation"]["x0"] = "uniform(" + g17((*s.x0_uniform)[0]) + "," + g17((*s.x0_uniform)[1]) + ")";
  } else {
    doc["simulation"]["x0"] = s.x0;
  }
  doc["output"] = {{"directory", cfg.output.directory},
                   {"emit", cfg.output.emit},
                   {"trajectory_paths", cfg.output.trajectory_paths}};
  return doc;
}

SystemModel make_model(const ExperimentConfig& cfg) {
  SystemModel m;
  m.A = row_major(cfg.model.A, cfg.model.n, cfg.model.n);
  m.B = row_major(cfg.model.B, cfg.model.n, cfg.model.m);
  m.C = row_major(cfg.model.C, cfg.model.n, cfg.model.n);
  m.N = cfg.graph.N;
  return m;
}

WeightedDigraph make_graph(const ExperimentConfig& cfg) {
  return WeightedDigraph(row_major(cfg.graph.adjacency, cfg.graph.N, cfg.graph.N));
}

ProtocolSpec make_protocol(const ExperimentConfig& cfg) {
  ProtocolSpec spec;
  spec.variant = *parse_variant(cfg.protocol.variant);
  spec.k1 = cfg.protocol.k1;
  spec.k2 = cfg.protocol.k2;
  spec.mu = cfg.protocol.mu;
  spec.gamma = cfg.protocol.gamma;
  spec.c0 = Eigen::Map<const Eigen::VectorXd>(cfg.protocol.c0.data(), static_cast<Eigen::Index>(cfg.protocol.c0.size()));
  return spec;
}

Eigen::VectorXd resolve_x0(const ExperimentConfig& cfg) {
  const auto& s = cfg.simulation;
  const Eigen::Index size = static_cast<Eigen::Index>(cfg.graph.N) * cfg.model.n;
  if (s.x0_uniform) return sample_uniform_state(s.master_seed, size, (*s.x0_uniform)[0], (*s.x0_uniform)[1]);
  return Eigen::Map<const Eigen::VectorXd>(s.x0.data(), static_cast<Eigen::Index>(s.x0.size()));
}

void set_scalar(json& doc, const std::string& dotted_key, const std::string& value) {
  json* node = &doc;
  std::stringstream parts(dotted_key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object() || !node->contains(part)) fail(dotted_key, "no such key in the config");
    node = &(*node)[part];
  }
  if (!node->is_number()) fail(dotted_key, "sweep key must address a scalar number");
  try {
    std::size_t used = 0;
    if (node->is_number_unsigned()) {
      const auto v = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      *node = v;
    } else if (node->is_number_integer()) {
      const auto v = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      if (v >= 0)
        *node = static_cast<std::uint64_t>(v);
      else
        *node = v;
    } else {
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      *node = v;
    }
  } catch (const std::exception&) {
    fail(dotted_key, "cannot use '" + value + "' as a value");
  }
}

}  // namespace adcons
