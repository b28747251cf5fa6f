#pragma once

// Orchestration behind the command-line tool: SARE solve, validation,
// ensemble simulation, analysis, and file emission with a manifest.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adcons/analysis.hpp"
#include "adcons/config.hpp"
#include "adcons/protocol.hpp"
#include "adcons/riccati.hpp"
#include "adcons/sde.hpp"

namespace adcons {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 1;
inline constexpr int sare = 2;
inline constexpr int validation = 3;
inline constexpr int blowup = 4;
}  // namespace exit_code

struct RunOptions {
  std::optional<std::filesystem::path> out;  // overrides output.directory
  int threads = 1;
  bool force = false;
  bool keep_going = false;
  bool emit_plots = false;
  bool write_files = true;
};

struct FileRecord {
  std::string name;  // relative to the run directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunResult {
  int exit_code = exit_code::ok;
  std::string message;
  std::optional<RiccatiSolution> sol;
  ValidationReport report;
  bool overridden = false;
  Eigen::VectorXd x0;
  std::vector<Trajectory> ensemble;
  std::vector<std::uint64_t> blowup_paths;
  std::optional<MsCurves> curves;  // over the paths that completed
  std::optional<RateFit> rate;
  std::optional<double> time_to_threshold;  // E|theta|^2 reaching 1e-2 of its initial value
  std::vector<FileRecord> files;
  std::filesystem::path directory;
};

// 1e-2, the fraction used for time_to_threshold.
inline constexpr double kThresholdFraction = 1e-2;

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options, std::ostream& log);

int cmd_sare(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
int cmd_graph_check(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
int cmd_run(const std::filesystem::path& config_path, const RunOptions& options, std::ostream& out,
            std::ostream& err);
int cmd_sweep(const std::filesystem::path& config_path, const std::string& key, const std::vector<std::string>& values,
              const RunOptions& options, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::filesystem::path& file);

// %.17g
std::string format_number(double v);

}  // namespace adcons
