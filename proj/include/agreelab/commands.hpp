#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "agreelab/config.hpp"

namespace agreelab::cli {

/// Process exit codes, a stable contract for scripts.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitDivergence = 2, kExitInfeasible = 3 };

/// Directory holding the shipped graph and scenario files.
std::filesystem::path data_dir();

struct SimulateOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
};

int cmd_spectrum(const std::filesystem::path& graph_file, std::ostream& out, std::ostream& err);
int cmd_check(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const std::filesystem::path& config, const SimulateOverrides& overrides, std::ostream& out,
                 std::ostream& err);
int cmd_design(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
/// scenario is one of nominal, noise, dist, dist-pi.
int cmd_reproduce(const std::string& scenario, const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
                  std::ostream& err);

/// Runs one protocol of a config, writes trajectories into dir and returns
/// the flat metrics object. On divergence the metrics (with the blowup time)
/// are written before the DivergenceError propagates.
nlohmann::json run_experiment(const ExperimentConfig& cfg, const std::string& protocol,
                              const std::filesystem::path& dir);

/// Writes via a temporary file in the same directory and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace agreelab::cli
