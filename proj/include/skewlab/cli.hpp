#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/config.hpp"
#include "skewlab/shipped.hpp"

namespace skewlab {

// The `system` block of a run config, built and validated.
struct SystemConfig {
  std::string name;
  SkewSystem system;
  SkewPoint start;
  std::optional<SmallDivisorReport> cocycle_report;
  std::optional<SmallDivisorReport> perturbation_report;
};

SystemConfig build_system(const ConfigBlock& system);

// ---------------------------------------------------------------------------
// Manifest

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::string command;
  std::string version;
  std::string config_sha256;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  int exit_code = 0;
  std::vector<OutputFile> outputs;
};

std::string sha256_hex(std::string_view data);
// Writes to a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);
std::string manifest_json(const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Commands

const char* tool_version();
std::vector<std::string> command_names();

struct RunRequest {
  std::string command;
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

// Exit status: 0 clean, 2 property violation found, 1 usage or config
// error. Diagnostics go to `err`, a one-line summary to `out`.
int run_command(const RunRequest& req, std::ostream& out, std::ostream& err);

// example_zi.cfg, example_pe.cfg, coboundary_sin.cfg, transient_fiber.cfg.
std::vector<std::string> example_config_names();
std::string example_config_text(const std::string& name,
                                const ExampleParameters& p = {});
// Returns the written paths. Throws UsageError when dir is not writable.
std::vector<std::filesystem::path> emit_example_configs(const std::filesystem::path& dir);

}  // namespace skewlab
