#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eulercs/records.hpp"
#include "eulercs/sensing_matrix.hpp"

namespace eulercs::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kInfeasible = 3 };

struct Globals {
  bool timing = false;
  std::size_t threads = 0;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<int()> run;
};

void register_matrix_commands(CLI::App& root, const Globals& globals, std::vector<Command>& out);
void register_bench_commands(CLI::App& root, const Globals& globals, std::vector<Command>& out);
void register_recover_command(CLI::App& root, const Globals& globals, std::vector<Command>& out);
void register_cbir_commands(CLI::App& root, const Globals& globals, std::vector<Command>& out);

// "a,b,c" into exactly `count` unsigned values (any count when 0).
std::vector<std::uint32_t> parse_uints(const std::string& text, std::size_t count, const std::string& flag);

// Flags given on the command line, in declaration order.
RunManifest manifest_for(const CLI::App& sub, const std::string& name);

// Writes `<artifact>.manifest.json` next to the artifact.
void write_manifest(RunManifest manifest, const std::string& artifact, const Globals& globals,
                    std::chrono::steady_clock::time_point start);

// Loads an ESM file, or builds from --index when `path` is empty.
SensingMatrix matrix_from_flags(const std::string& path, const std::string& index);

void note(const std::string& line);

}  // namespace eulercs::cli
