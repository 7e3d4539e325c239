#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "eulercs/experiments.hpp"
#include "eulercs/imaging.hpp"
#include "eulercs/props.hpp"
#include "eulercs/recovery.hpp"

namespace eulercs {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// Structured records. Infinite SNRs are written as kSnrCapDb; NaN as null.
Json to_json(const CoherenceReport& report);
Json to_json(const SparseSignal& signal);
Json to_json(const RecoveryResult& result);
// Wall-clock time is left out unless `timing` is set, so that equal inputs
// give equal bytes.
Json to_json(const ExperimentReport& report, bool timing = false);
Json to_json(const RetrievalMetrics& metrics);

SparseSignal sparse_signal_from_json(const Json& j);

// (x, y) series: sparsity/percent, delta/rho or factor/snr, with raw counts.
void write_series_csv(std::ostream& out, const ExperimentReport& report);

struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> flags;  // in command-line order
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::optional<double> wall_clock_s;
};

Json to_json(const RunManifest& manifest);

// Pretty-printed JSON followed by a newline.
void write_json(std::ostream& out, const Json& j);
void save_json(const std::string& path, const Json& j);

}  // namespace eulercs
