#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace gibbsgeom::cli {

struct SchemaError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const char* kToolVersion = "0.1.0";

struct Artifact {
  std::string file;  // relative to the output directory
  std::string content;
};

struct ExperimentResult {
  std::vector<Artifact> artifacts;
  nlohmann::json summary;
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  bool verbose = false;
};

// Parses and type-checks the whole config; throws SchemaError.
void validate_experiment(const nlohmann::json& config);
// Effective config: defaults are not filled in, only the seed override is applied.
nlohmann::json effective_config(const nlohmann::json& config, const RunOptions& opt);
ExperimentResult run_experiment(const nlohmann::json& config, const RunOptions& opt);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);
void write_atomic(const std::string& path, const std::string& content);
// RFC-4180 field quoting
std::string csv_field(const std::string& s);
std::string csv_number(double v);

// Writes the artifacts and manifest.json into out_dir; returns the manifest.
nlohmann::json write_outputs(const std::string& out_dir, const nlohmann::json& config, const ExperimentResult& r);

int main_cli(int argc, char** argv);

}  // namespace gibbsgeom::cli
