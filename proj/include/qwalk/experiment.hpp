// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QWALK_EXPERIMENT_HPP
#define QWALK_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qwalk/decoherence.hpp"
#include "qwalk/multiwalker.hpp"
#include "qwalk/substrate.hpp"

namespace qwalk {

// ---------------------------------------------------------------------------
// Config documents
//
// One `key.path = value` per line; `#` starts a comment. Values are
//   true | false            booleans
//   42, -3, 1e-3, 0.5       integers and reals
//   pi, -pi/2, 3*pi/4       multiples of pi (reals)
//   hadamard, "a b.txt"     bare words or quoted strings
//   [50, 100, 200]          flat lists of the above
// Keys may appear once. See README.md for the full key table.
// ---------------------------------------------------------------------------

struct ConfigValue;
using ConfigScalar = std::variant<bool, std::int64_t, double, std::string>;

struct ConfigValue {
  std::variant<ConfigScalar, std::vector<ConfigScalar>> value;
  int line = 0;
};

using ConfigDocument = std::map<std::string, ConfigValue>;

/// Throws Validation with the offending line number on syntax errors.
ConfigDocument parse_config(std::istream& in);
ConfigDocument parse_config_file(const std::filesystem::path& path);

enum class WalkType { Discrete, Continuous };
enum class NoiseMethod { Trajectory, Density };

struct ExperimentConfig {
  WalkType walk = WalkType::Discrete;

  struct {
    std::string kind = "line";  // line | lattice | adjacency
    std::optional<std::uint64_t> sites;
    std::vector<std::uint64_t> dims;
    Boundary boundary = Boundary::Open;
    std::string file;
    std::optional<PercolationMode> percolation;
    double p = 1.0;
  } substrate;

  struct {
    std::string name = "hadamard";  // hadamard | grover | dft
    std::optional<std::uint64_t> dimension;
  } coin;

  struct {
    double b = 0.5;
    double beta = 0.0;
    std::optional<std::uint64_t> start;
  } initial;

  struct {
    std::uint64_t count = 1;
    Statistics statistics = Statistics::Distinguishable;
    std::vector<std::uint64_t> starts;
  } walkers;

  NoiseModel noise;  // noise.seed defaults to `seed`
  std::optional<std::uint64_t> noise_seed;
  NoiseMethod noise_method = NoiseMethod::Trajectory;
  InteractionSpec interaction;
  double gamma = 1.0;
  std::vector<std::uint64_t> steps;
  std::vector<double> times;
  std::uint64_t runs = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs{"distribution", "moments"};
  std::uint64_t sample_count = 1000;
  std::uint64_t memory_budget = kDefaultAmplitudeBudget;

  bool multiwalker() const noexcept { return walkers.count > 1; }
  bool wants(const std::string& output) const;
  /// Canonical JSON form used in manifests.
  nlohmann::ordered_json to_json() const;
};

struct Diagnostic {
  enum class Kind { Validation, Resource };
  Kind kind = Kind::Validation;
  std::string path;  // config key, e.g. "coin.dimension"
  std::string message;

  std::string to_string() const;
};

/// Typed view of a document; unknown keys and type mismatches become
/// diagnostics rather than exceptions.
ExperimentConfig interpret(const ConfigDocument& doc, std::vector<Diagnostic>& diagnostics);

/// Cross-field checks. Resource diagnostics mark jobs that are well formed
/// but exceed memory_budget.
std::vector<Diagnostic> validate(const ExperimentConfig& config);

struct LoadedConfig {
  ExperimentConfig config;
  std::vector<Diagnostic> diagnostics;  // interpretation + validation
  bool ok() const noexcept { return diagnostics.empty(); }
};

LoadedConfig load_config(const std::filesystem::path& path);
LoadedConfig load_config(std::istream& in);

struct RunOptions {
  std::size_t threads = 1;
};

/// Executes the job and writes its outputs plus manifest.json into out_dir
/// (one sibling subdirectory per swept step/time value). Throws Validation
/// or Resource before touching the file system; files already written are
/// removed when a later stage fails. Returns the manifest.
nlohmann::ordered_json run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                           const RunOptions& options = {});

/// Human-readable resource figures for the configured job.
std::string estimate(const ExperimentConfig& config, std::uint64_t memory_bytes = std::uint64_t{1} << 30);

}  // namespace qwalk

#endif  // QWALK_EXPERIMENT_HPP
