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

// Command-line front end. Talks to the simulator only through the C API.
#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/qwalk.h"

namespace {

// Exit codes: 0 ok, 1 validation, 2 resource, 3 numerical, 4 i/o.
int exit_code(qw_status s) {
  switch (s) {
    case QW_OK: return 0;
    case QW_ERR_RESOURCE: return 2;
    case QW_ERR_NUMERICAL: return 3;
    case QW_ERR_IO: return 4;
    default: return 1;
  }
}

int report(qw_status s, const char* what) {
  if (s != QW_OK) std::fprintf(stderr, "qwalk: %s: %s: %s\n", what, qw_status_string(s), qw_last_error());
  return exit_code(s);
}

struct Config {
  qw_config* handle = nullptr;
  ~Config() { qw_config_free(handle); }
};

// Loads the config and prints every diagnostic. Returns the exit code.
int load(const std::string& path, Config& cfg) {
  if (qw_status s = qw_config_load(path.c_str(), &cfg.handle); s != QW_OK) return report(s, path.c_str());
  const qw_status s = qw_config_validate(cfg.handle);
  for (size_t i = 0; i < qw_config_diagnostic_count(cfg.handle); ++i) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), qw_config_diagnostic(cfg.handle, i));
  }
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walk simulator"};
  app.set_version_flag("--version", std::string(qw_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t memory = std::uint64_t{1} << 30;

  auto* run = app.add_subcommand("run", "Run an experiment and write its outputs");
  run->add_option("config", config_path, "Experiment config")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads for ensembles")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Master seed (overrides the config)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config")->required();

  auto* estimate = app.add_subcommand("estimate", "Print memory and qubit estimates");
  estimate->add_option("config", config_path, "Experiment config")->required();
  estimate->add_option("--memory", memory, "Memory in bytes for capacity figures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  Config cfg;
  if (*validate) {
    const int code = load(config_path, cfg);
    if (code == 0) std::printf("%s: ok\n", config_path.c_str());
    return code;
  }
  if (*estimate) {
    if (qw_status s = qw_config_load(config_path.c_str(), &cfg.handle); s != QW_OK) return report(s, "estimate");
    std::size_t needed = 0;
    qw_status s = qw_estimate(cfg.handle, memory, nullptr, 0, &needed);
    if (s != QW_ERR_BUFFER_TOO_SMALL) return report(s, "estimate");
    std::vector<char> buf(needed);
    s = qw_estimate(cfg.handle, memory, buf.data(), buf.size(), &needed);
    if (s != QW_OK) return report(s, "estimate");
    std::fputs(buf.data(), stdout);
    return 0;
  }

  if (int code = load(config_path, cfg); code != 0) return code;
  if (seed) qw_config_set_seed(cfg.handle, *seed);
  const qw_status s = qw_run(cfg.handle, out_dir.c_str(), threads);
  if (s == QW_OK) std::printf("wrote %s\n", out_dir.c_str());
  return report(s, "run");
}
