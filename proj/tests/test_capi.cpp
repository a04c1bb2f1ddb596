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


// Exercises the shared library through its C header only.

#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qwalk/qwalk.h"

namespace {

std::filesystem::path scratch(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("qwalk_capi_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::strlen(qw_version()) > 0);
  CHECK(std::string(qw_status_string(QW_OK)) != std::string(qw_status_string(QW_ERR_RESOURCE)));
}

TEST_CASE("substrate handles") {
  qw_substrate* line = nullptr;
  REQUIRE(qw_substrate_line(11, 0, &line) == QW_OK);
  CHECK(qw_substrate_vertices(line) == 11);
  CHECK(qw_substrate_edges(line) == 10);
  CHECK(qw_substrate_coin_slots(line) == 2);

  qw_substrate* same = nullptr;
  REQUIRE(qw_substrate_percolate(line, 0, 1.0, 5, &same) == QW_OK);
  CHECK(qw_substrate_fingerprint(same) == qw_substrate_fingerprint(line));
  qw_substrate* none = nullptr;
  REQUIRE(qw_substrate_percolate(line, 0, 0.0, 5, &none) == QW_OK);
  CHECK(qw_substrate_edges(none) == 0);
  CHECK(qw_substrate_percolate(line, 0, 1.5, 5, &none) != QW_OK);
  CHECK(std::strlen(qw_last_error()) > 0);

  const size_t dims[] = {3, 4};
  qw_substrate* grid = nullptr;
  REQUIRE(qw_substrate_lattice(dims, 2, 1, &grid) == QW_OK);
  CHECK(qw_substrate_vertices(grid) == 12);
  CHECK(qw_substrate_coin_slots(grid) == 4);

  const size_t pairs[] = {0, 1, 1, 2, 2, 0};
  qw_substrate* tri = nullptr;
  REQUIRE(qw_substrate_from_edges(pairs, 3, 3, &tri) == QW_OK);
  const auto dir = scratch("sub");
  const std::string path = (dir / "tri.adj").string();
  REQUIRE(qw_substrate_save(tri, path.c_str()) == QW_OK);
  qw_substrate* back = nullptr;
  REQUIRE(qw_substrate_load(path.c_str(), &back) == QW_OK);
  CHECK(qw_substrate_edges(back) == 3);
  CHECK(qw_substrate_load((dir / "missing.adj").string().c_str(), &back) == QW_ERR_IO);

  for (qw_substrate* s : {line, same, none, grid, tri, back}) qw_substrate_free(s);
  std::filesystem::remove_all(dir);
}

TEST_CASE("coined walk through the C interface") {
  qw_substrate* line = nullptr;
  REQUIRE(qw_substrate_line(21, 0, &line) == QW_OK);
  qw_coin* h = nullptr;
  REQUIRE(qw_coin_hadamard(&h) == QW_OK);
  CHECK(qw_coin_dimension(h) == 2);
  qw_walk_state* psi = nullptr;
  REQUIRE(qw_walk_initial(line, 0.5, M_PI / 2, 10, &psi) == QW_OK);
  REQUIRE(qw_walk_evolve(psi, h, line, 2) == QW_OK);
  CHECK(qw_walk_step_count(psi) == 2);

  size_t needed = 0;
  CHECK(qw_walk_amplitudes(psi, nullptr, 0, &needed) == QW_ERR_BUFFER_TOO_SMALL);
  CHECK(needed == qw_walk_size(psi));
  std::vector<double> amps(2 * needed);
  REQUIRE(qw_walk_amplitudes(psi, amps.data(), needed, &needed) == QW_OK);
  double norm = 0;
  for (double a : amps) norm += a * a;
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-13));

  // Two steps of the symmetric walk coincide with the classical binomial.
  qw_distribution* d = nullptr;
  REQUIRE(qw_walk_distribution(psi, line, 10, &d) == QW_OK);
  qw_distribution* c = nullptr;
  REQUIRE(qw_classical_binomial(2, &c) == QW_OK);
  double tv = 1;
  CHECK(qw_distribution_tv(d, c, &tv) == QW_ERR_INVALID_ARGUMENT);
  std::vector<double> probs(qw_distribution_size(d)), classical(qw_distribution_size(c));
  REQUIRE(qw_distribution_probabilities(d, probs.data(), probs.size()) == QW_OK);
  REQUIRE(qw_distribution_probabilities(c, classical.data(), classical.size()) == QW_OK);
  for (size_t i = 0; i < classical.size(); ++i) {
    int64_t x = 0;
    REQUIRE(qw_distribution_label(c, i, &x, 1, nullptr) == QW_OK);
    CHECK(probs[static_cast<size_t>(10 + x)] == doctest::Approx(classical[i]).epsilon(1e-14));
  }
  REQUIRE(qw_distribution_tv(d, d, &tv) == QW_OK);
  CHECK(tv == 0.0);

  int64_t label = 0;
  REQUIRE(qw_distribution_label(d, 0, &label, 1, &needed) == QW_OK);
  CHECK(label == -10);
  double var = 0, sigma = 0;
  REQUIRE(qw_distribution_moments(d, &var, &sigma) == QW_OK);
  CHECK(var == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(qw_distribution_ipr(d) == doctest::Approx(0.375).epsilon(1e-12));

  std::vector<size_t> outcomes(1000);
  REQUIRE(qw_distribution_sample(d, outcomes.size(), 3, outcomes.data()) == QW_OK);
  for (size_t o : outcomes) CHECK((o == 8 || o == 10 || o == 12));

  qw_substrate* grid = nullptr;
  const size_t dims[] = {3, 3};
  REQUIRE(qw_substrate_lattice(dims, 2, 0, &grid) == QW_OK);
  CHECK(qw_walk_evolve(psi, h, grid, 1) == QW_ERR_DIMENSION);

  qw_distribution_free(d);
  qw_distribution_free(c);
  qw_walk_free(psi);
  qw_coin_free(h);
  qw_substrate_free(line);
  qw_substrate_free(grid);
}

TEST_CASE("coins and continuous walks") {
  qw_coin* g = nullptr;
  REQUIRE(qw_coin_grover(4, &g) == QW_OK);
  CHECK(qw_coin_dimension(g) == 4);
  qw_coin_free(g);
  CHECK(qw_coin_dft(0, &g) != QW_OK);
  const double not_unitary[] = {1, 0, 1, 0, 0, 0, 1, 0};
  CHECK(qw_coin_custom(2, not_unitary, 1e-12, &g) != QW_OK);
  const double swap[] = {0, 0, 1, 0, 1, 0, 0, 0};
  REQUIRE(qw_coin_custom(2, swap, 1e-12, &g) == QW_OK);
  qw_coin_free(g);

  qw_substrate* pair = nullptr;
  REQUIRE(qw_substrate_line(2, 0, &pair) == QW_OK);
  qw_distribution* d = nullptr;
  REQUIRE(qw_continuous_distribution(pair, 1.0, 0, M_PI / 2, &d, nullptr) == QW_OK);
  double p[2];
  REQUIRE(qw_distribution_probabilities(d, p, 2) == QW_OK);
  CHECK(p[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(qw_distribution_probabilities(d, p, 1) == QW_ERR_BUFFER_TOO_SMALL);
  qw_distribution_free(d);
  qw_substrate_free(pair);
}

TEST_CASE("resource arithmetic") {
  CHECK(qw_qubits_needed(1000000) == 22);
  CHECK(qw_amplitude_capacity(uint64_t{1} << 30, 4) == uint64_t{1} << 27);
  CHECK(qw_dimension_guard(10, 12, 1, uint64_t{1} << 40, 1) == QW_OK);
  CHECK(qw_dimension_guard(10, 13, 1, uint64_t{1} << 40, 1) == QW_ERR_RESOURCE);
  CHECK(std::string(qw_last_error()).find("10^13") != std::string::npos);
}

TEST_CASE("config handles") {
  qw_config* cfg = nullptr;
  REQUIRE(qw_config_parse("steps = 4\ninitial.beta = pi/2\nsubstrate.sites = 9\n", &cfg) == QW_OK);
  CHECK(qw_config_diagnostic_count(cfg) == 0);
  CHECK(qw_config_validate(cfg) == QW_OK);
  const auto dir = scratch("cfg");
  qw_config_set_seed(cfg, 42);
  REQUIRE(qw_run(cfg, (dir / "out").string().c_str(), 1) == QW_OK);
  CHECK(std::filesystem::exists(dir / "out" / "distribution.csv"));
  std::ifstream manifest(dir / "out" / "manifest.json");
  std::string text((std::istreambuf_iterator<char>(manifest)), std::istreambuf_iterator<char>());
  CHECK(text.find("\"master\": 42") != std::string::npos);

  size_t needed = 0;
  CHECK(qw_estimate(cfg, uint64_t{1} << 30, nullptr, 0, &needed) == QW_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buf(needed);
  REQUIRE(qw_estimate(cfg, uint64_t{1} << 30, buf.data(), buf.size(), &needed) == QW_OK);
  CHECK(std::string(buf.data()).find("qubits_needed(T=4): 5") != std::string::npos);
  qw_config_free(cfg);

  REQUIRE(qw_config_parse("steps = 3\ncoin.name = fair\n", &cfg) == QW_OK);
  CHECK(qw_config_diagnostic_count(cfg) == 1);
  CHECK(std::string(qw_config_diagnostic(cfg, 0)).find("coin.name") != std::string::npos);
  CHECK(qw_config_validate(cfg) == QW_ERR_VALIDATION);
  CHECK(qw_run(cfg, (dir / "bad").string().c_str(), 1) == QW_ERR_VALIDATION);
  CHECK_FALSE(std::filesystem::exists(dir / "bad"));
  qw_config_free(cfg);

  REQUIRE(qw_config_parse("walk = continuous\nsubstrate.sites = 10\ntime = 1\nwalkers.count = 13\n", &cfg) == QW_OK);
  CHECK(qw_config_diagnostic_is_resource(cfg, 0) == 1);
  CHECK(qw_config_validate(cfg) == QW_ERR_RESOURCE);
  qw_config_free(cfg);

  CHECK(qw_config_parse("steps 3\n", &cfg) == QW_ERR_VALIDATION);
  CHECK(qw_config_load((dir / "nope.cfg").string().c_str(), &cfg) == QW_ERR_IO);
  std::filesystem::remove_all(dir);
}
