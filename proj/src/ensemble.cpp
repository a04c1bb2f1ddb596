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

#include "qwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

// Mean and standard error of the mean.
std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace

EnsembleResult run_ensemble(std::size_t runs, std::size_t threads,
                            const std::function<Distribution(std::size_t run)>& job) {
  if (runs == 0) throw Error(ErrorKind::InvalidParameter, "ensemble needs at least one run");
  // Only run 0 keeps its labels; the others keep probabilities.
  std::vector<Distribution> laws(runs);
  auto evaluate = [&](std::size_t r) {
    Distribution d = job(r);
    if (r != 0) {
      d.labels.clear();
      d.labels.shrink_to_fit();
    }
    laws[r] = std::move(d);
  };

  threads = std::clamp<std::size_t>(threads, 1, runs);
  if (threads == 1) {
    for (std::size_t r = 0; r < runs; ++r) evaluate(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next.fetch_add(1)) < runs;) {
          try {
            evaluate(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = runs;
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  EnsembleResult res;
  res.runs = runs;
  res.mean.labels = laws.front().labels;
  res.mean.numeric = laws.front().numeric;
  res.mean.probabilities.assign(res.mean.labels.size(), 0.0);
  for (const auto& law : laws) {
    if (law.probabilities.size() != res.mean.labels.size()) {
      throw Error(ErrorKind::IncompatibleDistributions, "ensemble members have different label sets");
    }
    for (std::size_t i = 0; i < law.size(); ++i) res.mean.probabilities[i] += law.probabilities[i];
  }
  for (double& p : res.mean.probabilities) p /= static_cast<double>(runs);

  std::vector<double> iprs;
  for (const auto& law : laws) iprs.push_back(ipr(law));
  std::tie(res.ipr_mean, res.ipr_stderr) = mean_stderr(iprs);

  if (!res.mean.numeric) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    res.sigma = res.sigma_stderr = res.run_sigma_mean = res.run_sigma_stderr = nan;
    return res;
  }
  const Moments mm = moments(res.mean);
  res.sigma = mm.sigma;
  // Per-run second moment about the ensemble mean; its average is sigma^2.
  const auto& labels = res.mean.labels;
  const std::size_t axes = mm.mean.size();
  std::vector<double> second, run_sigma;
  std::vector<double> run_mean(axes);
  for (const auto& law : laws) {
    const auto& p = law.probabilities;
    std::fill(run_mean.begin(), run_mean.end(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t a = 0; a < axes; ++a) run_mean[a] += p[i] * static_cast<double>(labels[i][a]);
    double q = 0, v = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t a = 0; a < axes; ++a) {
        const double x = static_cast<double>(labels[i][a]);
        q += p[i] * (x - mm.mean[a]) * (x - mm.mean[a]);
        v += p[i] * (x - run_mean[a]) * (x - run_mean[a]);
      }
    }
    second.push_back(q);
    run_sigma.push_back(std::sqrt(v));
  }
  const double var_err = mean_stderr(second).second;
  res.sigma_stderr = res.sigma > 0 ? var_err / (2.0 * res.sigma) : 0.0;
  std::tie(res.run_sigma_mean, res.run_sigma_stderr) = mean_stderr(run_sigma);
  return res;
}

}  // namespace qwalk
