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

#ifndef QWALK_ENSEMBLE_HPP
#define QWALK_ENSEMBLE_HPP

#include <cstddef>
#include <functional>

#include "qwalk/distribution.hpp"

namespace qwalk {

/// Summary of an ensemble of per-run position laws. Sigma fields are NaN
/// when the labels are not coordinates.
struct EnsembleResult {
  Distribution mean;         // average of the per-run laws
  std::size_t runs = 0;
  double sigma = 0.0;        // sigma of `mean`
  double sigma_stderr = 0.0; // standard error of `sigma` across runs (delta method)
  double run_sigma_mean = 0.0;   // average of per-run sigmas
  double run_sigma_stderr = 0.0;
  double ipr_mean = 0.0;         // average of per-run IPRs
  double ipr_stderr = 0.0;
};

/// Evaluates job(0..runs-1), possibly on several threads, and reduces in run
/// order so the result does not depend on the thread count. Every job must
/// return laws over the same labels.
EnsembleResult run_ensemble(std::size_t runs, std::size_t threads,
                            const std::function<Distribution(std::size_t run)>& job);

}  // namespace qwalk

#endif  // QWALK_ENSEMBLE_HPP
