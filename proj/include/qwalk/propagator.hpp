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

#ifndef QWALK_PROPAGATOR_HPP
#define QWALK_PROPAGATOR_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;

enum class ExpMethod { Auto, Dense, Krylov };

struct PropagationOptions {
  ExpMethod method = ExpMethod::Auto;
  /// Auto picks Dense up to this many basis states, Krylov above.
  std::size_t dense_limit = 1024;
  std::size_t krylov_dim = 30;
  /// Accumulated Krylov error estimate allowed over the whole interval.
  double tolerance = 1e-10;
  std::size_t max_substeps = 1'000'000;
};

struct PropagationReport {
  ExpMethod method = ExpMethod::Dense;
  std::size_t substeps = 0;
  double error_estimate = 0.0;
};

/// Hermitian operator given by its action. `norm_bound` must bound the
/// spectral radius (a Gershgorin bound is fine); it seeds the step size.
struct HermitianOperator {
  std::size_t dimension = 0;
  double norm_bound = 0.0;
  std::function<void(std::span<const Complex>, std::span<Complex>)> apply;
};

/// exp(A) by scaling and squaring with the [13/13] Pade approximant.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// psi <- exp(-i H t) psi with H given densely.
void propagate_dense(const Eigen::MatrixXd& h, double t, std::span<Complex> psi);

/// psi <- exp(-i H t) psi by Lanczos projection with adaptive sub-steps.
/// Throws NumericalFailure (reporting the achieved error) when the step
/// control cannot reach the tolerance within max_substeps.
void propagate_krylov(const HermitianOperator& h, double t, std::span<Complex> psi,
                      const PropagationOptions& options = {}, PropagationReport* report = nullptr);

}  // namespace qwalk

#endif  // QWALK_PROPAGATOR_HPP
