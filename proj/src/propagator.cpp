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

#include "qwalk/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qwalk/error.hpp"

namespace qwalk {

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  // Higham, "The scaling and squaring method for the matrix exponential
  // revisited", SIAM J. Matrix Anal. Appl. 26 (2005).
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, s);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd x2 = x * x;
  const Eigen::MatrixXcd x4 = x2 * x2;
  const Eigen::MatrixXcd x6 = x4 * x2;

  const Eigen::MatrixXcd u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const Eigen::MatrixXcd v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;

  Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

void propagate_dense(const Eigen::MatrixXd& h, double t, std::span<Complex> psi) {
  if (h.rows() != static_cast<Eigen::Index>(psi.size())) {
    throw Error(ErrorKind::Dimension, "state and Hamiltonian sizes differ");
  }
  if (t == 0.0) return;
  const Eigen::MatrixXcd u = expm(Complex(0.0, -t) * h.cast<Complex>());
  Eigen::Map<Eigen::VectorXcd> v(psi.data(), static_cast<Eigen::Index>(psi.size()));
  const Eigen::VectorXcd out = u * v;
  v = out;
}

void propagate_krylov(const HermitianOperator& h, double t, std::span<Complex> psi, const PropagationOptions& options,
                      PropagationReport* report) {
  if (h.dimension != psi.size()) throw Error(ErrorKind::Dimension, "state and operator sizes differ");
  PropagationReport rep;
  rep.method = ExpMethod::Krylov;
  if (t == 0.0 || psi.empty()) {
    if (report) *report = rep;
    return;
  }

  const std::size_t n = psi.size();
  const std::size_t m_max = std::max<std::size_t>(1, std::min(options.krylov_dim, n));
  using Vec = Eigen::VectorXcd;
  Eigen::Map<Vec> state(psi.data(), static_cast<Eigen::Index>(n));

  std::vector<Vec> basis(m_max + 1, Vec(static_cast<Eigen::Index>(n)));
  std::vector<double> alpha(m_max), beta(m_max + 1);

  double remaining = t;
  double tau = std::min(t, 0.5 * static_cast<double>(m_max) / std::max(h.norm_bound, 1e-300));

  while (remaining > 0.0) {
    const double beta0 = state.norm();
    if (beta0 == 0.0) break;
    basis[0] = state / beta0;

    // Lanczos three-term recurrence with full reorthogonalization.
    std::size_t m = m_max;
    bool happy = false;
    for (std::size_t j = 0; j < m_max; ++j) {
      Vec& w = basis[j + 1];
      h.apply(std::span<const Complex>(basis[j].data(), n), std::span<Complex>(w.data(), n));
      alpha[j] = basis[j].dot(w).real();
      w -= alpha[j] * basis[j];
      if (j > 0) w -= beta[j] * basis[j - 1];
      for (std::size_t k = 0; k <= j; ++k) w -= basis[k].dot(w) * basis[k];
      beta[j + 1] = w.norm();
      if (beta[j + 1] < 1e-13 * std::max(1.0, h.norm_bound)) {
        m = j + 1;
        happy = true;
        break;
      }
      w /= beta[j + 1];
    }

    Eigen::VectorXd diag(static_cast<Eigen::Index>(m)), sub(static_cast<Eigen::Index>(std::max<std::size_t>(m, 2) - 1));
    for (std::size_t j = 0; j < m; ++j) diag[static_cast<Eigen::Index>(j)] = alpha[j];
    for (std::size_t j = 1; j < m; ++j) sub[static_cast<Eigen::Index>(j - 1)] = beta[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub.head(static_cast<Eigen::Index>(m - 1)), Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = eig.eigenvectors();
    const Eigen::VectorXd& lam = eig.eigenvalues();

    // y(tau) = exp(-i tau T_m) e_1
    auto small_exp = [&](double dt) {
      Eigen::VectorXcd coeff(static_cast<Eigen::Index>(m));
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) coeff[k] = std::polar(q(0, k), -lam[k] * dt);
      return Eigen::VectorXcd(q.cast<Complex>() * coeff);
    };

    Eigen::VectorXcd y;
    double err = 0.0;
    for (;;) {
      y = small_exp(tau);
      err = happy ? 0.0 : beta0 * beta[m] * std::abs(y[static_cast<Eigen::Index>(m - 1)]);
      if (err <= options.tolerance * tau / t) break;
      tau *= std::max(0.2, 0.9 * std::pow(options.tolerance * tau / t / err, 1.0 / static_cast<double>(m)));
      if (tau < t * 1e-14) {
        std::ostringstream msg;
        msg << "Krylov propagation stalled: error estimate " << err << " exceeds tolerance " << options.tolerance;
        throw Error(ErrorKind::NumericalFailure, msg.str());
      }
    }

    Vec next = Vec::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < m; ++j) next += y[static_cast<Eigen::Index>(j)] * basis[j];
    state = beta0 * next;

    rep.error_estimate += err;
    ++rep.substeps;
    remaining -= tau;
    if (remaining <= t * 1e-15) break;
    if (rep.substeps >= options.max_substeps) {
      std::ostringstream msg;
      msg << "Krylov propagation did not reach t=" << t << " within " << options.max_substeps
          << " sub-steps; accumulated error estimate " << rep.error_estimate;
      throw Error(ErrorKind::NumericalFailure, msg.str());
    }
    // Grow the step cautiously when the error is far below budget.
    const double ratio = err > 0 ? options.tolerance * tau / t / err : 1e6;
    tau = std::min(remaining, tau * std::min(2.0, 0.9 * std::pow(ratio, 1.0 / static_cast<double>(m))));
    if (happy) tau = remaining;
  }
  if (report) *report = rep;
}

}  // namespace qwalk
