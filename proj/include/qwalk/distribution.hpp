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

#ifndef QWALK_DISTRIBUTION_HPP
#define QWALK_DISTRIBUTION_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qwalk {

using Label = std::vector<std::int64_t>;

/// Probability law over labelled outcomes. Labels are lattice coordinates
/// when `numeric` is set, otherwise opaque vertex indices.
struct Distribution {
  std::vector<double> probabilities;
  std::vector<Label> labels;
  bool numeric = false;

  std::size_t size() const noexcept { return probabilities.size(); }
  double total() const;

  /// Coordinates joined by ':' ("3", "-2:5").
  std::string label_string(std::size_t i) const;

  /// Index of `label`, or size() when absent.
  std::size_t find(const Label& label) const;

  /// Copy with every label shifted by -origin (numeric labels only).
  Distribution recentred(const Label& origin) const;
};

struct Moments {
  std::vector<double> mean;  // one entry per coordinate axis
  double variance = 0.0;     // summed over axes
  double sigma = 0.0;
};

/// Throws UnsupportedMetric for non-numeric labels.
Moments moments(const Distribution& dist);

/// Half the L1 distance. Labels are matched by value; throws
/// IncompatibleDistributions when the label sets differ.
double total_variation(const Distribution& a, const Distribution& b);

/// Inverse participation ratio, sum of p^2.
double ipr(const Distribution& dist);

/// Displacement law of T fair +-1 steps on labels -T..T (zeros on sites of
/// the wrong parity).
Distribution classical_binomial(std::uint64_t steps);

struct SampleSet {
  std::vector<std::size_t> outcomes;  // indices into the source distribution
  std::uint64_t seed = 0;
  std::string source;
};

/// N independent inverse-CDF draws over the label order, using Rng(seed).
SampleSet sample(const Distribution& dist, std::size_t n, std::uint64_t seed, std::string source = {});

/// Empirical law of `samples` on the labels of `dist`.
Distribution empirical(const SampleSet& samples, const Distribution& dist);

/// CSV with header `label,probability`; probabilities printed round-trip exact.
void write_distribution_csv(std::ostream& out, const Distribution& dist);
void write_distribution_csv(const std::filesystem::path& path, const Distribution& dist);
Distribution read_distribution_csv(std::istream& in);

/// CSV with one `outcome` column (labels of `dist`) and a JSON sidecar
/// holding seed, source and sample count.
void write_samples(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                   const SampleSet& samples, const Distribution& dist);

/// Shortest decimal string that round-trips the double.
std::string format_double(double x);

}  // namespace qwalk

#endif  // QWALK_DISTRIBUTION_HPP
