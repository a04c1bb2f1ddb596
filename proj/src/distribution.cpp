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

#include "qwalk/distribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double Distribution::total() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }

std::string Distribution::label_string(std::size_t i) const {
  std::string s;
  for (std::size_t k = 0; k < labels[i].size(); ++k) {
    if (k) s += ':';
    s += std::to_string(labels[i][k]);
  }
  return s;
}

std::size_t Distribution::find(const Label& label) const {
  return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
}

Distribution Distribution::recentred(const Label& origin) const {
  if (!numeric) throw Error(ErrorKind::UnsupportedMetric, "cannot recentre non-numeric labels");
  Distribution d = *this;
  for (auto& l : d.labels) {
    if (l.size() != origin.size()) throw Error(ErrorKind::Dimension, "origin has wrong number of coordinates");
    for (std::size_t a = 0; a < l.size(); ++a) l[a] -= origin[a];
  }
  return d;
}

Moments moments(const Distribution& dist) {
  if (!dist.numeric) throw Error(ErrorKind::UnsupportedMetric, "moments need coordinate labels");
  Moments m;
  if (dist.size() == 0) return m;
  const std::size_t axes = dist.labels.front().size();
  m.mean.assign(axes, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i)
    for (std::size_t a = 0; a < axes; ++a) m.mean[a] += dist.probabilities[i] * static_cast<double>(dist.labels[i][a]);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    for (std::size_t a = 0; a < axes; ++a) {
      const double dx = static_cast<double>(dist.labels[i][a]) - m.mean[a];
      m.variance += dist.probabilities[i] * dx * dx;
    }
  }
  m.sigma = std::sqrt(m.variance);
  return m;
}

double total_variation(const Distribution& a, const Distribution& b) {
  double sum = 0;
  if (a.labels == b.labels) {
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.probabilities[i] - b.probabilities[i]);
    return 0.5 * sum;
  }
  if (a.size() != b.size()) {
    throw Error(ErrorKind::IncompatibleDistributions, "distributions have different label sets");
  }
  std::map<Label, double> lookup;
  for (std::size_t i = 0; i < b.size(); ++i) lookup.emplace(b.labels[i], b.probabilities[i]);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = lookup.find(a.labels[i]);
    if (it == lookup.end()) {
      throw Error(ErrorKind::IncompatibleDistributions, "label " + a.label_string(i) + " missing from second law");
    }
    sum += std::abs(a.probabilities[i] - it->second);
  }
  return 0.5 * sum;
}

double ipr(const Distribution& dist) {
  double s = 0;
  for (double p : dist.probabilities) s += p * p;
  return s;
}

Distribution classical_binomial(std::uint64_t steps) {
  Distribution d;
  d.numeric = true;
  const auto t = static_cast<std::int64_t>(steps);
  d.probabilities.reserve(2 * steps + 1);
  d.labels.reserve(2 * steps + 1);
  const double log_norm = std::lgamma(static_cast<double>(steps) + 1.0) - static_cast<double>(steps) * std::log(2.0);
  for (std::int64_t x = -t; x <= t; ++x) {
    d.labels.push_back({x});
    if ((x + t) % 2 != 0) {
      d.probabilities.push_back(0.0);
      continue;
    }
    const double k = static_cast<double>((t + x) / 2);
    d.probabilities.push_back(
        std::exp(log_norm - std::lgamma(k + 1.0) - std::lgamma(static_cast<double>(steps) - k + 1.0)));
  }
  return d;
}

SampleSet sample(const Distribution& dist, std::size_t n, std::uint64_t seed, std::string source) {
  if (n == 0) throw Error(ErrorKind::InvalidParameter, "sample count must be positive");
  if (dist.size() == 0) throw Error(ErrorKind::InvalidParameter, "cannot sample an empty distribution");
  std::vector<double> cdf(dist.size());
  std::partial_sum(dist.probabilities.begin(), dist.probabilities.end(), cdf.begin());
  const double total = cdf.back();
  if (!(total > 0)) throw Error(ErrorKind::InvalidParameter, "distribution has zero mass");

  SampleSet s;
  s.seed = seed;
  s.source = std::move(source);
  s.outcomes.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;  // u rounds up to total
    s.outcomes.push_back(static_cast<std::size_t>(it - cdf.begin()));
  }
  return s;
}

Distribution empirical(const SampleSet& samples, const Distribution& dist) {
  Distribution d;
  d.labels = dist.labels;
  d.numeric = dist.numeric;
  d.probabilities.assign(dist.size(), 0.0);
  const double w = 1.0 / static_cast<double>(samples.outcomes.size());
  for (std::size_t o : samples.outcomes) d.probabilities.at(o) += w;
  return d;
}

void write_distribution_csv(std::ostream& out, const Distribution& dist) {
  out << "label,probability\n";
  for (std::size_t i = 0; i < dist.size(); ++i) out << dist.label_string(i) << ',' << format_double(dist.probabilities[i]) << '\n';
}

void write_distribution_csv(const std::filesystem::path& path, const Distribution& dist) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_distribution_csv(out, dist);
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

Distribution read_distribution_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "label,probability") {
    throw Error(ErrorKind::Io, "distribution CSV must start with header 'label,probability'");
  }
  Distribution d;
  d.numeric = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorKind::Io, "malformed distribution row: " + line);
    Label label;
    std::stringstream parts(line.substr(0, comma));
    std::string coord;
    while (std::getline(parts, coord, ':')) label.push_back(std::stoll(coord));
    d.labels.push_back(std::move(label));
    d.probabilities.push_back(std::stod(line.substr(comma + 1)));
  }
  return d;
}

void write_samples(const std::filesystem::path& csv_path, const std::filesystem::path& json_path,
                   const SampleSet& samples, const Distribution& dist) {
  {
    std::ofstream out(csv_path);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + csv_path.string() + " for writing");
    out << "outcome\n";
    for (std::size_t o : samples.outcomes) out << dist.label_string(o) << '\n';
    if (!out) throw Error(ErrorKind::Io, "write failed: " + csv_path.string());
  }
  nlohmann::ordered_json j;
  j["seed"] = samples.seed;
  j["source"] = samples.source;
  j["count"] = samples.outcomes.size();
  std::ofstream out(json_path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + json_path.string() + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace qwalk
