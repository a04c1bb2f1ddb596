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

#include "qwalk/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "qwalk/analysis.hpp"
#include "qwalk/error.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {
namespace {

// ---- parsing ----------------------------------------------------------------

[[noreturn]] void syntax_error(int line, const std::string& what) {
  throw Error(ErrorKind::Validation, "config line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

ConfigScalar parse_scalar(const std::string& tok, int line) {
  if (tok.empty()) syntax_error(line, "empty value");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') syntax_error(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
      if (tok[i] == '\\' && i + 2 < tok.size()) ++i;
      out += tok[i];
    }
    return out;
  }
  if (tok == "true") return true;
  if (tok == "false") return false;

  static const std::regex pi_expr(R"(^([+-]?)(?:([0-9]+(?:\.[0-9]*)?)\*)?pi(?:/([0-9]+(?:\.[0-9]*)?))?$)");
  if (std::smatch m; std::regex_match(tok, m, pi_expr)) {
    double v = std::numbers::pi;
    if (m[2].matched) v *= std::stod(m[2].str());
    if (m[3].matched) v /= std::stod(m[3].str());
    return m[1].str() == "-" ? -v : v;
  }

  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (*first == '+') ++first;
  std::int64_t iv = 0;
  if (auto r = std::from_chars(first, last, iv); r.ec == std::errc{} && r.ptr == last) return iv;
  double dv = 0;
  if (auto r = std::from_chars(first, last, dv); r.ec == std::errc{} && r.ptr == last) return dv;

  static const std::regex word(R"(^[A-Za-z_][A-Za-z0-9_./-]*$)");
  if (std::regex_match(tok, word)) return tok;
  syntax_error(line, "cannot parse value '" + tok + "'");
}

// Splits a list body on commas outside quotes.
std::vector<std::string> split_list(const std::string& body, int line) {
  std::vector<std::string> parts;
  std::string cur;
  bool quoted = false;
  for (char ch : body) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (quoted) syntax_error(line, "unterminated string in list");
  if (!trim(cur).empty() || !parts.empty()) parts.push_back(trim(cur));
  return parts;
}

std::string strip_comment(const std::string& raw) {
  bool quoted = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '"') quoted = !quoted;
    if (raw[i] == '#' && !quoted) return raw.substr(0, i);
  }
  return raw;
}

// ---- interpretation ---------------------------------------------------------

std::string describe(const ConfigScalar& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return "'" + v + "'";
        else return format_double(static_cast<double>(v));
      },
      s);
}

class Reader {
 public:
  Reader(const ConfigDocument& doc, std::vector<Diagnostic>& diags) : doc_(doc), diags_(diags) {}

  void uint(const std::string& key, std::uint64_t& out) {
    if (auto* s = scalar(key)) {
      if (auto v = to_uint(*s)) out = *v;
      else bad(key, "a non-negative integer", *s);
    }
  }
  void uint(const std::string& key, std::optional<std::uint64_t>& out) {
    std::uint64_t v = 0;
    const bool had = doc_.contains(key);
    uint(key, v);
    if (had) out = v;
  }
  void real(const std::string& key, double& out) {
    if (auto* s = scalar(key)) {
      if (auto* i = std::get_if<std::int64_t>(s)) out = static_cast<double>(*i);
      else if (auto* d = std::get_if<double>(s)) out = *d;
      else bad(key, "a number", *s);
    }
  }
  void word(const std::string& key, std::string& out) {
    if (auto* s = scalar(key)) {
      if (auto* str = std::get_if<std::string>(s)) out = *str;
      else bad(key, "a word or string", *s);
    }
  }
  void uint_list(const std::string& key, std::vector<std::uint64_t>& out) {
    for_each_item(key, [&](const ConfigScalar& s) {
      if (auto v = to_uint(s)) out.push_back(*v);
      else bad(key, "non-negative integers", s);
    });
  }
  void real_list(const std::string& key, std::vector<double>& out) {
    for_each_item(key, [&](const ConfigScalar& s) {
      if (auto* i = std::get_if<std::int64_t>(&s)) out.push_back(static_cast<double>(*i));
      else if (auto* d = std::get_if<double>(&s)) out.push_back(*d);
      else bad(key, "numbers", s);
    });
  }
  void word_list(const std::string& key, std::vector<std::string>& out) {
    for_each_item(key, [&](const ConfigScalar& s) {
      if (auto* str = std::get_if<std::string>(&s)) out.push_back(*str);
      else bad(key, "words", s);
    });
  }

  template <class Enum>
  void choice(const std::string& key, Enum& out, std::initializer_list<std::pair<const char*, Enum>> options) {
    std::string name;
    if (!doc_.contains(key)) return;
    word(key, name);
    if (name.empty()) return;
    for (const auto& [label, value] : options) {
      if (name == label) {
        out = value;
        return;
      }
    }
    std::string allowed;
    for (const auto& [label, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + label;
    diags_.push_back({Diagnostic::Kind::Validation, key, "unknown value '" + name + "' (expected one of: " + allowed + ")"});
  }

  void report_unknown() {
    for (const auto& [key, value] : doc_) {
      if (!used_.contains(key)) {
        diags_.push_back({Diagnostic::Kind::Validation, key, "unknown key (line " + std::to_string(value.line) + ")"});
      }
    }
  }

 private:
  static std::optional<std::uint64_t> to_uint(const ConfigScalar& s) {
    if (auto* i = std::get_if<std::int64_t>(&s); i && *i >= 0) return static_cast<std::uint64_t>(*i);
    return std::nullopt;
  }

  const ConfigScalar* scalar(const std::string& key) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return nullptr;
    used_.insert(key);
    if (auto* s = std::get_if<ConfigScalar>(&it->second.value)) return s;
    diags_.push_back({Diagnostic::Kind::Validation, key, "expected a single value, got a list"});
    return nullptr;
  }

  template <class F>
  void for_each_item(const std::string& key, F&& f) {
    auto it = doc_.find(key);
    if (it == doc_.end()) return;
    used_.insert(key);
    if (auto* s = std::get_if<ConfigScalar>(&it->second.value)) {
      f(*s);
    } else {
      for (const auto& item : std::get<std::vector<ConfigScalar>>(it->second.value)) f(item);
    }
  }

  void bad(const std::string& key, const std::string& expected, const ConfigScalar& got) {
    diags_.push_back({Diagnostic::Kind::Validation, key, "expected " + expected + ", got " + describe(got)});
  }

  const ConfigDocument& doc_;
  std::vector<Diagnostic>& diags_;
  std::set<std::string> used_;
};

const std::set<std::string> kOutputs = {"distribution", "moments", "samples", "ipr", "tv_vs_classical", "joint"};

// ---- substrate helpers ------------------------------------------------------

std::uint64_t max_steps(const ExperimentConfig& c) {
  return c.steps.empty() ? 0 : *std::max_element(c.steps.begin(), c.steps.end());
}

double max_time(const ExperimentConfig& c) {
  return c.times.empty() ? 0.0 : *std::max_element(c.times.begin(), c.times.end());
}

// Line length when substrate.sites is not given: the full +-T light cone for
// coined walks, and a margin beyond the 2*gamma*t front for continuous ones
// so the truncated ends stay unpopulated to round-off.
std::uint64_t default_line_sites(const ExperimentConfig& c) {
  if (c.walk == WalkType::Discrete) return std::max<std::uint64_t>(2 * max_steps(c) + 1, 3);
  const double front = 2.0 * c.gamma * max_time(c);
  const auto half = static_cast<std::uint64_t>(std::ceil(front + 10.0 * std::cbrt(front) + 20.0));
  return 2 * half + 1;
}

Substrate build_substrate(const ExperimentConfig& c) {
  if (c.substrate.kind == "line") {
    return Substrate::line(c.substrate.sites.value_or(default_line_sites(c)), c.substrate.boundary);
  }
  if (c.substrate.kind == "lattice") {
    std::vector<std::size_t> dims(c.substrate.dims.begin(), c.substrate.dims.end());
    return Substrate::lattice(dims, c.substrate.boundary);
  }
  return read_adjacency(std::filesystem::path(c.substrate.file));
}

std::size_t centre_vertex(const Substrate& s) {
  if (!s.directional()) return 0;
  std::size_t v = 0;
  for (std::size_t len : s.dims()) v = v * len + (len - 1) / 2;
  return v;
}

CoinOperator make_coin(const std::string& name, std::size_t d) {
  if (name == "hadamard") {
    if (d != 2) throw Error(ErrorKind::Dimension, "hadamard coin is two-dimensional");
    return hadamard_coin();
  }
  if (name == "grover") return grover_coin(d);
  return dft_coin(d);
}

// Cross-field facts about the substrate needed by validation and estimates.
struct Shape {
  std::size_t vertices = 0;
  std::size_t coin_slots = 0;
  bool numeric = false;
  bool is_line = false;
};

std::optional<Shape> shape_of(const ExperimentConfig& c, std::vector<Diagnostic>& d) {
  try {
    const Substrate s = build_substrate(c);
    return Shape{s.n_vertices(), s.coin_slots(), s.directional(), s.dims().size() == 1};
  } catch (const Error& e) {
    const std::string key = c.substrate.kind == "line"      ? "substrate.sites"
                            : c.substrate.kind == "lattice" ? "substrate.dims"
                                                            : "substrate.file";
    d.push_back({Diagnostic::Kind::Validation, key, e.what()});
    return std::nullopt;
  }
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

nlohmann::ordered_json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

// Outputs of one sweep point, held in memory until every point succeeded.
struct JobFiles {
  std::string subdir;
  std::vector<std::pair<std::string, std::string>> files;
  nlohmann::ordered_json summary;
};

double tv_against_classical(const Distribution& dist, std::uint64_t steps) {
  const Distribution classical = classical_binomial(steps);
  double covered = 0, sum = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const std::int64_t x = dist.labels[i][0];
    double q = 0;
    if (std::llabs(x) <= static_cast<std::int64_t>(steps)) q = classical.probabilities[static_cast<std::size_t>(x + static_cast<std::int64_t>(steps))];
    covered += q;
    sum += std::abs(dist.probabilities[i] - q);
  }
  // Classical mass beyond the substrate counts fully.
  return 0.5 * (sum + std::max(0.0, 1.0 - covered));
}

JobFiles run_point(const ExperimentConfig& c, std::uint64_t steps, double time, const RunOptions& options) {
  const Substrate sub = build_substrate(c);
  const std::size_t origin = c.initial.start.value_or(centre_vertex(sub));
  const bool discrete = c.walk == WalkType::Discrete;
  NoiseModel noise = c.noise;
  noise.seed = c.noise_seed.value_or(c.seed);

  Distribution dist;
  std::optional<EnsembleResult> ensemble;
  std::optional<Distribution> joint;
  double leakage = std::numeric_limits<double>::quiet_NaN();
  std::string source;

  if (c.multiwalker()) {
    std::vector<std::uint64_t> starts = c.walkers.starts;
    if (starts.empty()) starts.assign(c.walkers.count, origin);
    std::vector<std::vector<Complex>> singles;
    MultiWalkerState state;
    if (discrete) {
      for (auto s : starts) singles.push_back(initial_state({c.initial.b, c.initial.beta, s}, sub).amplitudes);
      state = make_multiwalker(sub, c.walkers.statistics, WalkKind::DiscreteCoined, singles, c.memory_budget);
      state = multi_evolve_dt(state, make_coin(c.coin.name, sub.coin_slots()), sub, c.interaction, steps,
                              c.memory_budget);
    } else {
      for (auto s : starts) singles.push_back(vertex_state(sub, s).amplitudes);
      state = make_multiwalker(sub, c.walkers.statistics, WalkKind::Continuous, singles, c.memory_budget);
      state = multi_evolve_ct(state, sub, c.gamma, c.interaction, time, {}, c.memory_budget);
    }
    dist = position_distribution(state, sub, origin);
    if (c.wants("joint")) joint = joint_distribution(state, sub, origin);
    source = "multiwalker single-walker marginal";
  } else if (discrete) {
    const CoinOperator coin = make_coin(c.coin.name, sub.coin_slots());
    const InitialCoinSpec init{c.initial.b, c.initial.beta, origin};
    if (noise.active() && c.noise_method == NoiseMethod::Density) {
      DensityOptions opts;
      opts.memory_budget = c.memory_budget;
      opts.disorder_runs = c.runs;
      const DensityState rho =
          evolve_density(DensityState::pure(initial_state(init, sub)), coin, sub, noise, steps, opts);
      dist = position_distribution(rho, sub, origin);
      source = "density matrix diagonal";
    } else if (c.substrate.percolation) {
      ensemble = percolation_ensemble(sub, *c.substrate.percolation, c.substrate.p, coin, init, steps, c.runs, c.seed,
                                      options.threads, noise);
      dist = ensemble->mean;
      source = "percolation ensemble mean";
    } else if (noise.active()) {
      ensemble = ensemble_average(initial_state(init, sub), coin, sub, noise, steps, c.runs, c.seed, options.threads,
                                  origin);
      dist = ensemble->mean;
      source = "trajectory ensemble mean";
    } else {
      dist = position_distribution(evolve(initial_state(init, sub), coin, sub, steps), sub, origin);
      source = "pure coined walk";
    }
  } else {
    const Hamiltonian h = build_hamiltonian(sub, c.gamma);
    const ContinuousState psi = evolve_ct(vertex_state(sub, origin), h, time);
    dist = position_distribution(psi, sub, origin);
    leakage = boundary_probability(psi, sub);
    source = "continuous walk";
  }

  JobFiles job;
  auto add = [&](std::string name, std::string text) { job.files.emplace_back(std::move(name), std::move(text)); };

  if (c.wants("distribution")) {
    std::ostringstream os;
    write_distribution_csv(os, dist);
    add("distribution.csv", os.str());
  }
  if (c.wants("joint") && joint) {
    std::ostringstream os;
    write_distribution_csv(os, *joint);
    add("joint.csv", os.str());
  }
  if (c.wants("moments") && dist.numeric) {
    const Moments m = moments(dist);
    nlohmann::ordered_json j;
    j["mean"] = m.mean;
    j["variance"] = m.variance;
    j["sigma"] = m.sigma;
    if (ensemble) {
      j["sigma_stderr"] = number_or_null(ensemble->sigma_stderr);
      j["run_sigma_mean"] = number_or_null(ensemble->run_sigma_mean);
      j["run_sigma_stderr"] = number_or_null(ensemble->run_sigma_stderr);
    }
    add("moments.json", json_text(j));
  }
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  if (c.wants("ipr")) {
    metrics["ipr"] = ipr(dist);
    if (ensemble) {
      metrics["ipr_run_mean"] = ensemble->ipr_mean;
      metrics["ipr_run_stderr"] = ensemble->ipr_stderr;
    }
  }
  if (c.wants("tv_vs_classical")) metrics["tv_vs_classical"] = tv_against_classical(dist, steps);
  if (!std::isnan(leakage)) metrics["boundary_probability"] = leakage;
  if (ensemble) metrics["runs"] = ensemble->runs;
  if (!metrics.empty()) add("metrics.json", json_text(metrics));

  if (c.wants("samples")) {
    const std::uint64_t sample_seed = derive_seed(c.seed, 0, 4);
    const SampleSet s = sample(dist, c.sample_count, sample_seed, source);
    std::ostringstream csv;
    csv << "outcome\n";
    for (std::size_t o : s.outcomes) csv << dist.label_string(o) << '\n';
    add("samples.csv", csv.str());
    nlohmann::ordered_json side;
    side["seed"] = s.seed;
    side["source"] = s.source;
    side["count"] = s.outcomes.size();
    add("samples.json", json_text(side));
  }

  job.summary["source"] = source;
  job.summary["substrate"] = sub.provenance();
  job.summary["start_vertex"] = origin;
  job.summary["noise_seed"] = noise.seed;
  if (discrete) job.summary["steps"] = steps;
  else job.summary["time"] = time;
  return job;
}

std::string sweep_dir(const ExperimentConfig& c, std::size_t i) {
  return c.walk == WalkType::Discrete ? "T_" + std::to_string(c.steps[i]) : "t_" + format_double(c.times[i]);
}

}  // namespace

// ---- public API ---------------------------------------------------------------

ConfigDocument parse_config(std::istream& in) {
  ConfigDocument doc;
  std::string raw;
  int line = 0;
  static const std::regex key_re(R"(^[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)*$)");
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) syntax_error(line, "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string val = trim(std::string_view(text).substr(eq + 1));
    if (!std::regex_match(key, key_re)) syntax_error(line, "invalid key '" + key + "'");
    if (doc.contains(key)) syntax_error(line, "duplicate key '" + key + "'");
    ConfigValue v;
    v.line = line;
    if (!val.empty() && val.front() == '[') {
      if (val.back() != ']') syntax_error(line, "unterminated list");
      std::vector<ConfigScalar> items;
      for (const auto& part : split_list(val.substr(1, val.size() - 2), line)) items.push_back(parse_scalar(part, line));
      v.value = std::move(items);
    } else {
      v.value = parse_scalar(val, line);
    }
    doc.emplace(key, std::move(v));
  }
  return doc;
}

ConfigDocument parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  return parse_config(in);
}

bool ExperimentConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

std::string Diagnostic::to_string() const {
  return (kind == Kind::Resource ? "resource: " : "") + path + ": " + message;
}

ExperimentConfig interpret(const ConfigDocument& doc, std::vector<Diagnostic>& diagnostics) {
  ExperimentConfig c;
  Reader r(doc, diagnostics);
  r.choice("walk", c.walk, {{"discrete", WalkType::Discrete}, {"continuous", WalkType::Continuous}});

  r.word("substrate.kind", c.substrate.kind);
  r.uint("substrate.sites", c.substrate.sites);
  r.uint_list("substrate.dims", c.substrate.dims);
  r.choice("substrate.boundary", c.substrate.boundary, {{"open", Boundary::Open}, {"periodic", Boundary::Periodic}});
  r.word("substrate.file", c.substrate.file);
  {
    enum class Perc { None, Bond, Site } perc = Perc::None;
    r.choice("substrate.percolation.mode", perc, {{"none", Perc::None}, {"bond", Perc::Bond}, {"site", Perc::Site}});
    if (perc == Perc::Bond) c.substrate.percolation = PercolationMode::Bond;
    if (perc == Perc::Site) c.substrate.percolation = PercolationMode::Site;
  }
  r.real("substrate.percolation.p", c.substrate.p);

  r.word("coin.name", c.coin.name);
  r.uint("coin.dimension", c.coin.dimension);

  r.real("initial.b", c.initial.b);
  r.real("initial.beta", c.initial.beta);
  r.uint("initial.start", c.initial.start);

  r.uint("walkers.count", c.walkers.count);
  r.choice("walkers.statistics", c.walkers.statistics,
           {{"distinguishable", Statistics::Distinguishable}, {"boson", Statistics::Boson}, {"fermion", Statistics::Fermion}});
  r.uint_list("walkers.starts", c.walkers.starts);

  r.choice("noise.kind", c.noise.kind,
           {{"none", NoiseKind::None},
            {"coin_measure", NoiseKind::CoinMeasure},
            {"position_measure", NoiseKind::PositionMeasure},
            {"static_phase", NoiseKind::StaticPhase},
            {"fast_phase", NoiseKind::FastPhase},
            {"slow_phase", NoiseKind::SlowPhase}});
  r.real("noise.strength", c.noise.strength);
  r.uint("noise.seed", c.noise_seed);
  r.choice("noise.method", c.noise_method, {{"trajectory", NoiseMethod::Trajectory}, {"density", NoiseMethod::Density}});

  r.choice("interaction.kind", c.interaction.kind,
           {{"none", InteractionKind::None}, {"collision_phase", InteractionKind::CollisionPhase}, {"hubbard", InteractionKind::Hubbard}});
  r.real("interaction.phi", c.interaction.phi);
  r.real("interaction.U", c.interaction.U);

  r.real("gamma", c.gamma);
  r.uint_list("steps", c.steps);
  r.real_list("time", c.times);
  r.uint("runs", c.runs);
  r.uint("seed", c.seed);
  if (doc.contains("outputs")) {
    c.outputs.clear();
    r.word_list("outputs", c.outputs);
  }
  r.uint("samples.count", c.sample_count);
  r.uint("memory_budget", c.memory_budget);
  r.report_unknown();
  return c;
}

std::vector<Diagnostic> validate(const ExperimentConfig& c) {
  using K = Diagnostic::Kind;
  std::vector<Diagnostic> d;
  auto fail = [&](const std::string& path, const std::string& msg) { d.push_back({K::Validation, path, msg}); };
  const bool discrete = c.walk == WalkType::Discrete;

  if (discrete) {
    if (c.steps.empty()) fail("steps", "discrete walks need at least one step count");
    if (!c.times.empty()) fail("time", "time applies to continuous walks; use steps");
  } else {
    if (c.times.empty()) fail("time", "continuous walks need at least one evolution time");
    for (double t : c.times)
      if (!(t >= 0.0) || !std::isfinite(t)) fail("time", "evolution times must be finite and >= 0");
    if (!c.steps.empty()) fail("steps", "steps apply to discrete walks; use time");
    if (!(c.gamma > 0.0) || !std::isfinite(c.gamma)) fail("gamma", "hopping rate must be positive");
  }

  const auto& s = c.substrate;
  if (s.kind != "line" && s.kind != "lattice" && s.kind != "adjacency") {
    fail("substrate.kind", "unknown substrate '" + s.kind + "' (expected line, lattice or adjacency)");
    return d;
  }
  if (s.kind == "lattice" && s.dims.empty()) fail("substrate.dims", "lattice needs dims");
  if (s.kind == "adjacency" && s.file.empty()) fail("substrate.file", "adjacency substrate needs a file");
  if (s.kind != "line" && s.sites) fail("substrate.sites", "sites applies to line substrates only");
  if (s.kind != "lattice" && !s.dims.empty()) fail("substrate.dims", "dims applies to lattice substrates only");
  if (!(s.p >= 0.0 && s.p <= 1.0)) fail("substrate.percolation.p", "percolation probability must lie in [0,1]");
  if (s.percolation && !discrete) fail("substrate.percolation.mode", "percolation ensembles are run for discrete walks");
  if (!d.empty()) return d;

  const auto shape = shape_of(c, d);
  if (!shape) return d;

  if (discrete) {
    if (c.coin.name != "hadamard" && c.coin.name != "grover" && c.coin.name != "dft") {
      fail("coin.name", "unknown coin '" + c.coin.name + "' (expected hadamard, grover or dft)");
    } else if (c.coin.dimension && *c.coin.dimension != shape->coin_slots) {
      fail("coin.dimension", "coin dimension " + std::to_string(*c.coin.dimension) + " does not match the substrate (" +
                                 std::to_string(shape->coin_slots) + " coin slots)");
    } else if (c.coin.name == "hadamard" && shape->coin_slots != 2) {
      fail("coin.name", "hadamard coin is two-dimensional; substrate needs " + std::to_string(shape->coin_slots));
    }
    if (shape->coin_slots < 2) fail("substrate", "coined walks need at least two coin slots");
  }
  if (!(c.initial.b >= 0.0 && c.initial.b <= 1.0)) fail("initial.b", "bias must lie in [0,1]");
  if (!std::isfinite(c.initial.beta)) fail("initial.beta", "phase must be finite");
  if (c.initial.start && *c.initial.start >= shape->vertices) {
    fail("initial.start", "start vertex " + std::to_string(*c.initial.start) + " outside substrate of " +
                              std::to_string(shape->vertices) + " vertices");
  }

  // Noise
  try {
    c.noise.validate();
  } catch (const Error& e) {
    fail("noise.strength", e.what());
  }
  if (c.noise.kind != NoiseKind::None) {
    if (!discrete) fail("noise.kind", std::string(to_string(c.noise.kind)) + " noise is defined for discrete walks only");
    if (c.multiwalker()) fail("noise.kind", "noise is not supported with multiple walkers");
  }
  if (c.noise_method == NoiseMethod::Density && discrete && c.noise.active() && !c.multiwalker()) {
    const std::size_t n = shape->vertices * shape->coin_slots;
    if (static_cast<long double>(n) * n > static_cast<long double>(c.memory_budget)) {
      d.push_back({K::Resource, "memory_budget",
                   "density matrix needs " + std::to_string(n) + "^2 amplitudes; budget " + std::to_string(c.memory_budget)});
    }
    if (s.percolation) fail("noise.method", "density evolution does not combine with percolation ensembles");
  }

  // Walkers and interactions
  if (c.walkers.count == 0) fail("walkers.count", "need at least one walker");
  if (!c.walkers.starts.empty() && c.walkers.starts.size() != c.walkers.count) {
    fail("walkers.starts", "expected " + std::to_string(c.walkers.count) + " start vertices");
  }
  for (auto v : c.walkers.starts)
    if (v >= shape->vertices) fail("walkers.starts", "start vertex " + std::to_string(v) + " out of range");
  if (c.multiwalker()) {
    if (s.percolation) fail("substrate.percolation.mode", "percolation ensembles are single-walker");
    if (c.walkers.statistics == Statistics::Fermion) {
      std::set<std::uint64_t> distinct(c.walkers.starts.begin(), c.walkers.starts.end());
      if (distinct.size() != c.walkers.count) fail("walkers.starts", "fermions need distinct start vertices");
    }
    const GuardResult g = check_dimension(shape->vertices, c.walkers.count, discrete ? shape->coin_slots : 1,
                                          c.memory_budget, discrete ? WalkKind::DiscreteCoined : WalkKind::Continuous);
    if (!g.ok) d.push_back({K::Resource, "walkers.count", g.message});
  } else if (c.walkers.statistics != Statistics::Distinguishable) {
    fail("walkers.statistics", "particle statistics need walkers.count > 1");
  }
  if (c.interaction.kind == InteractionKind::CollisionPhase && !discrete) {
    fail("interaction.kind", "collision_phase applies to discrete walks (use hubbard)");
  }
  if (c.interaction.kind == InteractionKind::Hubbard && discrete) {
    fail("interaction.kind", "hubbard applies to continuous walks (use collision_phase)");
  }
  if (c.interaction.kind != InteractionKind::None && !c.multiwalker()) {
    fail("interaction.kind", "interactions need walkers.count > 1");
  }
  if (!c.multiwalker() && shape->vertices * (discrete ? shape->coin_slots : 1) > c.memory_budget) {
    d.push_back({K::Resource, "memory_budget", "state needs more amplitudes than the budget allows"});
  }

  // Ensemble and outputs
  if (c.runs == 0) fail("runs", "runs must be >= 1");
  if (c.memory_budget == 0) fail("memory_budget", "budget must be positive");
  if (c.outputs.empty()) fail("outputs", "request at least one output");
  for (const auto& o : c.outputs) {
    if (!kOutputs.contains(o)) fail("outputs", "unknown output '" + o + "'");
  }
  if (c.wants("samples") && c.sample_count == 0) fail("samples.count", "sample count must be >= 1");
  if (c.wants("moments") && !shape->numeric) fail("outputs", "moments need coordinate labels (line or lattice)");
  if (c.wants("tv_vs_classical") && !(discrete && shape->is_line)) {
    fail("outputs", "tv_vs_classical compares discrete walks on a line with the classical binomial");
  }
  if (c.wants("joint") && !c.multiwalker()) fail("outputs", "joint needs walkers.count > 1");
  return d;
}

LoadedConfig load_config(std::istream& in) {
  LoadedConfig lc;
  const ConfigDocument doc = parse_config(in);
  lc.config = interpret(doc, lc.diagnostics);
  if (lc.diagnostics.empty()) lc.diagnostics = validate(lc.config);
  return lc;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  LoadedConfig lc;
  const ConfigDocument doc = parse_config_file(path);
  lc.config = interpret(doc, lc.diagnostics);
  auto& file = lc.config.substrate.file;
  if (!file.empty() && std::filesystem::path(file).is_relative()) {
    file = (path.parent_path() / file).lexically_normal().string();
  }
  if (lc.diagnostics.empty()) lc.diagnostics = validate(lc.config);
  return lc;
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["walk"] = walk == WalkType::Discrete ? "discrete" : "continuous";
  auto& sj = j["substrate"];
  sj["kind"] = substrate.kind;
  if (substrate.kind == "line") sj["sites"] = substrate.sites.value_or(default_line_sites(*this));
  if (substrate.kind == "lattice") sj["dims"] = substrate.dims;
  if (substrate.kind == "adjacency") sj["file"] = substrate.file;
  sj["boundary"] = substrate.boundary == Boundary::Open ? "open" : "periodic";
  if (substrate.percolation) {
    sj["percolation"]["mode"] = *substrate.percolation == PercolationMode::Bond ? "bond" : "site";
    sj["percolation"]["p"] = substrate.p;
  }
  if (walk == WalkType::Discrete) {
    j["coin"]["name"] = coin.name;
    if (coin.dimension) j["coin"]["dimension"] = *coin.dimension;
    j["initial"]["b"] = initial.b;
    j["initial"]["beta"] = initial.beta;
  } else {
    j["gamma"] = gamma;
  }
  if (initial.start) j["initial"]["start"] = *initial.start;
  j["walkers"]["count"] = walkers.count;
  j["walkers"]["statistics"] = to_string(walkers.statistics);
  if (!walkers.starts.empty()) j["walkers"]["starts"] = walkers.starts;
  j["noise"]["kind"] = to_string(noise.kind);
  j["noise"]["strength"] = noise.strength;
  j["noise"]["seed"] = noise_seed.value_or(seed);
  j["noise"]["method"] = noise_method == NoiseMethod::Trajectory ? "trajectory" : "density";
  j["interaction"]["kind"] = to_string(interaction.kind);
  if (interaction.kind == InteractionKind::CollisionPhase) j["interaction"]["phi"] = interaction.phi;
  if (interaction.kind == InteractionKind::Hubbard) j["interaction"]["U"] = interaction.U;
  if (walk == WalkType::Discrete) j["steps"] = steps;
  else j["time"] = times;
  j["runs"] = runs;
  j["seed"] = seed;
  j["outputs"] = outputs;
  if (wants("samples")) j["samples"]["count"] = sample_count;
  j["memory_budget"] = memory_budget;
  return j;
}

nlohmann::ordered_json run(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                           const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = iso_utc_now();

  const auto diags = validate(config);
  std::string problems;
  bool resource_only = true;
  for (const auto& d : diags) {
    problems += (problems.empty() ? "" : "; ") + d.to_string();
    resource_only = resource_only && d.kind == Diagnostic::Kind::Resource;
  }
  if (!diags.empty()) throw Error(resource_only ? ErrorKind::Resource : ErrorKind::Validation, problems);

  const std::size_t points = config.walk == WalkType::Discrete ? config.steps.size() : config.times.size();
  std::vector<JobFiles> jobs;
  for (std::size_t i = 0; i < points; ++i) {
    const std::uint64_t steps = config.walk == WalkType::Discrete ? config.steps[i] : 0;
    const double time = config.walk == WalkType::Continuous ? config.times[i] : 0.0;
    JobFiles job = run_point(config, steps, time, options);
    if (points > 1) job.subdir = sweep_dir(config, i);
    jobs.push_back(std::move(job));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  nlohmann::ordered_json top;
  top["tool"] = "qwalk";
  top["version"] = QWALK_VERSION;
  top["config"] = config.to_json();
  top["seeds"]["master"] = config.seed;
  top["seeds"]["noise"] = config.noise_seed.value_or(config.seed);
  top["seeds"]["samples"] = derive_seed(config.seed, 0, 4);
  top["seeds"]["run_rule"] = "run i: splitmix64(master ^ splitmix64(i)); percolation stream 2, noise stream 1";
  top["started_at"] = started_at;
  top["wall_clock_seconds"] = wall;

  // Files are written only after every sweep point succeeded.
  std::vector<std::filesystem::path> created;
  try {
    if (!std::filesystem::exists(out_dir)) {
      std::filesystem::create_directories(out_dir);
      created.push_back(out_dir);
    }
    auto write = [&](const std::filesystem::path& p, const std::string& text) {
      std::ofstream out(p, std::ios::binary);
      if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
      created.push_back(p);
      out << text;
      if (!out) throw Error(ErrorKind::Io, "write failed: " + p.string());
    };
    nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
    for (const auto& job : jobs) {
      std::filesystem::path dir = out_dir;
      if (!job.subdir.empty()) {
        dir /= job.subdir;
        if (!std::filesystem::exists(dir)) {
          std::filesystem::create_directory(dir);
          created.push_back(dir);
        }
      }
      nlohmann::ordered_json files = nlohmann::ordered_json::array();
      for (const auto& [name, text] : job.files) {
        write(dir / name, text);
        files.push_back(name);
      }
      nlohmann::ordered_json m = top;
      m["job"] = job.summary;
      m["outputs"] = files;
      write(dir / "manifest.json", json_text(m));
      if (!job.subdir.empty()) sweep.push_back({{"directory", job.subdir}, {"job", job.summary}});
    }
    if (points > 1) {
      top["sweep"] = sweep;
      write(out_dir / "manifest.json", json_text(top));
    }
  } catch (...) {
    for (auto it = created.rbegin(); it != created.rend(); ++it) {
      std::error_code ec;
      std::filesystem::remove(*it, ec);
    }
    throw;
  }
  if (points == 1) {
    top["job"] = jobs.front().summary;
  } else {
    top["sweep"] = nlohmann::ordered_json::array();
    for (const auto& job : jobs) top["sweep"].push_back({{"directory", job.subdir}, {"job", job.summary}});
  }
  return top;
}

std::string estimate(const ExperimentConfig& c, std::uint64_t memory_bytes) {
  std::vector<Diagnostic> ignored;
  const auto shape = shape_of(c, ignored);
  if (!shape) throw Error(ErrorKind::Validation, ignored.front().to_string());
  const bool discrete = c.walk == WalkType::Discrete;
  const std::uint64_t coin = discrete ? shape->coin_slots : 1;

  std::ostringstream os;
  os << "walk: " << (discrete ? "discrete" : "continuous") << ", " << shape->vertices << " vertices";
  if (discrete) os << ", coin dimension " << coin;
  os << '\n';

  const GuardResult g = check_dimension(shape->vertices, c.walkers.count, coin, c.memory_budget,
                                        discrete ? WalkKind::DiscreteCoined : WalkKind::Continuous);
  os << "state amplitudes: " << g.message << (g.ok ? " (fits)" : " (exceeds budget)") << '\n';
  if (discrete && c.walkers.count == 1) {
    const std::uint64_t n = shape->vertices * coin;
    os << "density-matrix entries: " << n << "^2 = " << n * n << '\n';
  }
  if (discrete) {
    for (std::uint64_t t : c.steps) {
      if (t > 0) os << "qubits_needed(T=" << t << "): " << qubits_needed(t) << '\n';
    }
  }
  os << "amplitude_capacity(" << memory_bytes << " bytes, 4-byte floats): " << amplitude_capacity(memory_bytes, 4)
     << '\n';
  os << "amplitude_capacity(" << memory_bytes << " bytes, 8-byte floats): " << amplitude_capacity(memory_bytes, 8)
     << '\n';
  os << "density_capacity(" << memory_bytes << " bytes, 4-byte floats): " << density_capacity(memory_bytes, 4)
     << " basis states\n";
  return os.str();
}

}  // namespace qwalk
