// Copyright 2026 The dbgas Authors. - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DBGAS_CONFIG_HPP
#define DBGAS_CONFIG_HPP

// Run configuration: line-oriented `key = value` text with optional
// `[section]` headers. Keys before the first header may come from any
// section. '#' and ';' start comments. Lists are separated by commas and/or
// blanks and may be wrapped in [ ]. Every problem is collected and reported
// together, each with its line number or field name.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dbgas/coupling.hpp"
#include "dbgas/errors.hpp"
#include "dbgas/geometry.hpp"
#include "dbgas/mollified.hpp"
#include "dbgas/observables.hpp"
#include "dbgas/series.hpp"

namespace dbgas {

/// Thrown by parse_config() with every violation found.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : ValidationError(join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s = "invalid configuration:";
    for (const auto& x : p) s += "\n  " + x;
    return s;
  }
  std::vector<std::string> problems_;
};

enum class ObservableKind { kOne, kGaussianBump };
enum class DriftMode { kGrid, kPath };

struct RunConfig {
  // [system]
  int n = 0;
  double t = 0.0;
  std::vector<double> z0;
  // [coupling]
  std::vector<double> beta;    // empty: derived from lambda
  std::vector<double> lambda;  // empty: derived from beta
  std::vector<double> w{1.0};
  MollifierKind mollifier = MollifierKind::kSmoothBump;
  double mollifier_radius = 1.0;
  // [run]
  std::uint64_t n_samples = 100000;
  int m_max = 2;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  ChainSampling sampling = ChainSampling::kContactImportance;
  ObservableKind observable = ObservableKind::kOne;
  double bump_width = 1.0;
  std::string out;
  // [mollified]
  double eps = 0.05;
  std::vector<double> eps_list{0.05, 0.02, 0.01};
  double h = 0.0;  // 0: eps^2 / 20
  bool common_random_numbers = false;
  // [drift]
  DriftMode drift_mode = DriftMode::kGrid;
  int grid_label = 0;  // 0: particle N
  double x_min = -2.0, x_max = 2.0, y_min = -2.0, y_max = 2.0;
  int resolution = 21;
  double path_h = 1e-3;
  double eta_stop = 0.01;

  Configuration initial() const { return Configuration::from_reals(z0); }

  CouplingParams coupling() const {
    const MollifierSpec spec(mollifier, mollifier_radius);
    return beta.empty() ? CouplingParams::from_lambda(n, lambda, w, spec)
                        : CouplingParams::from_beta(n, beta, w, spec);
  }

  Observable make_observable() const {
    if (observable == ObservableKind::kGaussianBump) return gaussian_bump(initial(), bump_width);
    return constant_one();
  }
};

namespace detail {

struct ConfigKey {
  const char* section;
  const char* name;
};

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"system", "N"},
      {"system", "t"},
      {"system", "z0"},
      {"coupling", "beta"},
      {"coupling", "lambda"},
      {"coupling", "w"},
      {"coupling", "mollifier"},
      {"coupling", "mollifier_radius"},
      {"run", "n_samples"},
      {"run", "m_max"},
      {"run", "seed"},
      {"run", "threads"},
      {"run", "sampling"},
      {"run", "observable"},
      {"run", "bump_width"},
      {"run", "out"},
      {"mollified", "eps"},
      {"mollified", "eps_list"},
      {"mollified", "h"},
      {"mollified", "common_random_numbers"},
      {"drift", "mode"},
      {"drift", "label"},
      {"drift", "x_min"},
      {"drift", "x_max"},
      {"drift", "y_min"},
      {"drift", "y_max"},
      {"drift", "resolution"},
      {"drift", "h"},
      {"drift", "eta_stop"},
  };
  return keys;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct RawValue {
  std::string text;
  int line = 0;
};

class FieldReader {
 public:
  FieldReader(const std::map<std::string, RawValue>& raw, std::vector<std::string>& problems)
      : raw_(raw), problems_(problems) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::optional<double> real(const std::string& key) {
    if (!has(key)) return std::nullopt;
    double x = 0.0;
    if (!to_real(raw_.at(key).text, x)) {
      fail(key, "expected a real number, got '" + raw_.at(key).text + "'");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::int64_t> integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& s = raw_.at(key).text;
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(key, "expected an integer, got '" + s + "'");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::uint64_t> unsigned64(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& s = raw_.at(key).text;
    std::uint64_t x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) {
      fail(key, "expected an unsigned 64-bit integer, got '" + s + "'");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::vector<double>> reals(const std::string& key) {
    if (!has(key)) return std::nullopt;
    std::string s = raw_.at(key).text;
    if (!s.empty() && s.front() == '[') {
      if (s.back() != ']') {
        fail(key, "unterminated list");
        return std::nullopt;
      }
      s = s.substr(1, s.size() - 2);
    }
    for (char& c : s) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
      double x = 0.0;
      if (!to_real(tok, x)) {
        fail(key, "list entry '" + tok + "' is not a real number");
        return std::nullopt;
      }
      out.push_back(x);
    }
    return out;
  }

  std::optional<std::string> text(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return raw_.at(key).text;
  }

  std::optional<bool> boolean(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const auto& s = raw_.at(key).text;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(key, "expected true or false, got '" + s + "'");
    return std::nullopt;
  }

  void fail(const std::string& key, const std::string& what) {
    std::string where = key;
    if (has(key)) where += " (line " + std::to_string(raw_.at(key).line) + ")";
    problems_.push_back(where + ": " + what);
  }

 private:
  static bool to_real(const std::string& s, double& x) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [p, ec] = std::from_chars(first, last, x);
    return ec == std::errc() && p == last && first != last;
  }

  const std::map<std::string, RawValue>& raw_;
  std::vector<std::string>& problems_;
};

}  // namespace detail

/// Parses and validates a configuration; throws ConfigError listing every
/// problem. `require_separated` enforces the separation of z0 (tolerance 1e-9).
inline RunConfig parse_config(const std::string& text, bool require_separated_z0 = true) {
  std::vector<std::string> problems;
  std::map<std::string, detail::RawValue> raw;
  std::set<std::string> sections;
  for (const auto& k : detail::config_keys()) sections.insert(k.section);

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back("line " + std::to_string(lineno) + ": malformed section header");
        continue;
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) {
        problems.push_back("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const detail::ConfigKey* match = nullptr;
    for (const auto& k : detail::config_keys()) {
      if (key == k.name && (section.empty() || section == k.section)) {
        match = &k;
        break;
      }
    }
    if (!match) {
      problems.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'" +
                         (section.empty() ? "" : " in [" + section + "]"));
      continue;
    }
    // Keys shared by two sections (h) are stored qualified.
    const std::string id = std::string(match->section) + "." + match->name;
    if (raw.count(id)) {
      problems.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                         std::to_string(raw[id].line) + ")");
      continue;
    }
    if (value.empty()) {
      problems.push_back("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
      continue;
    }
    raw[id] = {value, lineno};
  }

  detail::FieldReader f(raw, problems);
  RunConfig c;
  const auto n = f.integer("system.N");
  const auto t = f.real("system.t");
  const auto z0 = f.reals("system.z0");
  if (!f.has("system.N")) problems.push_back("N: required field missing");
  if (!f.has("system.t")) problems.push_back("t: required field missing");
  if (!f.has("system.z0")) problems.push_back("z0: required field missing");
  if (n) {
    if (*n < 2 || *n > 12) {
      f.fail("system.N", "N must lie in [2, 12]");
    } else {
      c.n = static_cast<int>(*n);
    }
  }
  if (t) {
    if (!(*t > 0.0) || !std::isfinite(*t)) {
      f.fail("system.t", "t must be positive and finite");
    } else {
      c.t = *t;
    }
  }
  if (z0) {
    bool finite = true;
    for (double x : *z0) finite = finite && std::isfinite(x);
    if (!finite) {
      f.fail("system.z0", "z0 entries must be finite");
    } else if (c.n > 0 && z0->size() != 2 * static_cast<std::size_t>(c.n)) {
      f.fail("system.z0", "z0 needs 2N = " + std::to_string(2 * c.n) + " reals, got " + std::to_string(z0->size()));
    } else {
      c.z0 = *z0;
      if (c.n > 0 && require_separated_z0 && !is_separated(c.initial(), kSeparationTol)) {
        f.fail("system.z0", "z0 must be Separated: every pair distance must exceed 1e-9");
      }
    }
  }

  const std::size_t pairs = c.n > 0 ? static_cast<std::size_t>(pair_count(c.n)) : 0;
  auto per_pair = [&](const std::string& key, const char* name, bool positive) -> std::optional<std::vector<double>> {
    auto v = f.reals(key);
    if (!v) return std::nullopt;
    if (v->empty()) {
      f.fail(key, std::string(name) + " is empty");
      return std::nullopt;
    }
    if (pairs > 0 && v->size() != 1 && v->size() != pairs) {
      f.fail(key, std::string(name) + " needs 1 or N(N-1)/2 = " + std::to_string(pairs) + " values");
      return std::nullopt;
    }
    for (double x : *v) {
      if (!std::isfinite(x) || (positive && !(x > 0.0))) {
        f.fail(key, std::string(name) + (positive ? " values must be positive" : " values must be finite"));
        return std::nullopt;
      }
    }
    return v;
  };
  const auto beta = per_pair("coupling.beta", "beta", true);
  const auto lambda = per_pair("coupling.lambda", "lambda", false);
  if (f.has("coupling.beta") && f.has("coupling.lambda")) {
    f.fail("coupling.lambda", "give either beta or lambda, not both");
  } else if (lambda) {
    c.lambda = *lambda;
  } else if (beta) {
    c.beta = *beta;
  } else if (!f.has("coupling.beta") && !f.has("coupling.lambda")) {
    c.beta = {1.0};
  }
  if (auto w = per_pair("coupling.w", "w", true)) c.w = *w;
  if (auto m = f.text("coupling.mollifier")) {
    try {
      c.mollifier = mollifier_kind_from_string(*m);
    } catch (const ValidationError&) {
      f.fail("coupling.mollifier", "expected smooth_bump or disk_uniform, got '" + *m + "'");
    }
  }
  if (auto r = f.real("coupling.mollifier_radius")) {
    if (!(*r > 0.0) || !std::isfinite(*r)) {
      f.fail("coupling.mollifier_radius", "mollifier_radius must be positive");
    } else {
      c.mollifier_radius = *r;
    }
  }

  if (auto v = f.unsigned64("run.n_samples")) {
    if (*v == 0) {
      f.fail("run.n_samples", "n_samples must be at least 1");
    } else {
      c.n_samples = *v;
    }
  }
  if (auto v = f.integer("run.m_max")) {
    if (*v < 0 || *v > 10) {
      f.fail("run.m_max", "m_max must lie in [0, 10]");
    } else {
      c.m_max = static_cast<int>(*v);
    }
  }
  if (auto v = f.unsigned64("run.seed")) c.seed = *v;
  if (auto v = f.integer("run.threads")) {
    if (*v < 1 || *v > 1024) {
      f.fail("run.threads", "threads must lie in [1, 1024]");
    } else {
      c.threads = static_cast<unsigned>(*v);
    }
  }
  if (auto s = f.text("run.sampling")) {
    try {
      c.sampling = chain_sampling_from_string(*s);
    } catch (const ValidationError&) {
      f.fail("run.sampling", "expected importance or uniform, got '" + *s + "'");
    }
  }
  if (auto s = f.text("run.observable")) {
    if (*s == "one") {
      c.observable = ObservableKind::kOne;
    } else if (*s == "gaussian_bump") {
      c.observable = ObservableKind::kGaussianBump;
    } else {
      f.fail("run.observable", "expected one or gaussian_bump, got '" + *s + "'");
    }
  }
  if (auto v = f.real("run.bump_width")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) {
      f.fail("run.bump_width", "bump_width must be positive");
    } else {
      c.bump_width = *v;
    }
  }
  if (auto s = f.text("run.out")) c.out = *s;

  auto check_eps = [](double e) { return e > 0.0 && e < 1.0; };
  if (auto v = f.real("mollified.eps")) {
    if (!check_eps(*v)) {
      f.fail("mollified.eps", "eps must lie in (0, 1)");
    } else {
      c.eps = *v;
    }
  }
  if (auto v = f.reals("mollified.eps_list")) {
    bool ok = !v->empty();
    for (double e : *v) ok = ok && check_eps(e);
    if (!ok) {
      f.fail("mollified.eps_list", "eps_list must be a non-empty list of values in (0, 1)");
    } else {
      c.eps_list = *v;
    }
  }
  if (auto v = f.real("mollified.h")) {
    if (!(*v >= 0.0) || !std::isfinite(*v)) {
      f.fail("mollified.h", "h must be non-negative (0 selects eps^2/20)");
    } else {
      c.h = *v;
    }
  }
  if (auto v = f.boolean("mollified.common_random_numbers")) c.common_random_numbers = *v;

  if (auto s = f.text("drift.mode")) {
    if (*s == "grid") {
      c.drift_mode = DriftMode::kGrid;
    } else if (*s == "path") {
      c.drift_mode = DriftMode::kPath;
    } else {
      f.fail("drift.mode", "expected grid or path, got '" + *s + "'");
    }
  }
  if (auto v = f.integer("drift.label")) {
    if (*v < 1 || (c.n > 0 && *v > c.n)) {
      f.fail("drift.label", "label must lie in [1, N]");
    } else {
      c.grid_label = static_cast<int>(*v);
    }
  }
  for (auto [key, dst] : {std::pair{"drift.x_min", &c.x_min}, std::pair{"drift.x_max", &c.x_max},
                          std::pair{"drift.y_min", &c.y_min}, std::pair{"drift.y_max", &c.y_max}}) {
    if (auto v = f.real(key)) {
      if (!std::isfinite(*v)) {
        f.fail(key, "grid bounds must be finite");
      } else {
        *dst = *v;
      }
    }
  }
  if (!(c.x_min < c.x_max)) problems.push_back("x_min/x_max: require x_min < x_max");
  if (!(c.y_min < c.y_max)) problems.push_back("y_min/y_max: require y_min < y_max");
  if (auto v = f.integer("drift.resolution")) {
    if (*v < 2 || *v > 2001) {
      f.fail("drift.resolution", "resolution must lie in [2, 2001]");
    } else {
      c.resolution = static_cast<int>(*v);
    }
  }
  if (auto v = f.real("drift.h")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) {
      f.fail("drift.h", "drift h must be positive");
    } else {
      c.path_h = *v;
    }
  }
  if (auto v = f.real("drift.eta_stop")) {
    if (!(*v > 0.0) || !std::isfinite(*v)) {
      f.fail("drift.eta_stop", "eta_stop must be positive");
    } else {
      c.eta_stop = *v;
    }
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  try {
    (void)c.coupling();
  } catch (const std::exception& e) {
    throw ConfigError({std::string("coupling: ") + e.what()});
  }
  return c;
}

inline RunConfig load_config(const std::string& path, bool require_separated_z0 = true) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), require_separated_z0);
}

}  // namespace dbgas

#endif  // DBGAS_CONFIG_HPP
