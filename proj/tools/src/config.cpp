// Copyright 2026 The AAPDA Authors
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

#include "bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "aapda/format.hpp"

namespace bench {

using aapda::trim;

std::string_view to_string(ExperimentTag tag) {
  switch (tag) {
    case ExperimentTag::kExample1: return "example1";
    case ExperimentTag::kExample2: return "example2";
    case ExperimentTag::kCustom: return "custom";
    case ExperimentTag::kOde: return "ode";
  }
  return "unknown";
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kAapda: return "aapda";
    case SolverKind::kLinAlm: return "lin-alm";
    case SolverKind::kFista: return "fista";
    case SolverKind::kOde: return "ode";
  }
  return "unknown";
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i > 0) out << '\n';
    if (issues[i].line > 0) out << "line " << issues[i].line << ": ";
    out << issues[i].message;
  }
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : aapda::Error(aapda::ErrorCode::kParse, join_issues(issues)), issues_(std::move(issues)) {}

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

struct RawSection {
  std::string kind;  // experiment, solver, output
  std::string name;  // solver label
  int line = 0;
  std::vector<Entry> entries;

  std::string title() const { return name.empty() ? "[" + kind + "]" : "[" + kind + " " + name + "]"; }
};

// Typed access to one section. Every lookup marks the key as known; whatever
// is left unmarked afterwards is an unknown key.
class Reader {
 public:
  Reader(RawSection& section, std::vector<ConfigIssue>& issues) : s_(section), issues_(issues) {}

  const Entry* find(std::string_view key) {
    for (Entry& e : s_.entries) {
      if (e.key == key) {
        e.used = true;
        return &e;
      }
    }
    return nullptr;
  }

  bool has(std::string_view key) {
    for (const Entry& e : s_.entries) {
      if (e.key == key) return true;
    }
    return false;
  }

  void missing(std::string_view key) {
    issues_.push_back({s_.line, "missing required key '" + std::string(key) + "' in " + s_.title()});
  }

  void mismatch(const Entry& e, std::string_view expected) {
    issues_.push_back({e.line, "key '" + e.key + "' in " + s_.title() + " expects " + std::string(expected) +
                                   ", got '" + e.value + "'"});
  }

  void fail(int line, std::string message) { issues_.push_back({line, std::move(message)}); }

  template <class Pred>
  std::optional<double> real(std::string_view key, Pred ok, std::string_view expected) {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    const auto v = aapda::parse_double(e->value);
    if (!v || !std::isfinite(*v) || !ok(*v)) {
      mismatch(*e, expected);
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> positive(std::string_view key) {
    return real(key, [](double v) { return v > 0.0; }, "a positive number");
  }

  std::optional<long long> integer(std::string_view key, long long min_value) {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    const auto v = aapda::parse_integer(e->value);
    if (!v || *v < min_value) {
      mismatch(*e, min_value > 0 ? "a positive integer" : "a non-negative integer");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> choice(std::string_view key, std::initializer_list<std::string_view> options) {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    for (std::string_view o : options) {
      if (e->value == o) return e->value;
    }
    std::string expected = "one of";
    for (std::string_view o : options) expected += " " + std::string(o);
    mismatch(*e, expected);
    return std::nullopt;
  }

  std::optional<bool> boolean(std::string_view key) {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    static const std::map<std::string, bool, std::less<>> kWords = {
        {"true", true}, {"yes", true}, {"on", true}, {"1", true},
        {"false", false}, {"no", false}, {"off", false}, {"0", false}};
    const auto it = kWords.find(e->value);
    if (it == kWords.end()) {
      mismatch(*e, "true or false");
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<std::string> text(std::string_view key) {
    const Entry* e = find(key);
    if (e == nullptr) return std::nullopt;
    if (e->value.empty()) {
      mismatch(*e, "a non-empty value");
      return std::nullopt;
    }
    return e->value;
  }

  // Flags keys that were read but do not belong in this context.
  void reject(std::string_view key, const std::string& why) {
    for (const Entry& e : s_.entries) {
      if (e.key == key) fail(e.line, "key '" + e.key + "' in " + s_.title() + " " + why);
    }
  }

  void report_unknown() {
    for (const Entry& e : s_.entries) {
      if (!e.used) fail(e.line, "unknown key '" + e.key + "' in " + s_.title());
    }
  }

  std::vector<std::pair<std::string, std::string>> settings() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Entry& e : s_.entries) out.emplace_back(e.key, e.value);
    return out;
  }

  int line() const { return s_.line; }
  const std::string& title_name() const { return s_.name; }

 private:
  RawSection& s_;
  std::vector<ConfigIssue>& issues_;
};

bool valid_label(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

std::vector<RawSection> split_sections(std::string_view text, std::vector<ConfigIssue>& issues) {
  std::vector<RawSection> sections;
  int line_no = 0;
  std::size_t pos = 0;
  bool skipping = false;  // inside a section whose header was rejected
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      skipping = false;
      if (line.back() != ']') {
        issues.push_back({line_no, "section header is missing ']'"});
        skipping = true;
        continue;
      }
      const std::string_view inner = trim(line.substr(1, line.size() - 2));
      const auto space = inner.find_first_of(" \t");
      RawSection s;
      s.kind = std::string(inner.substr(0, space));
      s.line = line_no;
      if (space != std::string_view::npos) s.name = std::string(trim(inner.substr(space)));
      if (s.kind == "solver") {
        if (!valid_label(s.name)) {
          issues.push_back({line_no, "solver sections need a name made of letters, digits, '-', '_' or '.': [solver NAME]"});
          skipping = true;
          continue;
        }
      } else if (s.kind == "experiment" || s.kind == "output") {
        if (!s.name.empty()) {
          issues.push_back({line_no, "section [" + s.kind + "] takes no name"});
          skipping = true;
          continue;
        }
        for (const RawSection& other : sections) {
          if (other.kind == s.kind) {
            issues.push_back({line_no, "section [" + s.kind + "] repeated (first at line " +
                                           std::to_string(other.line) + ")"});
            skipping = true;
          }
        }
        if (skipping) continue;
      } else {
        issues.push_back({line_no, "unknown section '[" + std::string(inner) + "]'"});
        skipping = true;
        continue;
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "expected 'key = value' or '[section]'"});
      continue;
    }
    if (skipping) continue;
    if (sections.empty()) {
      issues.push_back({line_no, "key outside of any section"});
      continue;
    }
    Entry e;
    e.key = std::string(trim(line.substr(0, eq)));
    e.value = std::string(trim(line.substr(eq + 1)));
    e.line = line_no;
    if (e.key.empty()) {
      issues.push_back({line_no, "empty key"});
      continue;
    }
    RawSection& cur = sections.back();
    bool duplicate = false;
    for (const Entry& prev : cur.entries) {
      if (prev.key == e.key) {
        issues.push_back({line_no, "key '" + e.key + "' repeated in " + cur.title() + " (first at line " +
                                       std::to_string(prev.line) + ")"});
        duplicate = true;
      }
    }
    if (!duplicate) cur.entries.push_back(std::move(e));
  }
  return sections;
}

void read_experiment(Reader& r, ExperimentConfig& cfg, const std::string& base_dir) {
  const auto tag = r.choice("tag", {"example1", "example2", "custom", "ode"});
  if (!tag && !r.has("tag")) r.missing("tag");
  if (tag) {
    if (*tag == "example1") cfg.tag = ExperimentTag::kExample1;
    if (*tag == "example2") cfg.tag = ExperimentTag::kExample2;
    if (*tag == "custom") cfg.tag = ExperimentTag::kCustom;
    if (*tag == "ode") cfg.tag = ExperimentTag::kOde;
  }
  if (auto seed = r.integer("seed", 0)) {
    cfg.seed = static_cast<std::uint64_t>(*seed);
  } else if (!r.has("seed")) {
    r.missing("seed");
  }
  const auto n = r.integer("n", 1);
  const auto m = r.integer("m", 1);
  const auto mu = r.positive("mu");
  const auto density = r.real("density", [](double v) { return v > 0.0 && v <= 1.0; }, "a number in (0, 1]");
  cfg.theta = r.positive("theta");
  const auto problem = r.text("problem");
  const auto init = r.choice("x_init", {"zeros", "ones"});
  if (!tag) return;

  auto need = [&](std::string_view key) {
    if (!r.has(key)) r.missing(key);
  };
  auto not_for_tag = [&](std::string_view key) { r.reject(key, "does not apply to tag " + *tag); };
  switch (cfg.tag) {
    case ExperimentTag::kExample1:
    case ExperimentTag::kOde:
      need("n");
      need("m");
      need("mu");
      not_for_tag("density");
      not_for_tag("problem");
      break;
    case ExperimentTag::kExample2:
      need("m");
      need("n");
      need("density");
      need("theta");
      not_for_tag("mu");
      not_for_tag("problem");
      break;
    case ExperimentTag::kCustom:
      need("problem");
      not_for_tag("n");
      not_for_tag("m");
      not_for_tag("mu");
      not_for_tag("density");
      break;
  }
  cfg.n = n.value_or(0);
  cfg.m = m.value_or(0);
  cfg.mu = mu.value_or(0.0);
  cfg.density = density.value_or(0.0);
  if (problem) {
    std::filesystem::path path(*problem);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    cfg.problem_path = path.lexically_normal().string();
  }
  // A zero start is a stationary point of the Example-1 Lagrangian.
  const bool ones_default = cfg.tag == ExperimentTag::kExample1 || cfg.tag == ExperimentTag::kOde;
  cfg.x_init = init ? (*init == "ones" ? InitPoint::kOnes : InitPoint::kZeros)
                    : (ones_default ? InitPoint::kOnes : InitPoint::kZeros);
}

SolverConfig read_solver(Reader& r, const ExperimentConfig& cfg) {
  SolverConfig sc;
  sc.name = r.title_name();
  sc.settings = r.settings();
  const auto method = r.choice("method", {"aapda", "lin-alm", "fista", "ode"});
  if (!method) {
    if (!r.has("method")) r.missing("method");
    // Mark the remaining keys so that only the method error is reported.
    for (const auto& [key, value] : sc.settings) r.find(key);
    return sc;
  }
  if (*method == "aapda") sc.kind = SolverKind::kAapda;
  if (*method == "lin-alm") sc.kind = SolverKind::kLinAlm;
  if (*method == "fista") sc.kind = SolverKind::kFista;
  if (*method == "ode") sc.kind = SolverKind::kOde;

  const int default_cap = cfg.tag == ExperimentTag::kExample2 ? 200 : 100;
  const double default_theta = cfg.theta.value_or(1e-6);

  try {
    switch (sc.kind) {
      case SolverKind::kAapda: {
        aapda::AapdaOptions& o = sc.aapda;
        if (const Entry* e = r.find("p")) {
          if (e->value == "k") {
            o.p = aapda::PSchedule::iteration_index();
          } else if (auto v = aapda::parse_double(e->value); v && std::isfinite(*v) && *v >= 1.0) {
            o.p = aapda::PSchedule::constant(*v);
          } else {
            r.mismatch(*e, "a number >= 1 or 'k'");
          }
        }
        if (auto v = r.real("gamma1", [](double x) { return x >= 1.0; }, "a number >= 1")) o.gamma_1 = *v;
        o.max_iterations = static_cast<int>(r.integer("cap", 1).value_or(default_cap));
        o.stop_theta = r.positive("theta").value_or(default_theta);
        if (auto v = r.real("mu_floor", [](double x) { return x >= 1.0; }, "a number >= 1")) o.mu_floor = *v;
        if (auto v = r.positive("sub_tol")) o.subproblem_tol = *v;
        if (auto v = r.choice("sub_method", {"auto", "direct", "cg", "ag"})) {
          if (*v == "direct") o.subsolver.force_method = aapda::SubMethod::kDirect;
          if (*v == "cg") o.subsolver.force_method = aapda::SubMethod::kConjugateGradient;
          if (*v == "ag") o.subsolver.force_method = aapda::SubMethod::kInnerAcceleratedGradient;
        }
        aapda::validate(o);
        break;
      }
      case SolverKind::kLinAlm:
      case SolverKind::kFista: {
        aapda::BaselineOptions& o = sc.baseline;
        o.method = sc.kind == SolverKind::kFista ? aapda::BaselineMethod::kFista : aapda::BaselineMethod::kLinAlm;
        o.step = r.positive("step");
        if (sc.kind == SolverKind::kLinAlm) {
          if (auto v = r.positive("beta")) o.beta = *v;
        }
        o.max_iterations = static_cast<int>(r.integer("cap", 1).value_or(default_cap));
        o.stop_theta = r.positive("theta").value_or(default_theta);
        break;
      }
      case SolverKind::kOde: {
        aapda::OdeParams& o = sc.ode;
        if (auto v = r.real("q", [](double x) { return x >= 1.0; }, "a number >= 1")) o.q = *v;
        if (auto v = r.real("p", [](double x) { return x >= 1.0; }, "a number >= 1")) o.p = *v;
        if (auto v = r.positive("t0")) o.t0 = *v;
        o.t_end = r.positive("t_end").value_or(o.t0 + 50.0);
        if (auto v = r.positive("rel_tol")) o.rel_tol = *v;
        if (auto v = r.positive("abs_tol")) o.abs_tol = *v;
        if (auto v = r.positive("mu_cap")) o.mu_cap = *v;
        if (auto v = r.integer("max_steps", 1)) o.max_steps = static_cast<long>(*v);
        if (auto v = r.choice("integrator", {"dopri5", "rosenbrock4"})) {
          o.method = *v == "rosenbrock4" ? aapda::OdeMethod::kRosenbrock : aapda::OdeMethod::kDormandPrince;
        }
        aapda::validate(o);
        break;
      }
    }
  } catch (const aapda::Error& e) {
    r.fail(r.line(), "in [solver " + sc.name + "]: " + e.what());
  }

  const bool ode_tag = cfg.tag == ExperimentTag::kOde;
  if (ode_tag != (sc.kind == SolverKind::kOde)) {
    r.fail(r.line(), ode_tag ? "experiment tag ode only runs solvers with method = ode"
                             : "method = ode needs experiment tag ode");
  }
  return sc;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  std::vector<ConfigIssue> issues;
  std::vector<RawSection> sections = split_sections(text, issues);
  ExperimentConfig cfg;

  auto experiment = std::find_if(sections.begin(), sections.end(),
                                 [](const RawSection& s) { return s.kind == "experiment"; });
  if (experiment == sections.end()) {
    issues.push_back({0, "missing section [experiment]"});
  } else {
    Reader r(*experiment, issues);
    read_experiment(r, cfg, base_dir);
    r.report_unknown();
  }

  std::set<std::string> names;
  for (RawSection& s : sections) {
    if (s.kind == "output") {
      Reader r(s, issues);
      if (auto dir = r.text("dir")) cfg.out_dir = *dir;
      if (auto plot = r.boolean("plot")) cfg.plot = *plot;
      r.report_unknown();
    } else if (s.kind == "solver") {
      if (!names.insert(s.name).second) {
        issues.push_back({s.line, "solver name '" + s.name + "' used twice"});
        continue;
      }
      Reader r(s, issues);
      SolverConfig sc = read_solver(r, cfg);
      r.report_unknown();
      cfg.solvers.push_back(std::move(sc));
    }
  }
  if (names.empty()) issues.push_back({0, "no [solver NAME] sections"});

  if (!issues.empty()) {
    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    throw ConfigError(std::move(issues));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aapda::Error(aapda::ErrorCode::kIo, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  return parse_config(buf.str(), parent.empty() ? "." : parent.string());
}

}  // namespace bench
