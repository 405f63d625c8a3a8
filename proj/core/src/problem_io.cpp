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

#include "aapda/problem_io.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "aapda/error.hpp"
#include "aapda/format.hpp"

namespace aapda {
namespace {

constexpr std::string_view kFormatTag = "aapda-problem/1";

void write_vector(std::ostream& out, const std::string& name, const Vector& v) {
  out << "vector " << name << ' ' << v.size() << '\n';
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(v(i));
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const std::string& name, const Matrix& a) {
  out << "matrix " << name << ' ' << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::kParse, "problem file line " + std::to_string(line) + ": " + msg);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      line = std::string(t);
      return true;
    }
    return false;
  }

  std::vector<double> numbers(Index expected) {
    std::string line;
    if (!next(line)) parse_fail(line_no_, "unexpected end of file in numeric block");
    std::vector<double> values;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      const auto v = parse_double(tok);
      if (!v) parse_fail(line_no_, "not a number: '" + tok + "'");
      values.push_back(*v);
    }
    if (static_cast<Index>(values.size()) != expected) {
      parse_fail(line_no_, "expected " + std::to_string(expected) + " numbers, found " +
                               std::to_string(values.size()));
    }
    return values;
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

Index parse_dim(const std::string& tok, int line) {
  const auto v = parse_integer(tok);
  if (!v || *v < 0) parse_fail(line, "bad dimension '" + tok + "'");
  return static_cast<Index>(*v);
}

}  // namespace

void write_problem(std::ostream& out, const Problem& problem) {
  const auto& desc = problem.descriptor();
  const auto& form = problem.quadratic_form();
  if (!form) {
    throw Error(ErrorCode::kUnsupportedProblem, "write_problem: only quadratic objectives can be exported");
  }
  out << "# aapda problem instance\n";
  out << "format = " << kFormatTag << '\n';
  out << "generator = " << desc.generator << '\n';
  for (const auto& [k, v] : desc.params) out << "param." << k << " = " << v << '\n';
  if (desc.seed) out << "seed = " << *desc.seed << '\n';
  out << "dim_primal = " << problem.dim_primal() << '\n';
  out << "dim_dual = " << problem.dim_dual() << '\n';

  if (const auto& ls = problem.least_squares_data()) {
    out << "objective = least_squares\n";
    write_matrix(out, "D", ls->first);
    write_vector(out, "d", ls->second);
  } else {
    out << "objective = quadratic\n";
    if (form->kind == QuadraticForm::Kind::kScaledIdentity) {
      out << "quadratic.kind = scaled_identity\n";
      out << "quadratic.scale = " << format_double(form->scale) << '\n';
    } else {
      out << "quadratic.kind = dense\n";
    }
    out << "quadratic.constant = " << format_double(form->constant) << '\n';
    if (form->kind == QuadraticForm::Kind::kDense) write_matrix(out, "Q", form->matrix);
    write_vector(out, "c", form->linear);
  }
  if (problem.dim_dual() > 0) {
    Matrix a;
    if (problem.constraint_dense()) {
      a = *problem.constraint_dense();
    } else {
      a.resize(problem.dim_dual(), problem.dim_primal());
      for (Index j = 0; j < problem.dim_primal(); ++j) {
        a.col(j) = problem.constraint_matvec(Vector::Unit(problem.dim_primal(), j));
      }
    }
    write_matrix(out, "A", a);
    write_vector(out, "b", problem.rhs());
  }
  if (problem.planted()) write_vector(out, "planted", *problem.planted());
  out << "end\n";
}

Problem read_problem(std::istream& in) {
  Reader reader(in);
  std::map<std::string, std::string> keys;
  std::map<std::string, Matrix> matrices;
  std::map<std::string, Vector> vectors;
  ProblemDescriptor desc;
  bool ended = false;

  std::string line;
  while (reader.next(line)) {
    if (line == "end") {
      ended = true;
      break;
    }
    if (line.rfind("matrix ", 0) == 0 || line.rfind("vector ", 0) == 0) {
      std::istringstream ss(line);
      std::string kind, name, r, c;
      ss >> kind >> name >> r;
      const Index rows = parse_dim(r, reader.line_no());
      if (kind == "matrix") {
        ss >> c;
        const Index cols = parse_dim(c, reader.line_no());
        Matrix a(rows, cols);
        for (Index i = 0; i < rows; ++i) {
          const auto row = reader.numbers(cols);
          for (Index j = 0; j < cols; ++j) a(i, j) = row[static_cast<std::size_t>(j)];
        }
        matrices[name] = std::move(a);
      } else {
        const auto vals = reader.numbers(rows);
        vectors[name] = Eigen::Map<const Vector>(vals.data(), rows);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(reader.line_no(), "expected 'key = value'");
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    const std::string value(trim(std::string_view(line).substr(eq + 1)));
    if (key.rfind("param.", 0) == 0) {
      desc.params.emplace_back(key.substr(6), value);
    } else {
      keys[key] = value;
    }
  }
  if (!ended) parse_fail(reader.line_no(), "missing 'end'");
  if (keys["format"] != kFormatTag) parse_fail(reader.line_no(), "unknown format tag '" + keys["format"] + "'");

  auto require_vec = [&](const std::string& name) -> Vector& {
    auto it = vectors.find(name);
    if (it == vectors.end()) parse_fail(reader.line_no(), "missing vector '" + name + "'");
    return it->second;
  };
  auto require_mat = [&](const std::string& name) -> Matrix& {
    auto it = matrices.find(name);
    if (it == matrices.end()) parse_fail(reader.line_no(), "missing matrix '" + name + "'");
    return it->second;
  };

  desc.generator = keys.count("generator") ? keys["generator"] : "custom";
  if (keys.count("seed")) {
    const auto s = parse_integer(keys["seed"]);
    if (!s) parse_fail(reader.line_no(), "bad seed");
    desc.seed = static_cast<std::uint64_t>(*s);
  }
  const auto n_opt = parse_integer(keys["dim_primal"]);
  const auto m_opt = parse_integer(keys["dim_dual"]);
  if (!n_opt || !m_opt) parse_fail(reader.line_no(), "dim_primal and dim_dual are required");
  const Index n = static_cast<Index>(*n_opt);
  const Index m = static_cast<Index>(*m_opt);

  auto checked = [&](Problem p) {
    if (p.dim_primal() != n || p.dim_dual() != m) {
      parse_fail(reader.line_no(), "declared dimensions do not match the data");
    }
    if (vectors.count("planted")) p.set_planted(vectors["planted"]);
    return p;
  };

  const std::string objective = keys["objective"];
  if (objective == "least_squares") {
    if (m != 0) parse_fail(reader.line_no(), "least_squares objective cannot carry constraints");
    return checked(Problem::least_squares(require_mat("D"), require_vec("d"), std::move(desc)));
  }
  if (objective != "quadratic") parse_fail(reader.line_no(), "unknown objective '" + objective + "'");

  const auto constant = parse_double(keys.count("quadratic.constant") ? keys["quadratic.constant"] : "0");
  if (!constant) parse_fail(reader.line_no(), "bad quadratic.constant");
  QuadraticForm form;
  if (keys["quadratic.kind"] == "scaled_identity") {
    const auto scale = parse_double(keys["quadratic.scale"]);
    if (!scale) parse_fail(reader.line_no(), "bad quadratic.scale");
    form = QuadraticForm::scaled_identity(*scale, n);
    form.linear = require_vec("c");
    form.constant = *constant;
  } else if (keys["quadratic.kind"] == "dense") {
    form = QuadraticForm::dense(require_mat("Q"), require_vec("c"), *constant);
  } else {
    parse_fail(reader.line_no(), "unknown quadratic.kind '" + keys["quadratic.kind"] + "'");
  }
  if (form.linear.size() != n) parse_fail(reader.line_no(), "vector c has the wrong length");

  ConstraintOperator op = ConstraintOperator::none();
  Vector b(0);
  if (m > 0) {
    op = ConstraintOperator::from_dense(require_mat("A"));
    b = require_vec("b");
  }
  return checked(Problem::quadratic(std::move(form), std::move(op), std::move(b), std::move(desc)));
}

void save_problem(const std::string& path, const Problem& problem) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_problem(out, problem);
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path + "' failed");
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_problem(in);
}

}  // namespace aapda
