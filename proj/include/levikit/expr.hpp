#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levikit/ast.hpp"
#include "levikit/jet.hpp"

namespace levikit::expr {

/// A parsed defining function rho: the expression tree, its bound real
/// parameters, and the ambient dimension n.
struct DefiningFunction {
  NodePtr ast;
  ParamMap params;
  int n = 0;

  ParamMap merged(const ParamMap& overrides) const {
    ParamMap m = params;
    for (const auto& [k, v] : overrides) m[k] = v;
    return m;
  }
};

namespace detail {

inline bool is_reserved_name(const std::string& id) {
  if (id == "i" || id == "re" || id == "im" || id == "abs2" || id == "conj" || id == "param" ||
      id == "dim" || id == "eta")
    return true;
  if (id.size() >= 2 && id[0] == 'z') {
    bool digits = true;
    for (size_t k = 1; k < id.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(id[k]))) digits = false;
    if (digits) return true;
  }
  return false;
}

inline std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

inline bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

inline std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

/// Recognize `param NAME = VALUE` / `dim = N`; returns false if the line is
/// not a header line.
inline bool parse_header_line(const std::string& raw, int lineno, ParamMap& params,
                              std::optional<int>& dim) {
  std::string line = trim(strip_comment(raw));
  if (line.rfind("param", 0) == 0 &&
      (line.size() == 5 || std::isspace(static_cast<unsigned char>(line[5])))) {
    std::istringstream in(line.substr(5));
    std::string name, eq;
    double value;
    if (!(in >> name >> eq >> value) || eq != "=")
      throw ParseError("malformed param line; expected 'param NAME = VALUE'", lineno, 1);
    std::string rest;
    if (in >> rest) throw ParseError("trailing content after param value", lineno, 1);
    if (is_reserved_name(name))
      throw ParseError("parameter name '" + name + "' is reserved", lineno, 1);
    params[name] = value;
    return true;
  }
  if (line.rfind("dim", 0) == 0 && (line.size() == 3 || line[3] == ' ' || line[3] == '=')) {
    std::istringstream in(line.substr(3));
    std::string eq;
    int value;
    if (!(in >> eq >> value) || eq != "=" || value < 1)
      throw ParseError("malformed dim line; expected 'dim = N'", lineno, 1);
    dim = value;
    return true;
  }
  return false;
}

}  // namespace detail

/// Parse a defining-function source: optional `param NAME = VALUE` and
/// `dim = N` header lines followed by a single real-valued expression
/// (which may span several lines).
inline DefiningFunction parse_defining_function(const std::string& text) {
  if (detail::is_blank(text)) throw ParseError("empty input", 1, 1);

  DefiningFunction f;
  std::optional<int> dim;

  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  std::string body;
  int body_first_line = 1;
  bool in_body = false;
  for (size_t k = 0; k < lines.size(); ++k) {
    const std::string bare = detail::trim(detail::strip_comment(lines[k]));
    if (!in_body) {
      if (bare.empty()) continue;
      if (detail::parse_header_line(lines[k], static_cast<int>(k + 1), f.params, dim)) continue;
      in_body = true;
      body_first_line = static_cast<int>(k + 1);
    }
    body += lines[k];
    body += '\n';
  }
  if (!in_body) throw ParseError("missing defining-function expression", static_cast<int>(lines.size()), 1);

  std::vector<std::string> names;
  names.reserve(f.params.size());
  for (const auto& [k, v] : f.params) names.push_back(k);
  f.ast = parse_expression(body, names, body_first_line);

  if (!is_real_typed(f.ast))
    throw ParseError("defining function must be real-valued: wrap complex subexpressions in re/im/abs2",
                     body_first_line, 1);

  int nvars = max_variable(f.ast);
  if (nvars == 0) throw ParseError("defining function uses no variables", body_first_line, 1);
  f.n = dim.value_or(nvars);
  if (f.n < nvars)
    throw ParseError("dim = " + std::to_string(f.n) + " is smaller than the highest variable index z" +
                     std::to_string(nvars), body_first_line, 1);
  return f;
}

/// Full second-order Wirtinger jet of rho at a point.
inline Jet2 eval_jet2(const DefiningFunction& f, const std::vector<cplx>& point,
                      const ParamMap& overrides = {}, double pole_guard = 1e-300) {
  if (static_cast<int>(point.size()) != f.n)
    throw EvalError("point dimension " + std::to_string(point.size()) +
                    " does not match the defining function dimension " + std::to_string(f.n));
  return to_jet2(eval_wirtinger_jet(f.ast, point, f.merged(overrides), pole_guard));
}

inline double eval_value(const DefiningFunction& f, const std::vector<cplx>& point,
                         const ParamMap& overrides = {}, double pole_guard = 1e-300) {
  return eval_scalar(f.ast, point, f.merged(overrides), pole_guard).real();
}

struct GradientNorms {
  double dbar;  // |partial rho|
  double full;  // |grad rho| = sqrt(2) |partial rho|
};

inline GradientNorms eval_gradient_norms(const Jet2& jet) {
  GradientNorms g;
  g.dbar = jet.dbar_norm();
  g.full = jet.grad_norm();
  return g;
}

}  // namespace levikit::expr
