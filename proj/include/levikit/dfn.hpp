#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levikit/expr.hpp"

namespace levikit::dfn {

/// Parsed `.dfn` input file.
///
/// Layout: an implicit main section with `param NAME = VALUE` / `dim = N`
/// header lines and the defining-function expression, then optional
/// sections:
///
///   [anchor]   one line of 2n reals: re z1, im z1, ..., re zn, im zn
///   [upsilon]  optional `eta = VALUE` line, then n rows of n expressions
///              separated by `;` (entries may use the same parameters and
///              the imaginary literal `i`)
///
/// `#` starts a comment anywhere.
struct InputFile {
  expr::DefiningFunction rho;
  std::optional<std::vector<cplx>> anchor;
  std::vector<expr::NodePtr> upsilon;  // n*n entries, empty when absent
  double eta = 0.0;
};

inline InputFile parse_input(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }

  std::string main_text, anchor_text, upsilon_text;
  int anchor_line = 0, upsilon_line = 0;
  std::string* active = &main_text;
  int lineno = 0;
  for (const std::string& raw : lines) {
    ++lineno;
    std::string bare = expr::detail::trim(expr::detail::strip_comment(raw));
    if (bare == "[anchor]") {
      active = &anchor_text;
      anchor_line = lineno;
      continue;
    }
    if (bare == "[upsilon]") {
      active = &upsilon_text;
      upsilon_line = lineno;
      continue;
    }
    if (!bare.empty() && bare.front() == '[')
      throw ParseError("unknown section '" + bare + "'", lineno, 1);
    *active += raw;
    *active += '\n';
  }

  InputFile file;
  file.rho = expr::parse_defining_function(main_text);
  int n = file.rho.n;

  if (!expr::detail::is_blank(anchor_text)) {
    std::istringstream in(anchor_text);
    std::vector<double> vals;
    double v;
    while (in >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != 2 * n)
      throw ParseError("[anchor] needs " + std::to_string(2 * n) + " reals (re/im pairs), found " +
                       std::to_string(vals.size()), anchor_line, 1);
    std::vector<cplx> a(n);
    for (int j = 0; j < n; ++j) a[j] = cplx(vals[2 * j], vals[2 * j + 1]);
    file.anchor = std::move(a);
  }

  if (!expr::detail::is_blank(upsilon_text)) {
    std::vector<std::string> names;
    for (const auto& [k, v] : file.rho.params) names.push_back(k);

    std::vector<std::vector<std::string>> rows;
    std::istringstream in(upsilon_text);
    std::string line;
    int local = upsilon_line;
    while (std::getline(in, line)) {
      ++local;
      std::string bare = expr::detail::trim(expr::detail::strip_comment(line));
      if (bare.empty()) continue;
      if (bare.rfind("eta", 0) == 0) {
        std::istringstream ein(bare.substr(3));
        std::string eq;
        double value;
        if (!(ein >> eq >> value) || eq != "=" || value < 0.0 || value > 1.0)
          throw ParseError("malformed eta line; expected 'eta = VALUE' in [0,1]", local, 1);
        file.eta = value;
        continue;
      }
      std::vector<std::string> cells;
      std::string cell;
      std::istringstream cin(bare);
      while (std::getline(cin, cell, ';')) cells.push_back(cell);
      if (static_cast<int>(cells.size()) != n)
        throw ParseError("[upsilon] row needs " + std::to_string(n) + " entries separated by ';'",
                         local, 1);
      rows.push_back(std::move(cells));
    }
    if (static_cast<int>(rows.size()) != n)
      throw ParseError("[upsilon] needs " + std::to_string(n) + " rows", upsilon_line, 1);
    for (const auto& row : rows)
      for (const std::string& cell : row) file.upsilon.push_back(expr::parse_expression(cell, names));
  }
  return file;
}

inline InputFile load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input(buf.str());
}

/// Serialize an expression-backed Upsilon field as an `[upsilon]` section.
inline std::string upsilon_section(const std::vector<expr::NodePtr>& entries, int n, double eta) {
  std::string out = "[upsilon]\neta = " + expr::detail::format_number(eta) + "\n";
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (k) out += " ; ";
      out += expr::serialize(entries[static_cast<size_t>(j) * n + k]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace levikit::dfn
