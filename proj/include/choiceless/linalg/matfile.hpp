#pragma once

// .mat files:
//   field <q> | ring Z
//   rows <names...>
//   cols <names...>      (optional when square)
//   square               (flag: I-square)
//   <row> <col> <value>  (omitted entries are zero)
// '#' starts a comment.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/linalg/intmatrix.hpp"
#include "choiceless/linalg/matrix.hpp"

namespace choiceless::linalg {

struct MatFile {
  std::optional<std::uint32_t> field_order;  // nullopt: ring Z
  FieldMatrix field_matrix;
  IntMatrix int_matrix;

  bool is_integer() const { return !field_order.has_value(); }
};

inline MatFile parse_mat(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_kind = false, square = false, have_rows = false, have_cols = false;
  MatFile out;
  std::vector<std::string> rows, cols;
  struct Entry {
    std::string r, c, v;
    std::size_t line;
  };
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& head = tok[0];
    if (head == "field" || head == "ring") {
      if (have_kind) throw ParseError("duplicate field/ring line", lineno, 1);
      if (tok.size() != 2) throw ParseError("expected one argument", lineno, 1);
      if (head == "ring") {
        if (tok[1] != "Z") throw ParseError("only 'ring Z' is supported", lineno, 6);
      } else {
        try {
          std::size_t used = 0;
          unsigned long q = std::stoul(tok[1], &used);
          if (used != tok[1].size()) throw std::invalid_argument("q");
          out.field_order = static_cast<std::uint32_t>(q);
        } catch (const std::exception&) {
          throw ParseError("bad field order '" + tok[1] + "'", lineno, 7);
        }
      }
      have_kind = true;
    } else if (head == "rows") {
      if (have_rows) throw ParseError("duplicate rows line", lineno, 1);
      rows.assign(tok.begin() + 1, tok.end());
      have_rows = true;
    } else if (head == "cols") {
      if (have_cols) throw ParseError("duplicate cols line", lineno, 1);
      cols.assign(tok.begin() + 1, tok.end());
      have_cols = true;
    } else if (head == "square") {
      if (tok.size() != 1) throw ParseError("'square' takes no arguments", lineno, 1);
      square = true;
    } else {
      if (tok.size() != 3) throw ParseError("expected '<row> <col> <value>'", lineno, 1);
      entries.push_back({tok[0], tok[1], tok[2], lineno});
    }
  }
  if (!have_kind) throw ParseError("missing 'field <q>' or 'ring Z' line");
  if (!have_rows) throw ParseError("missing 'rows' line");
  if (!have_cols) {
    if (!square) throw ParseError("missing 'cols' line");
    cols = rows;
  }
  if (out.is_integer()) {
    if (!square) throw ParseError("integer matrices must be square");
    try {
      out.int_matrix = IntMatrix(rows);
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
    std::vector<std::size_t> map;
    if (!FieldMatrix::align(cols, rows, map))
      throw ParseError("square matrix with different row and column sets");
    auto pos = [&](const std::string& name, std::size_t line) {
      auto it = std::find(rows.begin(), rows.end(), name);
      if (it == rows.end())
        throw ParseError("unknown index '" + name + "'", line, 1);
      return static_cast<std::size_t>(it - rows.begin());
    };
    for (const auto& e : entries) {
      std::size_t i = pos(e.r, e.line), j = pos(e.c, e.line);
      try {
        out.int_matrix.at(i, j) = BigInt(e.v);
      } catch (const std::exception&) {
        throw ParseError("bad integer '" + e.v + "'", e.line, 1);
      }
    }
    return out;
  }
  FiniteField f = [&] {
    try {
      return finite_field(*out.field_order);
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  }();
  try {
    out.field_matrix = FieldMatrix(rows, cols);
    if (square) out.field_matrix = out.field_matrix.as_square();
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
  for (const auto& e : entries) {
    unsigned long v;
    try {
      std::size_t used = 0;
      v = std::stoul(e.v, &used);
      if (used != e.v.size()) throw std::invalid_argument("v");
    } catch (const std::exception&) {
      throw ParseError("bad field element '" + e.v + "'", e.line, 1);
    }
    if (v >= f.order())
      throw ParseError("field element out of range: " + e.v, e.line, 1);
    try {
      out.field_matrix.set(e.r, e.c, static_cast<Elem>(v));
    } catch (const Error& err) {
      throw ParseError(err.what(), e.line, 1);
    }
  }
  return out;
}

namespace detail {
inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += " " + x;
  return s;
}
}  // namespace detail

inline std::string write_mat(std::uint32_t q, const FieldMatrix& m) {
  std::ostringstream out;
  out << "field " << q << "\nrows" << detail::join(m.rows()) << "\n";
  if (m.is_square()) {
    out << "square\n";
    if (m.cols() != m.rows()) out << "cols" << detail::join(m.cols()) << "\n";
  } else {
    out << "cols" << detail::join(m.cols()) << "\n";
  }
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = 0; j < m.num_cols(); ++j)
      if (m.at(i, j) != 0)
        out << m.rows()[i] << " " << m.cols()[j] << " " << m.at(i, j) << "\n";
  return out.str();
}

inline std::string write_mat(const IntMatrix& m) {
  std::ostringstream out;
  out << "ring Z\nrows" << detail::join(m.index()) << "\nsquare\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m.at(i, j) != 0)
        out << m.index()[i] << " " << m.index()[j] << " " << m.at(i, j) << "\n";
  return out.str();
}

}  // namespace choiceless::linalg
