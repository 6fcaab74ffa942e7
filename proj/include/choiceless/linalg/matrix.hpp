#pragma once

// Matrices over finite fields indexed by unordered, named index sets.
// Storage keeps the index names in some list order; every exported verdict
// is independent of that order. Products use the counting rule: entry (i,k)
// is Σ_z (m_z mod p)·z where m_z counts inner indices j with
// M(i,j)·N(j,k) = z. Over Z/2 this is the parity of the number of j with
// M(i,j) = N(j,k) = 1, computed on packed bit rows.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "choiceless/errors.hpp"
#include "choiceless/linalg/binnat.hpp"
#include "choiceless/linalg/field.hpp"
#include "choiceless/parallel.hpp"

namespace choiceless::linalg {

class FieldMatrix {
 public:
  FieldMatrix() = default;
  /// Rectangular matrix over I×J, all zero.
  FieldMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)),
        entries_(rows_.size() * cols_.size(), 0) {
    check_distinct(rows_);
    check_distinct(cols_);
  }
  /// I-square matrix, all zero.
  static FieldMatrix square(std::vector<std::string> index) {
    FieldMatrix m(index, index);
    m.square_ = true;
    return m;
  }
  static FieldMatrix identity(std::vector<std::string> index) {
    FieldMatrix m = square(std::move(index));
    for (std::size_t i = 0; i < m.rows_.size(); ++i) m.at(i, i) = 1;
    return m;
  }
  /// Square matrix on "0".."n-1" from row-major values.
  static FieldMatrix from_rows(const std::vector<std::vector<Elem>>& v) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < v.size(); ++i) names.push_back(std::to_string(i));
    FieldMatrix m = square(names);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].size() != v.size()) throw Error("from_rows needs a square array");
      for (std::size_t j = 0; j < v.size(); ++j) m.at(i, j) = v[i][j];
    }
    return m;
  }

  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& cols() const { return cols_; }
  bool is_square() const { return square_; }
  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return cols_.size(); }

  Elem& at(std::size_t r, std::size_t c) { return entries_[r * cols_.size() + c]; }
  Elem at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_.size() + c];
  }
  std::size_t row_index(const std::string& name) const { return find(rows_, name); }
  std::size_t col_index(const std::string& name) const { return find(cols_, name); }
  Elem get(const std::string& r, const std::string& c) const {
    return at(row_index(r), col_index(c));
  }
  void set(const std::string& r, const std::string& c, Elem v) {
    at(row_index(r), col_index(c)) = v;
  }

  /// Flags the matrix as I-square; the row and column sets must agree.
  FieldMatrix as_square() const {
    std::vector<std::size_t> map;
    if (!align(rows_, cols_, map))
      throw Error("row and column index sets differ");
    FieldMatrix m = *this;
    m.square_ = true;
    return m;
  }

  /// The same matrix with rows and columns listed in a different order.
  /// For square matrices the one permutation applies to both.
  FieldMatrix relisted(const std::vector<std::size_t>& row_perm,
                       const std::vector<std::size_t>& col_perm) const {
    FieldMatrix m;
    m.square_ = square_;
    for (auto r : row_perm) m.rows_.push_back(rows_.at(r));
    for (auto c : col_perm) m.cols_.push_back(cols_.at(c));
    m.entries_.resize(entries_.size());
    for (std::size_t i = 0; i < row_perm.size(); ++i)
      for (std::size_t j = 0; j < col_perm.size(); ++j)
        m.at(i, j) = at(row_perm[i], col_perm[j]);
    return m;
  }

  FieldMatrix transposed() const {
    FieldMatrix m(cols_, rows_);
    m.square_ = square_;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_.size(); ++j) m.at(j, i) = at(i, j);
    return m;
  }

  /// Equality as functions I×J → F (list order ignored).
  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.square_ != b.square_ || a.rows_.size() != b.rows_.size() ||
        a.cols_.size() != b.cols_.size())
      return false;
    std::vector<std::size_t> rmap, cmap;
    if (!a.align(a.rows_, b.rows_, rmap) || !a.align(a.cols_, b.cols_, cmap))
      return false;
    for (std::size_t i = 0; i < a.rows_.size(); ++i)
      for (std::size_t j = 0; j < a.cols_.size(); ++j)
        if (a.at(i, j) != b.at(rmap[i], cmap[j])) return false;
    return true;
  }
  friend bool operator!=(const FieldMatrix& a, const FieldMatrix& b) {
    return !(a == b);
  }

  /// For each name in `from`, its position in `to`; false if the lists are
  /// not the same set.
  static bool align(const std::vector<std::string>& from,
                    const std::vector<std::string>& to,
                    std::vector<std::size_t>& out) {
    if (from.size() != to.size()) return false;
    out.assign(from.size(), 0);
    if (from == to) {
      for (std::size_t i = 0; i < from.size(); ++i) out[i] = i;
      return true;
    }
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < to.size(); ++i) pos[to[i]] = i;
    for (std::size_t i = 0; i < from.size(); ++i) {
      auto it = pos.find(from[i]);
      if (it == pos.end()) return false;
      out[i] = it->second;
    }
    return true;
  }

 private:
  static void check_distinct(const std::vector<std::string>& names) {
    std::vector<std::string> s = names;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("duplicate index name");
  }
  static std::size_t find(const std::vector<std::string>& names,
                          const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw Error("unknown index '" + n + "'");
    return static_cast<std::size_t>(it - names.begin());
  }

  std::vector<std::string> rows_, cols_;
  bool square_ = false;
  std::vector<Elem> entries_;
};

namespace detail {

/// Row-major n×m block used inside products and powers.
struct Dense {
  std::size_t r = 0, c = 0;
  std::vector<Elem> v;
  Elem at(std::size_t i, std::size_t j) const { return v[i * c + j]; }
};

inline Dense mul_counting(const FiniteField& f, const Dense& a, const Dense& b) {
  Dense out{a.r, b.c, std::vector<Elem>(a.r * b.c, 0)};
  const std::uint32_t q = f.order();
  std::vector<std::uint64_t> count(q, 0);
  std::vector<Elem> touched;
  // Small fields: look products up instead of calling into the field.
  std::vector<Elem> table;
  if (q <= 64 && a.r * a.c * b.c >= std::size_t{q} * q) {
    table.resize(q * q);
    for (Elem x = 0; x < q; ++x)
      for (Elem y = 0; y < q; ++y) table[x * q + y] = f.mul(x, y);
  }
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t k = 0; k < b.c; ++k) {
      touched.clear();
      for (std::size_t j = 0; j < a.c; ++j) {
        Elem x = a.at(i, j), y = b.at(j, k);
        Elem z = table.empty() ? f.mul(x, y) : table[x * q + y];
        if (count[z]++ == 0) touched.push_back(z);
      }
      Elem sum = 0;
      for (Elem z : touched) {
        sum = f.add(sum, f.times(count[z], z));
        count[z] = 0;
      }
      out.v[i * b.c + k] = sum;
    }
  return out;
}

/// Packed Z/2 rows. Row i of a product is the XOR of the rows of the right
/// factor selected by row i of the left, i.e. each bit is a parity count.
struct Bits {
  std::size_t r = 0, c = 0, words = 0;
  std::vector<std::uint64_t> v;
  Bits(std::size_t rows, std::size_t cols)
      : r(rows), c(cols), words((cols + 63) / 64), v(rows * words, 0) {}
  bool get(std::size_t i, std::size_t j) const {
    return (v[i * words + j / 64] >> (j % 64)) & 1u;
  }
  void set(std::size_t i, std::size_t j) {
    v[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
  }
  friend bool operator==(const Bits& a, const Bits& b) { return a.v == b.v; }
};

inline Bits mul_bits(const Bits& a, const Bits& b) {
  Bits out(a.r, b.c);
  for (std::size_t i = 0; i < a.r; ++i) {
    std::uint64_t* dst = &out.v[i * out.words];
    for (std::size_t j = 0; j < a.c; ++j) {
      if (!a.get(i, j)) continue;
      const std::uint64_t* src = &b.v[j * b.words];
      for (std::size_t w = 0; w < b.words; ++w) dst[w] ^= src[w];
    }
  }
  return out;
}

inline Bits to_bits(const Dense& d) {
  Bits b(d.r, d.c);
  for (std::size_t i = 0; i < d.r; ++i)
    for (std::size_t j = 0; j < d.c; ++j)
      if (d.at(i, j)) b.set(i, j);
  return b;
}

inline Dense from_bits(const Bits& b) {
  Dense d{b.r, b.c, std::vector<Elem>(b.r * b.c, 0)};
  for (std::size_t i = 0; i < b.r; ++i)
    for (std::size_t j = 0; j < b.c; ++j) d.v[i * b.c + j] = b.get(i, j);
  return d;
}

inline Bits bits_identity(std::size_t n) {
  Bits b(n, n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, i);
  return b;
}

/// Square matrix entries with columns listed in row order.
inline Dense dense_square(const FieldMatrix& m) {
  if (!m.is_square()) throw Error("matrix is not square");
  std::vector<std::size_t> cmap;
  if (!FieldMatrix::align(m.rows(), m.cols(), cmap))
    throw Error("square matrix with different row and column sets");
  std::size_t n = m.num_rows();
  Dense d{n, n, std::vector<Elem>(n * n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d.v[i * n + j] = m.at(i, cmap[j]);
  return d;
}

inline FieldMatrix square_from_dense(const std::vector<std::string>& index,
                                     const Dense& d) {
  FieldMatrix m = FieldMatrix::square(index);
  for (std::size_t i = 0; i < d.r; ++i)
    for (std::size_t j = 0; j < d.c; ++j) m.at(i, j) = d.at(i, j);
  return m;
}

template <class Mat, class Mul>
Mat power_by_bits(const Mat& m, const BinNat& r, Mul mul) {
  if (r.is_zero()) throw Error("matrix power needs r >= 1");
  Mat x = m;
  for (std::uint32_t c = r.max_bit(); c-- > 0;) {
    x = mul(x, x);
    if (r.test(c)) x = mul(x, m);
  }
  return x;
}

inline void check_elements(const FiniteField& f, const FieldMatrix& m) {
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = 0; j < m.num_cols(); ++j)
      if (m.at(i, j) >= f.order()) throw Error("matrix entry outside the field");
}

}  // namespace detail

/// M·N over F; N's row set must equal M's column set.
inline FieldMatrix mat_mul(const FiniteField& f, const FieldMatrix& m,
                           const FieldMatrix& n) {
  std::vector<std::size_t> inner;
  if (!FieldMatrix::align(m.cols(), n.rows(), inner))
    throw Error("mat_mul: inner index sets differ");
  detail::Dense a{m.num_rows(), m.num_cols(), {}};
  a.v.resize(a.r * a.c);
  for (std::size_t i = 0; i < a.r; ++i)
    for (std::size_t j = 0; j < a.c; ++j) a.v[i * a.c + j] = m.at(i, j);
  detail::Dense b{m.num_cols(), n.num_cols(), {}};
  b.v.resize(b.r * b.c);
  for (std::size_t j = 0; j < b.r; ++j)
    for (std::size_t k = 0; k < b.c; ++k) b.v[j * b.c + k] = n.at(inner[j], k);
  detail::Dense p = f.order() == 2
                        ? detail::from_bits(detail::mul_bits(detail::to_bits(a),
                                                             detail::to_bits(b)))
                        : detail::mul_counting(f, a, b);
  FieldMatrix out(m.rows(), n.cols());
  for (std::size_t i = 0; i < p.r; ++i)
    for (std::size_t k = 0; k < p.c; ++k) out.at(i, k) = p.at(i, k);
  return m.is_square() && n.is_square() ? out.as_square() : out;
}

/// M^r by repeated squaring from the top bit of r down: X := M, then for
/// each lower bit X := X·X, and X := X·M where the bit is set.
inline FieldMatrix mat_pow(const FiniteField& f, const FieldMatrix& m,
                           const BinNat& r) {
  detail::Dense d = detail::dense_square(m);
  if (f.order() == 2) {
    auto p = detail::power_by_bits(detail::to_bits(d), r, detail::mul_bits);
    return detail::square_from_dense(m.rows(), detail::from_bits(p));
  }
  auto mul = [&](const detail::Dense& a, const detail::Dense& b) {
    return detail::mul_counting(f, a, b);
  };
  return detail::square_from_dense(m.rows(), detail::power_by_bits(d, r, mul));
}

/// Non-singularity by M^g = I for g = |GL_n(F)|.
inline bool nonsingular_square(const FiniteField& f, const FieldMatrix& m) {
  detail::Dense d = detail::dense_square(m);
  const std::size_t n = d.r;
  if (n == 0) return true;
  BinNat g = gl_order(f.order(), static_cast<std::uint32_t>(n));
  if (f.order() == 2) {
    auto p = detail::power_by_bits(detail::to_bits(d), g, detail::mul_bits);
    return p == detail::bits_identity(n);
  }
  auto mul = [&](const detail::Dense& a, const detail::Dense& b) {
    return detail::mul_counting(f, a, b);
  };
  detail::Dense p = detail::power_by_bits(d, g, mul);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p.at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

inline std::vector<std::size_t> natural_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = i;
  return o;
}

namespace detail {
/// Reduced row echelon form in place over the first ncols columns (extra
/// columns ride along). Returns the pivot columns.
inline std::vector<std::size_t> eliminate(const FiniteField& f,
                                          std::vector<std::vector<Elem>>& a,
                                          std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[sel], a[row]);
    Elem inv = f.inv(a[row][col]);
    for (auto& x : a[row]) x = f.mul(x, inv);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      Elem factor = a[r][col];
      for (std::size_t c = 0; c < a[r].size(); ++c)
        a[r][c] = f.sub(a[r][c], f.mul(factor, a[row][c]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline std::vector<std::vector<Elem>> read_ordered(
    const FieldMatrix& m, const std::vector<std::size_t>& row_order,
    const std::vector<std::size_t>& col_order) {
  if (row_order.size() != m.num_rows() || col_order.size() != m.num_cols())
    throw Error("order does not cover the index set");
  std::vector<std::vector<Elem>> a(row_order.size(),
                                   std::vector<Elem>(col_order.size()));
  for (std::size_t i = 0; i < row_order.size(); ++i)
    for (std::size_t j = 0; j < col_order.size(); ++j)
      a[i][j] = m.at(row_order[i], col_order[j]);
  return a;
}
}  // namespace detail

/// Rank by Gaussian elimination with rows and columns taken in the given
/// orders (positions into rows()/cols()).
inline std::size_t rank_gaussian(const FiniteField& f, const FieldMatrix& m,
                                 const std::vector<std::size_t>& row_order,
                                 const std::vector<std::size_t>& col_order) {
  auto a = detail::read_ordered(m, row_order, col_order);
  return detail::eliminate(f, a, col_order.size()).size();
}

inline std::size_t rank_gaussian(const FiniteField& f, const FieldMatrix& m) {
  return rank_gaussian(f, m, natural_order(m.num_rows()),
                       natural_order(m.num_cols()));
}

/// Some x with A·x = v (x indexed like cols(), v like rows()), or nullopt.
/// Free variables are set to zero.
inline std::optional<std::vector<Elem>> solve(
    const FiniteField& f, const FieldMatrix& a, const std::vector<Elem>& v,
    const std::vector<std::size_t>& row_order,
    const std::vector<std::size_t>& col_order) {
  if (v.size() != a.num_rows()) throw Error("solve: right-hand side size");
  auto aug = detail::read_ordered(a, row_order, col_order);
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(v[row_order[i]]);
  const std::size_t n = col_order.size();
  auto pivots = detail::eliminate(f, aug, n);
  for (std::size_t r = pivots.size(); r < aug.size(); ++r)
    if (aug[r][n] != 0) return std::nullopt;
  std::vector<Elem> x(n, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x[col_order[pivots[r]]] = aug[r][n];
  return x;
}

inline std::optional<std::vector<Elem>> solve(const FiniteField& f,
                                              const FieldMatrix& a,
                                              const std::vector<Elem>& v) {
  return solve(f, a, v, natural_order(a.num_rows()),
               natural_order(a.num_cols()));
}

/// For |I| = |J|: non-singularity of M·Mᵗ (determinant det(M)²).
inline bool nonsingular_rect(const FiniteField& f, const FieldMatrix& m) {
  if (m.num_rows() != m.num_cols())
    throw Error("nonsingular_rect needs |I| = |J|");
  return nonsingular_square(f, mat_mul(f, m, m.transposed()).as_square());
}

/// Same verdict via the square block matrix [[0, M], [Mᵗ, 0]] on I ⊔ J.
inline bool nonsingular_rect_block(const FiniteField& f, const FieldMatrix& m) {
  if (m.num_rows() != m.num_cols())
    throw Error("nonsingular_rect needs |I| = |J|");
  std::vector<std::string> index;
  for (const auto& r : m.rows()) index.push_back("r:" + r);
  for (const auto& c : m.cols()) index.push_back("c:" + c);
  FieldMatrix b = FieldMatrix::square(index);
  const std::size_t n = m.num_rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      b.at(i, n + j) = m.at(i, j);
      b.at(n + j, i) = m.at(i, j);
    }
  return nonsingular_square(f, b);
}

/// Uniform square matrix on "0".."n-1".
inline FieldMatrix random_matrix(const FiniteField& f, std::size_t n,
                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> index;
  for (std::size_t i = 0; i < n; ++i) index.push_back(std::to_string(i));
  FieldMatrix m = FieldMatrix::square(index);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m.at(i, j) = static_cast<Elem>(rng() % f.order());
  return m;
}

inline constexpr std::size_t kTrialsPerBlock = 64;

/// Fraction of non-singular random n×n matrices. Trials are grouped in
/// blocks of kTrialsPerBlock, each block seeded from (seed, block index), so
/// the result does not depend on the worker count.
inline double frequency_experiment(const FiniteField& f, std::size_t n,
                                   std::size_t trials, std::uint64_t seed,
                                   unsigned workers = 0) {
  if (trials == 0) return 0.0;
  const std::size_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::size_t> hits(blocks, 0);
  parallel_blocks(
      blocks,
      [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        std::size_t lo = b * kTrialsPerBlock;
        std::size_t hi = std::min(trials, lo + kTrialsPerBlock);
        for (std::size_t t = lo; t < hi; ++t)
          if (nonsingular_square(f, random_matrix(f, n, rng()))) ++hits[b];
      },
      workers);
  std::size_t total = 0;
  for (auto h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace choiceless::linalg
