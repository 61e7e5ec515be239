#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "qmas/errors.hpp"
#include "qmas/gf.hpp"

namespace qmas {

using Row = std::vector<std::uint32_t>;

// Dense row-major matrix over GF(q). Zero-row and zero-column shapes are
// legal; every generator matrix of the trivial code {0} is 0 x m.
class GfMatrix {
public:
  GfMatrix(std::size_t rows, std::size_t cols, std::uint32_t q)
      : rows_(rows), cols_(cols), q_(q), entries_(rows * cols, 0) {
    if (!is_prime(q)) throw ParameterViolation("matrix modulus must be prime");
  }

  static GfMatrix from_rows(const std::vector<Row>& rows, std::size_t cols, std::uint32_t q) {
    GfMatrix m(rows.size(), cols, q);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw ParameterViolation("ragged rows in matrix literal");
      for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c] % q;
    }
    return m;
  }

  static GfMatrix identity(std::size_t n, std::uint32_t q) {
    GfMatrix m(n, n, q);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t modulus() const noexcept { return q_; }

  std::uint32_t& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  Row row(std::size_t r) const {
    return Row(entries_.begin() + r * cols_, entries_.begin() + (r + 1) * cols_);
  }

  std::vector<Row> row_list() const {
    std::vector<Row> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
  }

  void append_row(const Row& r) {
    if (r.size() != cols_) throw ParameterViolation("row length mismatch");
    entries_.insert(entries_.end(), r.begin(), r.end());
    ++rows_;
  }

  friend bool operator==(const GfMatrix& a, const GfMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.q_ == b.q_ && a.entries_ == b.entries_;
  }

private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint32_t q_;
  std::vector<std::uint32_t> entries_;
};

// 1-based, strictly increasing coordinate positions.
class IndexSet {
public:
  IndexSet() = default;
  explicit IndexSet(std::vector<std::uint32_t> indices) : idx_(std::move(indices)) {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
      if (idx_[i] == 0) throw IndexOutOfRange("coordinate indices are 1-based");
      if (i > 0 && idx_[i] <= idx_[i - 1])
        throw IndexOutOfRange("coordinate indices must be strictly increasing");
    }
  }

  static IndexSet all(std::uint32_t n) {
    std::vector<std::uint32_t> v(n);
    for (std::uint32_t i = 0; i < n; ++i) v[i] = i + 1;
    return IndexSet(std::move(v));
  }

  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  std::uint32_t operator[](std::size_t i) const { return idx_[i]; }
  const std::vector<std::uint32_t>& values() const noexcept { return idx_; }

  auto begin() const { return idx_.begin(); }
  auto end() const { return idx_.end(); }

private:
  std::vector<std::uint32_t> idx_;
};

inline GfMatrix project_columns(const GfMatrix& m, const IndexSet& I) {
  for (auto c : I) {
    if (c > m.cols()) throw IndexOutOfRange("projection index exceeds column count");
  }
  GfMatrix out(m.rows(), I.size(), m.modulus());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t j = 0; j < I.size(); ++j) out.at(r, j) = m.at(r, I[j] - 1);
  }
  return out;
}

// Incrementally maintained reduced row echelon basis. Rows are kept fully
// reduced against each other, pivots normalized to 1 and ordered by column.
class RowSpace {
public:
  RowSpace(std::size_t cols, std::uint32_t q) : cols_(cols), q_(q) {}

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Row>& basis() const noexcept { return rows_; }

  // Remainder of v after elimination against the current basis.
  Row residual(Row v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::uint32_t c = v[pivots_[k]];
      if (c != 0) axpy(v, gf_neg(c, q_), rows_[k]);
    }
    return v;
  }

  bool contains(const Row& v) const { return is_zero(residual(v)); }

  // Insert v if independent; returns whether the rank grew.
  bool insert(const Row& v) {
    Row r = residual(v);
    std::size_t p = pivot_of(r);
    if (p == cols_) return false;
    const std::uint32_t inv = gf_inv(r[p], q_);
    for (auto& x : r) x = gf_mul(x, inv, q_);
    // keep existing rows reduced against the new pivot
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::uint32_t c = rows_[k][p];
      if (c != 0) axpy(rows_[k], gf_neg(c, q_), r);
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, p);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
  }

  void insert_matrix(const GfMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) insert(m.row(r));
  }

private:
  static bool is_zero(const Row& v) {
    return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
  }
  std::size_t pivot_of(const Row& v) const {
    for (std::size_t c = 0; c < cols_; ++c)
      if (v[c] != 0) return c;
    return cols_;
  }
  void axpy(Row& v, std::uint32_t c, const Row& w) const {
    for (std::size_t i = 0; i < cols_; ++i) v[i] = gf_add(v[i], gf_mul(c, w[i], q_), q_);
  }

  std::size_t cols_;
  std::uint32_t q_;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

// Nonzero rows of the reduced row echelon form.
inline GfMatrix rref(const GfMatrix& m) {
  RowSpace space(m.cols(), m.modulus());
  space.insert_matrix(m);
  GfMatrix out(0, m.cols(), m.modulus());
  for (const auto& r : space.basis()) out.append_row(r);
  return out;
}

inline std::size_t rank(const GfMatrix& m) {
  RowSpace space(m.cols(), m.modulus());
  space.insert_matrix(m);
  return space.rank();
}

// Canonical transversal of C1/C2: rows of rref(G1) surviving reduction by
// C2, normalized. Requires rowspace(G2) <= rowspace(G1).
inline std::vector<Row> rref_and_basis_completion(const GfMatrix& G2, const GfMatrix& G1) {
  if (G1.cols() != G2.cols() || G1.modulus() != G2.modulus())
    throw ParameterViolation("code pair shape mismatch");
  RowSpace c1(G1.cols(), G1.modulus());
  c1.insert_matrix(G1);
  for (std::size_t r = 0; r < G2.rows(); ++r) {
    if (!c1.contains(G2.row(r))) throw NotNested();
  }
  RowSpace span(G2.cols(), G2.modulus());
  span.insert_matrix(G2);
  std::vector<Row> leaders;
  for (const auto& r : c1.basis()) {
    Row res = span.residual(r);
    const auto nz = std::find_if(res.begin(), res.end(), [](std::uint32_t x) { return x != 0; });
    if (nz == res.end()) continue;
    const std::uint32_t inv = gf_inv(*nz, G1.modulus());
    for (auto& x : res) x = gf_mul(x, inv, G1.modulus());
    leaders.push_back(res);
    span.insert(leaders.back());
  }
  return leaders;
}

// Particular solution u of sum_i u_i * A_i = target (free variables zero),
// or nullopt when inconsistent.
inline std::optional<Row> solve_linear(const std::vector<Row>& A, const Row& target,
                                       std::uint32_t q) {
  const std::size_t k = A.size();
  const std::size_t m = target.size();
  for (const auto& r : A) {
    if (r.size() != m) throw ParameterViolation("solve_linear shape mismatch");
  }
  // Augmented system over the unknown coefficient vector: one equation per
  // coordinate, columns are the candidate rows.
  std::vector<Row> eq(m, Row(k + 1, 0));
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < k; ++i) eq[e][i] = A[i][e];
    eq[e][k] = target[e];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < k && row < m; ++col) {
    std::size_t sel = row;
    while (sel < m && eq[sel][col] == 0) ++sel;
    if (sel == m) continue;
    std::swap(eq[sel], eq[row]);
    const std::uint32_t inv = gf_inv(eq[row][col], q);
    for (auto& x : eq[row]) x = gf_mul(x, inv, q);
    for (std::size_t r2 = 0; r2 < m; ++r2) {
      if (r2 == row || eq[r2][col] == 0) continue;
      const std::uint32_t c = gf_neg(eq[r2][col], q);
      for (std::size_t j = 0; j <= k; ++j)
        eq[r2][j] = gf_add(eq[r2][j], gf_mul(c, eq[row][j], q), q);
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (std::size_t r2 = row; r2 < m; ++r2) {
    if (eq[r2][k] != 0) return std::nullopt;
  }
  Row u(k, 0);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) u[pivot_col[i]] = eq[i][k];
  return u;
}

// Recover the secret from a partial observation of a coset codeword.
// Requires the qualified criterion on I; the answer is then independent of
// which codeword of the coset was sampled.
inline Row solve_coset(const GfMatrix& G1, const GfMatrix& G2, const std::vector<Row>& leaders,
                       const IndexSet& I, const Row& observed) {
  if (observed.size() != I.size())
    throw ParameterViolation("observation length does not match index set");
  const std::uint32_t q = G1.modulus();
  const std::size_t L = leaders.size();
  const GfMatrix B1 = rref(G1);
  const GfMatrix B2 = rref(G2);
  if (rank(project_columns(G1, I)) != rank(project_columns(G2, I)) + L) throw NotQualified();

  const GfMatrix P1 = project_columns(B1, I);
  std::vector<Row> proj_rows;
  proj_rows.reserve(B1.rows());
  for (std::size_t r = 0; r < B1.rows(); ++r) proj_rows.push_back(P1.row(r));
  const auto u = solve_linear(proj_rows, observed, q);
  if (!u) throw InconsistentShares();

  Row x(G1.cols(), 0);
  for (std::size_t r = 0; r < B1.rows(); ++r) {
    for (std::size_t c = 0; c < G1.cols(); ++c)
      x[c] = gf_add(x[c], gf_mul((*u)[r], B1.at(r, c), q), q);
  }

  std::vector<Row> basis;
  for (std::size_t r = 0; r < B2.rows(); ++r) basis.push_back(B2.row(r));
  basis.insert(basis.end(), leaders.begin(), leaders.end());
  const auto v = solve_linear(basis, x, q);
  if (!v) throw InconsistentShares("codeword does not decompose over the stored pair");
  return Row(v->begin() + B2.rows(), v->end());
}

} // namespace qmas
