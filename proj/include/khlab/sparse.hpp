#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "khlab/error.hpp"
#include "khlab/rings.hpp"

namespace khlab::exactalg {

// Sparse vector keyed by index; zero coefficients are never stored.
template <class R>
using SparseVec = std::map<int, typename R::Elem>;

// dst += f * src, keeping dst free of explicit zeros.
template <class R>
void vec_addmul(const R& ring, SparseVec<R>& dst, const typename R::Elem& f, const SparseVec<R>& src) {
  if (ring.is_zero(f)) return;
  for (const auto& [i, v] : src) {
    auto it = dst.find(i);
    if (it == dst.end()) {
      dst.emplace(i, ring.mul(f, v));
    } else {
      it->second = ring.add(it->second, ring.mul(f, v));
      if (ring.is_zero(it->second)) dst.erase(it);
    }
  }
}

template <class R>
class SparseMatrix {
 public:
  using Elem = typename R::Elem;

  SparseMatrix() = default;
  SparseMatrix(int n_rows, int n_cols) : nr_(n_rows), nc_(n_cols), rows_(static_cast<std::size_t>(n_rows)) {
    if (n_rows < 0 || n_cols < 0) fail(ErrorCode::shape_mismatch, "negative matrix dimension");
  }

  int n_rows() const { return nr_; }
  int n_cols() const { return nc_; }

  void set(const R& ring, int r, int c, const Elem& v) {
    check_index(r, c);
    if (ring.is_zero(v))
      rows_[r].erase(c);
    else
      rows_[r][c] = v;
  }

  void add_at(const R& ring, int r, int c, const Elem& v) {
    check_index(r, c);
    auto it = rows_[r].find(c);
    if (it == rows_[r].end()) {
      if (!ring.is_zero(v)) rows_[r].emplace(c, v);
    } else {
      it->second = ring.add(it->second, v);
      if (ring.is_zero(it->second)) rows_[r].erase(it);
    }
  }

  const Elem* get(int r, int c) const {
    check_index(r, c);
    auto it = rows_[r].find(c);
    return it == rows_[r].end() ? nullptr : &it->second;
  }

  const std::map<int, Elem>& row(int r) const { return rows_[r]; }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& row : rows_) n += row.size();
    return n;
  }

  bool is_zero() const { return nnz() == 0; }

  SparseMatrix transpose() const {
    SparseMatrix t(nc_, nr_);
    for (int r = 0; r < nr_; ++r)
      for (const auto& [c, v] : rows_[r]) t.rows_[c].emplace(r, v);
    return t;
  }

  // Column-major copy of the entries.
  std::vector<SparseVec<R>> columns() const {
    std::vector<SparseVec<R>> cols(static_cast<std::size_t>(nc_));
    for (int r = 0; r < nr_; ++r)
      for (const auto& [c, v] : rows_[r]) cols[c].emplace(r, v);
    return cols;
  }

  bool operator==(const SparseMatrix& o) const { return nr_ == o.nr_ && nc_ == o.nc_ && rows_ == o.rows_; }

 private:
  void check_index(int r, int c) const {
    if (r < 0 || r >= nr_ || c < 0 || c >= nc_) fail(ErrorCode::shape_mismatch, "matrix index out of range");
  }

  int nr_ = 0, nc_ = 0;
  std::vector<std::map<int, Elem>> rows_;
};

namespace detail {

template <class R>
void require_field(const R&) {
  if constexpr (!R::is_field) fail(ErrorCode::ring_not_field, "operation requires field coefficients");
}

}  // namespace detail

// Rank over a field by sparse elimination. Pivots are chosen Markowitz-style:
// sparsest active column first, then within it the row minimizing
// (row fill, coefficient size, index); over Q the size criterion keeps
// numerator/denominator growth down.
template <class R>
int rank(const SparseMatrix<R>& m, const R& ring) {
  detail::require_field(ring);
  using Elem = typename R::Elem;
  const int nr = m.n_rows(), nc = m.n_cols();
  std::vector<std::map<int, Elem>> rows(nr);
  for (int r = 0; r < nr; ++r) rows[r] = m.row(r);
  std::vector<std::set<int>> cols(nc);
  for (int r = 0; r < nr; ++r)
    for (const auto& [c, v] : rows[r]) cols[c].insert(r);
  std::vector<char> row_active(nr, 1), col_active(nc, 1);

  int rk = 0;
  for (;;) {
    int best_col = -1;
    std::size_t best_nnz = 0;
    for (int c = 0; c < nc; ++c) {
      if (!col_active[c] || cols[c].empty()) continue;
      if (best_col < 0 || cols[c].size() < best_nnz) {
        best_col = c;
        best_nnz = cols[c].size();
      }
    }
    if (best_col < 0) break;

    int pivot_row = -1;
    std::size_t pr_nnz = 0, pr_size = 0;
    for (int r : cols[best_col]) {
      std::size_t sz = ring.size_measure(rows[r].at(best_col));
      if (pivot_row < 0 || rows[r].size() < pr_nnz || (rows[r].size() == pr_nnz && sz < pr_size)) {
        pivot_row = r;
        pr_nnz = rows[r].size();
        pr_size = sz;
      }
    }

    const Elem piv_inv = ring.inv(rows[pivot_row].at(best_col));
    std::vector<int> touched(cols[best_col].begin(), cols[best_col].end());
    for (int r : touched) {
      if (r == pivot_row) continue;
      Elem f = ring.neg(ring.mul(rows[r].at(best_col), piv_inv));
      for (const auto& [c, v] : rows[pivot_row]) {
        if (!col_active[c]) continue;
        auto it = rows[r].find(c);
        if (it == rows[r].end()) {
          rows[r].emplace(c, ring.mul(f, v));
          cols[c].insert(r);
        } else {
          it->second = ring.add(it->second, ring.mul(f, v));
          if (ring.is_zero(it->second)) {
            rows[r].erase(it);
            cols[c].erase(r);
          }
        }
      }
    }
    for (const auto& [c, v] : rows[pivot_row]) cols[c].erase(pivot_row);
    row_active[pivot_row] = 0;
    col_active[best_col] = 0;
    cols[best_col].clear();
    ++rk;
  }
  return rk;
}

// Rank of the vertical stack [top; bottom]; computes dim(rowspan(top) + rowspan(bottom)).
template <class R>
int rank_stacked(const SparseMatrix<R>& top, const SparseMatrix<R>& bottom, const R& ring) {
  detail::require_field(ring);
  if (top.n_cols() != bottom.n_cols())
    fail(ErrorCode::shape_mismatch, "rank_stacked requires equal column counts");
  SparseMatrix<R> s(top.n_rows() + bottom.n_rows(), top.n_cols());
  for (int r = 0; r < top.n_rows(); ++r)
    for (const auto& [c, v] : top.row(r)) s.set(ring, r, c, v);
  for (int r = 0; r < bottom.n_rows(); ++r)
    for (const auto& [c, v] : bottom.row(r)) s.set(ring, top.n_rows() + r, c, v);
  return rank(s, ring);
}

// Greedy left-to-right column reduction. Pivot of a reduced column is its
// largest row index; pivot rows are unique across image_basis.
template <class R>
struct ColumnReduction {
  std::vector<SparseVec<R>> image_basis;  // reduced nonzero columns
  std::vector<SparseVec<R>> image_rec;    // expressions of those columns in the original ones
  std::vector<SparseVec<R>> kernel;       // combinations of original columns mapping to zero
  std::map<int, int> low_to_image;        // pivot row -> index into image_basis
};

template <class R>
ColumnReduction<R> column_reduce(const SparseMatrix<R>& m, const R& ring, bool want_recorders) {
  detail::require_field(ring);
  using Elem = typename R::Elem;
  ColumnReduction<R> out;
  auto cols = m.columns();
  for (int j = 0; j < m.n_cols(); ++j) {
    SparseVec<R> col = std::move(cols[j]);
    SparseVec<R> rec;
    if (want_recorders) rec.emplace(j, ring.one());
    while (!col.empty()) {
      int low = col.rbegin()->first;
      auto it = out.low_to_image.find(low);
      if (it == out.low_to_image.end()) {
        out.low_to_image.emplace(low, static_cast<int>(out.image_basis.size()));
        out.image_basis.push_back(std::move(col));
        out.image_rec.push_back(std::move(rec));
        col.clear();
        break;
      }
      const auto& piv = out.image_basis[it->second];
      Elem f = ring.neg(ring.mul(col.rbegin()->second, ring.inv(piv.rbegin()->second)));
      vec_addmul(ring, col, f, piv);
      if (want_recorders) vec_addmul(ring, rec, f, out.image_rec[it->second]);
    }
    if (col.empty() && want_recorders && !rec.empty()) out.kernel.push_back(std::move(rec));
  }
  return out;
}

// Basis of ker(m) as combinations of the columns of m.
template <class R>
std::vector<SparseVec<R>> kernel_basis(const SparseMatrix<R>& m, const R& ring) {
  return column_reduce(m, ring, true).kernel;
}

template <class R>
SparseMatrix<R> multiply(const SparseMatrix<R>& a, const SparseMatrix<R>& b, const R& ring) {
  if (a.n_cols() != b.n_rows()) fail(ErrorCode::shape_mismatch, "matrix product shape mismatch");
  SparseMatrix<R> out(a.n_rows(), b.n_cols());
  auto a_cols = a.columns();
  auto b_cols = b.columns();
  for (int j = 0; j < b.n_cols(); ++j) {
    SparseVec<R> acc;
    for (const auto& [mid, f] : b_cols[j]) vec_addmul(ring, acc, f, a_cols[mid]);
    for (const auto& [r, v] : acc) out.set(ring, r, j, v);
  }
  return out;
}

// Solve m*x = v over a field; nullopt when v is outside the column span.
template <class R>
std::optional<std::vector<typename R::Elem>> solve_in_span(const SparseMatrix<R>& m,
                                                           const std::vector<typename R::Elem>& v,
                                                           const R& ring) {
  detail::require_field(ring);
  using Elem = typename R::Elem;
  if (static_cast<int>(v.size()) != m.n_rows())
    fail(ErrorCode::shape_mismatch, "solve_in_span: vector length must equal row count");
  auto red = column_reduce(m, ring, true);
  SparseVec<R> w;
  for (int i = 0; i < m.n_rows(); ++i)
    if (!ring.is_zero(v[i])) w.emplace(i, v[i]);
  SparseVec<R> combo;
  while (!w.empty()) {
    int low = w.rbegin()->first;
    auto it = red.low_to_image.find(low);
    if (it == red.low_to_image.end()) return std::nullopt;
    const auto& piv = red.image_basis[it->second];
    Elem f = ring.mul(w.rbegin()->second, ring.inv(piv.rbegin()->second));
    vec_addmul(ring, w, ring.neg(f), piv);
    for (const auto& [c, rc] : red.image_rec[it->second]) {
      auto jt = combo.find(c);
      if (jt == combo.end()) {
        Elem t = ring.mul(f, rc);
        if (!ring.is_zero(t)) combo.emplace(c, t);
      } else {
        jt->second = ring.add(jt->second, ring.mul(f, rc));
        if (ring.is_zero(jt->second)) combo.erase(jt);
      }
    }
  }
  std::vector<Elem> x(static_cast<std::size_t>(m.n_cols()), ring.zero());
  for (const auto& [c, val] : combo) x[c] = val;
  return x;
}

}  // namespace khlab::exactalg
