#pragma once

#include <set>
#include <tuple>

#include "khlab/cube.hpp"

namespace khlab::reduce {

struct Elimination {
  int degree;  // homological degree of the source generator
  cube::Generator source, target;
};

struct ReductionTrace {
  std::vector<Elimination> eliminations;
  long long size_before = 0, size_after = 0;
};

// Gaussian elimination of unit, filtration-preserving boundary entries.
// Only entries with a unit coefficient and q(target) = q(source) are
// eliminated; that makes each step a filtered homotopy equivalence, so
// homology and all filtration profiles are unchanged. Sweeps degrees low to
// high; within a degree the entry with least Markowitz fill-in
// (nnz(col)-1)*(nnz(row)-1) goes first, ties broken by (col, row).
template <class R>
std::pair<cube::FilteredComplex<R>, ReductionTrace> reduce_complex(const cube::FilteredComplex<R>& c,
                                                                   bool debug_check = false) {
  using Elem = typename R::Elem;
  const R& ring = c.ring;
  const int n_slots = c.n_degree_slots();

  std::vector<std::vector<exactalg::SparseVec<R>>> rows(c.boundary.size()), cols(c.boundary.size());
  for (std::size_t k = 0; k < c.boundary.size(); ++k) {
    rows[k].resize(c.gens[k + 1].size());
    cols[k].resize(c.gens[k].size());
    for (int r = 0; r < c.boundary[k].n_rows(); ++r)
      for (const auto& [col, v] : c.boundary[k].row(r)) {
        rows[k][r].emplace(col, v);
        cols[k][col].emplace(r, v);
      }
  }
  std::vector<std::vector<char>> alive(n_slots);
  for (int k = 0; k < n_slots; ++k) alive[k].assign(c.gens[k].size(), 1);

  ReductionTrace trace;
  trace.size_before = c.total_generators();

  auto q_preserving_unit = [&](int k, int row, int col, const Elem& v) {
    return ring.is_unit(v) && c.gens[k + 1][row].q == c.gens[k][col].q;
  };
  auto cost_of = [&](int k, int row, int col) {
    return (static_cast<long long>(cols[k][col].size()) - 1) * (static_cast<long long>(rows[k][row].size()) - 1);
  };

  auto debug_verify = [&]() {
    for (std::size_t k = 0; k + 1 < rows.size(); ++k)
      for (std::size_t a = 0; a < cols[k].size(); ++a) {
        if (!alive[k][a]) continue;
        exactalg::SparseVec<R> acc;
        for (const auto& [mid, f] : cols[k][a]) exactalg::vec_addmul(ring, acc, f, cols[k + 1][mid]);
        if (!acc.empty()) fail(ErrorCode::internal, "d^2 != 0 after an elimination step");
      }
  };

  for (std::size_t k = 0; k < rows.size(); ++k) {
    // candidate queue with lazily refreshed costs
    std::set<std::tuple<long long, int, int>> queue;
    for (std::size_t col = 0; col < cols[k].size(); ++col)
      for (const auto& [row, v] : cols[k][col])
        if (q_preserving_unit(k, row, col, v))
          queue.emplace(cost_of(k, row, static_cast<int>(col)), static_cast<int>(col), row);

    while (!queue.empty()) {
      auto [cost, col, row] = *queue.begin();
      queue.erase(queue.begin());
      auto it = cols[k][col].find(row);
      if (it == cols[k][col].end() || !q_preserving_unit(k, row, col, it->second)) continue;
      long long fresh = cost_of(k, row, col);
      if (fresh != cost) {
        queue.emplace(fresh, col, row);
        continue;
      }

      const Elem u_inv = ring.inv(it->second);
      std::vector<std::pair<int, Elem>> row_entries(rows[k][row].begin(), rows[k][row].end());
      std::vector<std::pair<int, Elem>> col_entries(cols[k][col].begin(), cols[k][col].end());

      for (const auto& [a, va] : row_entries) {
        if (a == col) continue;
        const Elem fa = ring.mul(va, u_inv);
        for (const auto& [b, wb] : col_entries) {
          if (b == row) continue;
          const Elem delta = ring.neg(ring.mul(fa, wb));
          auto rt = rows[k][b].find(a);
          Elem next = rt == rows[k][b].end() ? delta : ring.add(rt->second, delta);
          if (ring.is_zero(next)) {
            if (rt != rows[k][b].end()) {
              rows[k][b].erase(rt);
              cols[k][a].erase(b);
            }
          } else {
            rows[k][b][a] = next;
            cols[k][a][b] = next;
            if (q_preserving_unit(k, b, a, next)) queue.emplace(cost_of(k, b, a), a, b);
          }
        }
      }

      // drop the eliminated pair from this matrix and from the neighbours
      for (const auto& [a, va] : row_entries) cols[k][a].erase(row);
      for (const auto& [b, wb] : col_entries) rows[k][b].erase(col);
      rows[k][row].clear();
      cols[k][col].clear();
      if (k > 0) {
        for (const auto& [w, v] : rows[k - 1][col]) cols[k - 1][w].erase(col);
        rows[k - 1][col].clear();
      }
      if (k + 1 < rows.size()) {
        for (const auto& [z, v] : cols[k + 1][row]) rows[k + 1][z].erase(row);
        cols[k + 1][row].clear();
      }
      alive[k][col] = 0;
      alive[k + 1][row] = 0;
      trace.eliminations.push_back(Elimination{c.degree_of_slot(static_cast<int>(k)), c.gens[k][col],
                                               c.gens[k + 1][row]});
      if (debug_check) debug_verify();
    }
  }

  // compact the surviving generators, keeping their original order
  cube::FilteredComplex<R> out;
  out.ring = c.ring;
  out.triple = c.triple;
  out.n_crossings = c.n_crossings;
  out.c_plus = c.c_plus;
  out.c_minus = c.c_minus;
  out.n_components = c.n_components;
  out.reduced = true;
  out.gens.assign(n_slots, {});
  std::vector<std::vector<int>> new_index(n_slots);
  for (int k = 0; k < n_slots; ++k) {
    new_index[k].assign(c.gens[k].size(), -1);
    for (std::size_t i = 0; i < c.gens[k].size(); ++i)
      if (alive[k][i]) {
        new_index[k][i] = static_cast<int>(out.gens[k].size());
        out.gens[k].push_back(c.gens[k][i]);
      }
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    exactalg::SparseMatrix<R> m(static_cast<int>(out.gens[k + 1].size()), static_cast<int>(out.gens[k].size()));
    for (std::size_t col = 0; col < cols[k].size(); ++col) {
      if (!alive[k][col]) continue;
      for (const auto& [row, v] : cols[k][col]) m.set(ring, new_index[k + 1][row], new_index[k][col], v);
    }
    out.boundary.push_back(std::move(m));
  }
  trace.size_after = out.total_generators();
  cube::verify_complex(out);
  return {std::move(out), std::move(trace)};
}

}  // namespace khlab::reduce
