#include "khlab/smith.hpp"

#include <algorithm>
#include <set>

namespace khlab::exactalg {

namespace {

mpz_class trunc_quot(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace

// gcd-driven row/column reduction with the pivot chosen as the smallest
// nonzero absolute value of the active submatrix (first such entry in
// row-major order on ties, |1| short-circuits the scan).
SmithForm smith_normal_form(const SparseMatrix<IntegerRing>& m) {
  const int nr = m.n_rows(), nc = m.n_cols();
  std::vector<std::map<int, mpz_class>> rows(nr);
  for (int r = 0; r < nr; ++r) rows[r] = m.row(r);
  std::vector<std::set<int>> cols(nc);
  for (int r = 0; r < nr; ++r)
    for (const auto& [c, v] : rows[r]) cols[c].insert(r);
  std::vector<char> row_active(nr, 1), col_active(nc, 1);

  auto row_submul = [&](int dst, int src, const mpz_class& q) {
    // row dst -= q * row src
    if (sgn(q) == 0) return;
    for (const auto& [c, v] : rows[src]) {
      auto it = rows[dst].find(c);
      if (it == rows[dst].end()) {
        rows[dst].emplace(c, -q * v);
        cols[c].insert(dst);
      } else {
        it->second -= q * v;
        if (sgn(it->second) == 0) {
          rows[dst].erase(it);
          cols[c].erase(dst);
        }
      }
    }
  };
  auto col_submul = [&](int dst, int src, const mpz_class& q) {
    if (sgn(q) == 0) return;
    std::vector<int> src_rows(cols[src].begin(), cols[src].end());
    for (int r : src_rows) {
      const mpz_class v = rows[r].at(src);
      auto it = rows[r].find(dst);
      if (it == rows[r].end()) {
        rows[r].emplace(dst, -q * v);
        cols[dst].insert(r);
      } else {
        it->second -= q * v;
        if (sgn(it->second) == 0) {
          rows[r].erase(it);
          cols[dst].erase(r);
        }
      }
    }
  };

  SmithForm out;
  for (;;) {
    // smallest nonzero absolute value among active entries
    int pr = -1, pc = -1;
    mpz_class best;
    for (int r = 0; r < nr && !(pr >= 0 && best == 1); ++r) {
      if (!row_active[r]) continue;
      for (const auto& [c, v] : rows[r]) {
        if (!col_active[c]) continue;
        mpz_class a = abs(v);
        if (pr < 0 || a < best) {
          pr = r;
          pc = c;
          best = a;
          if (best == 1) break;
        }
      }
    }
    if (pr < 0) break;

    for (;;) {
      bool restart = false;
      // clear column pc
      std::vector<int> col_rows(cols[pc].begin(), cols[pc].end());
      for (int r : col_rows) {
        if (r == pr || !row_active[r]) continue;
        mpz_class q = trunc_quot(rows[r].at(pc), rows[pr].at(pc));
        row_submul(r, pr, q);
        auto it = rows[r].find(pc);
        if (it != rows[r].end()) {  // nonzero remainder, strictly smaller pivot
          pr = r;
          restart = true;
          break;
        }
      }
      if (restart) continue;
      // clear row pr
      std::vector<std::pair<int, mpz_class>> row_entries(rows[pr].begin(), rows[pr].end());
      for (const auto& [c, v] : row_entries) {
        if (c == pc || !col_active[c]) continue;
        mpz_class q = trunc_quot(v, rows[pr].at(pc));
        col_submul(c, pc, q);
        auto it = rows[pr].find(c);
        if (it != rows[pr].end()) {
          pc = c;
          restart = true;
          break;
        }
      }
      if (restart) continue;

      // pivot row/col clean; enforce pivot | all remaining active entries
      const mpz_class piv = rows[pr].at(pc);
      int br = -1;
      for (int r = 0; r < nr && br < 0; ++r) {
        if (!row_active[r] || r == pr) continue;
        for (const auto& [c, v] : rows[r]) {
          if (!col_active[c] || c == pc) continue;
          if (!mpz_divisible_p(v.get_mpz_t(), piv.get_mpz_t())) {
            br = r;
            break;
          }
        }
      }
      if (br < 0) break;
      row_submul(pr, br, mpz_class(-1));  // fold offending row into the pivot row
    }

    mpz_class d = abs(rows[pr].at(pc));
    out.diagonal.push_back(d);
    row_active[pr] = 0;
    col_active[pc] = 0;
    for (const auto& [c, v] : rows[pr]) cols[c].erase(pr);
    rows[pr].clear();
    cols[pc].clear();
  }
  return out;
}

SmithDecomposition smith_decomposition(const SparseMatrix<IntegerRing>& m) {
  const int nr = m.n_rows(), nc = m.n_cols();
  std::vector<std::vector<mpz_class>> a(nr, std::vector<mpz_class>(nc, 0));
  for (int r = 0; r < nr; ++r)
    for (const auto& [c, v] : m.row(r)) a[r][c] = v;
  std::vector<std::vector<mpz_class>> u(nr, std::vector<mpz_class>(nr, 0)),
      v(nc, std::vector<mpz_class>(nc, 0));
  for (int i = 0; i < nr; ++i) u[i][i] = 1;
  for (int i = 0; i < nc; ++i) v[i][i] = 1;

  auto row_op = [&](int dst, int src, const mpz_class& q) {  // dst -= q*src
    for (int c = 0; c < nc; ++c) a[dst][c] -= q * a[src][c];
    for (int c = 0; c < nr; ++c) u[dst][c] -= q * u[src][c];
  };
  auto col_op = [&](int dst, int src, const mpz_class& q) {
    for (int r = 0; r < nr; ++r) a[r][dst] -= q * a[r][src];
    for (int r = 0; r < nc; ++r) v[r][dst] -= q * v[r][src];
  };
  auto row_swap = [&](int i, int j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
  };
  auto col_swap = [&](int i, int j) {
    for (int r = 0; r < nr; ++r) std::swap(a[r][i], a[r][j]);
    for (int r = 0; r < nc; ++r) std::swap(v[r][i], v[r][j]);
  };

  const int nmin = std::min(nr, nc);
  int t = 0;
  for (; t < nmin; ++t) {
    // locate smallest nonzero |entry| in the active region
    int pr = -1, pc = -1;
    mpz_class best;
    for (int r = t; r < nr; ++r)
      for (int c = t; c < nc; ++c) {
        if (sgn(a[r][c]) == 0) continue;
        mpz_class ab = abs(a[r][c]);
        if (pr < 0 || ab < best) {
          pr = r;
          pc = c;
          best = ab;
        }
      }
    if (pr < 0) break;
    row_swap(t, pr);
    col_swap(t, pc);

    for (;;) {
      bool restart = false;
      for (int r = t + 1; r < nr; ++r) {
        if (sgn(a[r][t]) == 0) continue;
        row_op(r, t, trunc_quot(a[r][t], a[t][t]));
        if (sgn(a[r][t]) != 0) {
          row_swap(t, r);
          restart = true;
          break;
        }
      }
      if (restart) continue;
      for (int c = t + 1; c < nc; ++c) {
        if (sgn(a[t][c]) == 0) continue;
        col_op(c, t, trunc_quot(a[t][c], a[t][t]));
        if (sgn(a[t][c]) != 0) {
          col_swap(t, c);
          restart = true;
          break;
        }
      }
      if (restart) continue;
      int br = -1, bc = -1;
      for (int r = t + 1; r < nr && br < 0; ++r)
        for (int c = t + 1; c < nc; ++c)
          if (sgn(a[r][c]) != 0 && !mpz_divisible_p(a[r][c].get_mpz_t(), a[t][t].get_mpz_t())) {
            br = r;
            bc = c;
            break;
          }
      if (br < 0) break;
      (void)bc;
      row_op(t, br, mpz_class(-1));
    }
    if (sgn(a[t][t]) < 0) {
      for (int c = 0; c < nc; ++c) a[t][c] = -a[t][c];
      for (int c = 0; c < nr; ++c) u[t][c] = -u[t][c];
    }
  }

  SmithDecomposition out;
  for (int i = 0; i < nmin; ++i)
    if (sgn(a[i][i]) != 0) out.form.diagonal.push_back(a[i][i]);
  out.U = std::move(u);
  out.V = std::move(v);
  return out;
}

std::vector<mpz_class> prime_power_factors(const mpz_class& d) {
  std::vector<mpz_class> out;
  mpz_class n = abs(d);
  if (n <= 1) return out;
  for (mpz_class p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) continue;
    mpz_class pw = 1;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
      n /= p;
      pw *= p;
    }
    out.push_back(pw);
  }
  if (n > 1) out.push_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace khlab::exactalg
