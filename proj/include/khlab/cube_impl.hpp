#pragma once

#include <algorithm>
#include <numeric>

namespace khlab::cube {

inline CubeVertex smooth_mask(const LinkDiagram& d, std::uint32_t mask) {
  const int c = d.n_crossings();
  if (c > 0 && c < 32 && (mask >> c) != 0) fail(ErrorCode::internal, "smoothing mask out of range");

  CubeVertex v;
  v.smoothing = mask;
  v.r = std::popcount(mask);
  v.free_loops = d.free_loops();
  const int n_slots = 4 * c;
  v.slot_circle.assign(n_slots, -1);

  // Union slots through edges and through the smoothing arcs of each crossing.
  std::vector<int> parent(n_slots);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

  std::map<int, std::vector<int>> slots_of_edge;
  for (int j = 0; j < c; ++j)
    for (int pos = 0; pos < 4; ++pos) slots_of_edge[d.crossings()[j].e[pos]].push_back(4 * j + pos);
  for (const auto& [label, slots] : slots_of_edge) unite(slots[0], slots[1]);
  for (int j = 0; j < c; ++j) {
    if ((mask >> j) & 1u) {
      unite(4 * j + 0, 4 * j + 3);
      unite(4 * j + 1, 4 * j + 2);
    } else {
      unite(4 * j + 0, 4 * j + 1);
      unite(4 * j + 2, 4 * j + 3);
    }
  }

  std::map<int, int> min_edge_of_root;
  for (const auto& [label, slots] : slots_of_edge) {
    int r = find(slots[0]);
    auto it = min_edge_of_root.find(r);
    if (it == min_edge_of_root.end() || label < it->second) min_edge_of_root[r] = label;
  }
  std::vector<std::pair<int, int>> ordered;  // (min edge, root)
  for (const auto& [root, me] : min_edge_of_root) ordered.emplace_back(me, root);
  std::sort(ordered.begin(), ordered.end());
  std::map<int, int> circle_of_root;
  for (int k = 0; k < static_cast<int>(ordered.size()); ++k) {
    circle_of_root[ordered[k].second] = k;
    v.circle_min_edge.push_back(ordered[k].first);
  }
  v.n_traced = static_cast<int>(ordered.size());
  for (int s = 0; s < n_slots; ++s) v.slot_circle[s] = static_cast<std::int16_t>(circle_of_root.at(find(s)));
  return v;
}

inline CubeVertex smooth(const LinkDiagram& d, const std::vector<int>& smoothing_bits) {
  if (static_cast<int>(smoothing_bits.size()) != d.n_crossings())
    fail(ErrorCode::shape_mismatch, "smoothing length must equal the crossing count");
  std::uint32_t mask = 0;
  for (int j = 0; j < d.n_crossings(); ++j) {
    if (smoothing_bits[j] != 0 && smoothing_bits[j] != 1)
      fail(ErrorCode::shape_mismatch, "smoothing entries must be 0 or 1");
    if (smoothing_bits[j]) mask |= 1u << j;
  }
  return smooth_mask(d, mask);
}

template <class R>
void verify_complex(const FilteredComplex<R>& c) {
  const R& ring = c.ring;
  const bool bigraded = c.triple.h == 0 && c.triple.t == 0;
  for (int k = 0; k < static_cast<int>(c.boundary.size()); ++k) {
    const auto& m = c.boundary[k];
    for (int r = 0; r < m.n_rows(); ++r)
      for (const auto& [col, val] : m.row(r)) {
        int dq = c.gens[k + 1][r].q - c.gens[k][col].q;
        if (dq < 0) fail(ErrorCode::internal, "boundary entry decreases the filtration");
        if (bigraded && dq != 0) fail(ErrorCode::internal, "bigraded boundary entry shifts q");
        (void)val;
      }
  }
  for (int k = 0; k + 1 < static_cast<int>(c.boundary.size()); ++k) {
    const auto& d0 = c.boundary[k];
    const auto& d1 = c.boundary[k + 1];
    auto d0_cols = d0.columns();
    auto d1_cols = d1.columns();
    for (int j = 0; j < d0.n_cols(); ++j) {
      exactalg::SparseVec<R> acc;
      for (const auto& [mid, f] : d0_cols[j]) exactalg::vec_addmul(ring, acc, f, d1_cols[mid]);
      if (!acc.empty()) fail(ErrorCode::internal, "d^2 != 0 in the cube complex");
    }
  }
}

template <class R>
FilteredComplex<R> build_complex(const LinkDiagram& d, const TheoryTriple& triple,
                                 const FrobeniusSystem<R>& sys, int max_crossings) {
  if (sys.ring().descriptor() != triple.ring)
    fail(ErrorCode::ring_mismatch, "Frobenius system ring does not match the theory triple");
  if (!(sys.h() == sys.ring().from_int(triple.h)) || !(sys.t() == sys.ring().from_int(triple.t)))
    fail(ErrorCode::ring_mismatch, "Frobenius system (h,t) does not match the theory triple");
  const int c = d.n_crossings();
  if (c > max_crossings || c > 30)
    fail(ErrorCode::cube_too_large, "diagram has " + std::to_string(c) + " crossings, limit " +
                                        std::to_string(std::min(max_crossings, 30)));

  FilteredComplex<R> out;
  out.ring = sys.ring();
  out.triple = triple;
  out.n_crossings = c;
  out.c_plus = d.c_plus();
  out.c_minus = d.c_minus();
  out.n_components = d.n_components();

  const std::uint32_t n_vertices = 1u << c;
  std::vector<CubeVertex> vertices;
  vertices.reserve(n_vertices);
  for (std::uint32_t v = 0; v < n_vertices; ++v) vertices.push_back(smooth_mask(d, v));

  out.gens.assign(c + 1, {});
  out.vertex_base.assign(c + 1, {});
  for (std::uint32_t v = 0; v < n_vertices; ++v) {
    const CubeVertex& vx = vertices[v];
    const int k = vx.n_circles();
    if (k > 30) fail(ErrorCode::cube_too_large, "more than 30 circles in one smoothing");
    auto& bucket = out.gens[vx.r];
    out.vertex_base[vx.r][v] = static_cast<int>(bucket.size());
    const int shift = vx.r - out.c_minus + out.c_plus - out.c_minus;
    for (std::uint32_t labels = 0; labels < (1u << k); ++labels) {
      int p = k - 2 * std::popcount(labels);
      bucket.push_back(Generator{v, labels, p + shift});
    }
  }

  // basis products and coproducts: index 0 is the unit, 1 is x
  const R& ring = sys.ring();
  frobenius::AlgebraElement<R> basis[2] = {{ring.one(), ring.zero()}, {ring.zero(), ring.one()}};
  frobenius::AlgebraElement<R> mult[2][2];
  frobenius::TensorElement<R> comult[2];
  for (int i = 0; i < 2; ++i) {
    comult[i] = sys.comultiply(basis[i]);
    for (int j = 0; j < 2; ++j) mult[i][j] = sys.multiply(basis[i], basis[j]);
  }

  out.boundary.clear();
  for (int k = 0; k < c; ++k)
    out.boundary.emplace_back(static_cast<int>(out.gens[k + 1].size()), static_cast<int>(out.gens[k].size()));

  for (std::uint32_t v = 0; v < n_vertices; ++v) {
    const CubeVertex& src = vertices[v];
    const int deg = src.r;
    const int src_base = out.vertex_base[deg].at(v);
    const int n_src_circles = src.n_circles();
    for (int j = 0; j < c; ++j) {
      if ((v >> j) & 1u) continue;
      const std::uint32_t w = v | (1u << j);
      const CubeVertex& dst = vertices[w];
      const int dst_base = out.vertex_base[deg + 1].at(w);
      const bool negative = (std::popcount(v & ((1u << j) - 1u)) & 1) != 0;

      const int ca = src.slot_circle[4 * j + 0];
      const int cb = src.slot_circle[4 * j + 2];
      const int da = dst.slot_circle[4 * j + 0];
      const int db = dst.slot_circle[4 * j + 2];
      const bool is_merge = ca != cb;
      if (is_merge == (da != db)) fail(ErrorCode::internal, "cube edge does not change the circle count by one");

      // map the untouched circles of v to circle indices of w by min-edge key
      std::vector<int> target_pos(n_src_circles, -1);
      for (int s = 0; s < src.n_traced; ++s) {
        if (s == ca || s == cb) continue;
        auto it = std::lower_bound(dst.circle_min_edge.begin(), dst.circle_min_edge.end(), src.circle_min_edge[s]);
        if (it == dst.circle_min_edge.end() || *it != src.circle_min_edge[s])
          fail(ErrorCode::internal, "untouched circle lost across a cube edge");
        target_pos[s] = static_cast<int>(it - dst.circle_min_edge.begin());
      }
      for (int l = 0; l < src.free_loops; ++l) target_pos[src.n_traced + l] = dst.n_traced + l;

      auto& matrix = out.boundary[deg];
      const std::uint32_t n_labelings = 1u << n_src_circles;
      for (std::uint32_t labels = 0; labels < n_labelings; ++labels) {
        std::uint32_t base_labels = 0;
        for (int s = 0; s < n_src_circles; ++s)
          if (target_pos[s] >= 0 && ((labels >> s) & 1u)) base_labels |= 1u << target_pos[s];
        const int col = src_base + static_cast<int>(labels);
        auto emit = [&](std::uint32_t tgt_labels, const typename R::Elem& coeff) {
          if (ring.is_zero(coeff)) return;
          matrix.add_at(ring, dst_base + static_cast<int>(tgt_labels), col,
                        negative ? ring.neg(coeff) : coeff);
        };
        if (is_merge) {
          const auto& prod = mult[(labels >> ca) & 1u][(labels >> cb) & 1u];
          emit(base_labels, prod.c1);
          emit(base_labels | (1u << da), prod.cx);
        } else {
          const auto& cop = comult[(labels >> ca) & 1u];
          emit(base_labels, cop.c11);
          emit(base_labels | (1u << db), cop.c1x);
          emit(base_labels | (1u << da), cop.cx1);
          emit(base_labels | (1u << da) | (1u << db), cop.cxx);
        }
      }
    }
  }

  verify_complex(out);
  return out;
}

}  // namespace khlab::cube
