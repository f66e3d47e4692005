#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include "khlab/frobenius.hpp"
#include "khlab/link.hpp"
#include "khlab/sparse.hpp"

namespace khlab::cube {

using frobenius::FrobeniusSystem;
using frobenius::TheoryTriple;
using linkio::LinkDiagram;

// Circles of one full smoothing. Slot 4*j+pos is PD position pos of crossing
// j; the state-0 smoothing joins slots (0,1) and (2,3), state 1 joins (0,3)
// and (1,2). Traced circles are ordered by their smallest edge label; free
// loops of the diagram come after them.
struct CubeVertex {
  std::uint32_t smoothing = 0;
  int r = 0;  // number of 1-smoothings
  int n_traced = 0;
  int free_loops = 0;
  std::vector<std::int16_t> slot_circle;  // 4c entries
  std::vector<int> circle_min_edge;       // n_traced entries, strictly ascending

  int n_circles() const { return n_traced + free_loops; }
};

CubeVertex smooth_mask(const LinkDiagram& d, std::uint32_t mask);
CubeVertex smooth(const LinkDiagram& d, const std::vector<int>& smoothing_bits);

// An enhanced state: per-circle labels packed as bits (0 -> "1", 1 -> "x")
// in circle order. Homological degree is r - c_minus, filtration degree
// q = p + i + c_plus - c_minus with p = #1-labels - #x-labels.
struct Generator {
  std::uint32_t vertex = 0;
  std::uint32_t labels = 0;
  int q = 0;

  bool operator==(const Generator&) const = default;
};

template <class R>
struct FilteredComplex {
  R ring;
  TheoryTriple triple;
  int n_crossings = 0, c_plus = 0, c_minus = 0, n_components = 0;
  bool reduced = false;

  // index k holds homological degree k - c_minus
  std::vector<std::vector<Generator>> gens;
  std::vector<exactalg::SparseMatrix<R>> boundary;  // boundary[k]: degree k -> k+1
  std::vector<std::map<std::uint32_t, int>> vertex_base;  // degree -> vertex -> first gen index

  int n_degree_slots() const { return static_cast<int>(gens.size()); }
  int degree_of_slot(int k) const { return k - c_minus; }
  long long total_generators() const {
    long long n = 0;
    for (const auto& g : gens) n += static_cast<long long>(g.size());
    return n;
  }
  long long euler_characteristic() const {
    long long chi = 0;
    for (int k = 0; k < n_degree_slots(); ++k)
      chi += (degree_of_slot(k) % 2 == 0 ? 1 : -1) * static_cast<long long>(gens[k].size());
    return chi;
  }
};

// Exact checks: consecutive boundaries compose to zero and every boundary
// entry is filtration non-decreasing (strictly equal in q for (h,t) = (0,0)).
template <class R>
void verify_complex(const FilteredComplex<R>& c);

template <class R>
FilteredComplex<R> build_complex(const LinkDiagram& d, const TheoryTriple& triple,
                                 const FrobeniusSystem<R>& sys, int max_crossings = 16);

// q of a chain given as (degree slot, generator index, coefficient) terms.
template <class R>
int q_of_chain(const FilteredComplex<R>& c,
               const std::vector<std::tuple<int, int, typename R::Elem>>& terms) {
  int q = 0;
  bool seen = false;
  int deg = 0;
  for (const auto& [k, idx, coeff] : terms) {
    if (c.ring.is_zero(coeff)) continue;
    if (!seen) {
      deg = k;
      q = c.gens[k][idx].q;
      seen = true;
    } else {
      if (k != deg) fail(ErrorCode::mixed_degree, "chain mixes homological degrees");
      q = std::min(q, c.gens[k][idx].q);
    }
  }
  if (!seen) fail(ErrorCode::zero_chain, "q is undefined for the zero chain");
  return q;
}

}  // namespace khlab::cube

#include "khlab/cube_impl.hpp"
