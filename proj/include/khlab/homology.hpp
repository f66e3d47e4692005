#pragma once

#include <algorithm>
#include <string>

#include "khlab/cube.hpp"
#include "khlab/reduce.hpp"
#include "khlab/smith.hpp"

namespace khlab::homology {

using cube::FilteredComplex;
using exactalg::IntegerRing;
using frobenius::TheoryTriple;

struct DegreeData {
  int degree = 0;
  long long dim = 0;                               // field dimension or integral free rank
  std::vector<long long> torsion;                  // prime-power orders (integral only)
  std::vector<std::pair<int, long long>> profile;  // (q, dim im(H(F_q C) -> H(C))) at change points
};

struct HomologyResult {
  bool integral = false;
  TheoryTriple triple;
  std::vector<DegreeData> degrees;  // ascending degree, one entry per nonempty chain group

  long long total_dim() const {
    long long n = 0;
    for (const auto& d : degrees) n += d.dim;
    return n;
  }
  bool classes_only_in_even_degrees() const {
    for (const auto& d : degrees)
      if (d.dim != 0 && d.degree % 2 != 0) return false;
    return true;
  }
  const DegreeData* at_degree(int degree) const {
    for (const auto& d : degrees)
      if (d.degree == degree) return &d;
    return nullptr;
  }
};

namespace detail {

// Boundary out of slot k, or an empty matrix for the top slot.
template <class R>
exactalg::SparseMatrix<R> boundary_out(const FilteredComplex<R>& c, int k) {
  if (k < static_cast<int>(c.boundary.size())) return c.boundary[k];
  return exactalg::SparseMatrix<R>(0, static_cast<int>(c.gens[k].size()));
}

template <class R>
exactalg::SparseMatrix<R> boundary_in(const FilteredComplex<R>& c, int k) {
  if (k > 0) return c.boundary[k - 1];
  return exactalg::SparseMatrix<R>(static_cast<int>(c.gens[k].size()), 0);
}

}  // namespace detail

// Per-degree dimensions over a field: dim H^k = dim ker d_k - rank d_{k-1}.
template <class R>
HomologyResult homology_field(const FilteredComplex<R>& c) {
  if constexpr (!R::is_field) fail(ErrorCode::ring_not_field, "homology_field requires field coefficients");
  HomologyResult out;
  out.integral = false;
  out.triple = c.triple;
  std::vector<int> ranks(c.n_degree_slots() + 1, 0);
  for (std::size_t k = 0; k < c.boundary.size(); ++k) ranks[k + 1] = exactalg::rank(c.boundary[k], c.ring);
  for (int k = 0; k < c.n_degree_slots(); ++k) {
    const long long n = static_cast<long long>(c.gens[k].size());
    if (n == 0) continue;
    DegreeData d;
    d.degree = c.degree_of_slot(k);
    d.dim = n - ranks[k + 1] - ranks[k];
    out.degrees.push_back(std::move(d));
  }
  return out;
}

// Filtration profile of one degree slot: for each candidate level q (the
// distinct generator filtrations) the dimension of im(H(F_q C) -> H(C)),
// which equals rank[cycles in F_q; boundaries] - rank[boundaries]. Computed
// in one pass: echelonize ker d_k with pivots on the lowest-q coordinate,
// then feed the vectors into the boundary echelon in descending pivot-q
// order, counting the dimension growth per level.
template <class R>
std::vector<std::pair<int, long long>> profile_of_slot(const FilteredComplex<R>& c, int k) {
  if constexpr (!R::is_field) fail(ErrorCode::ring_not_field, "filtration profiles require field coefficients");
  using Elem = typename R::Elem;
  const R& ring = c.ring;
  const int n = static_cast<int>(c.gens[k].size());
  std::vector<std::pair<int, long long>> profile;
  if (n == 0) return profile;

  auto kernel = exactalg::kernel_basis(detail::boundary_out(c, k), ring);

  // coordinate order: ascending q, then index; a vector's pivot is its
  // lowest-q support coordinate
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return c.gens[k][a].q < c.gens[k][b].q; });
  std::vector<int> rho(n);
  for (int i = 0; i < n; ++i) rho[order[i]] = i;

  auto min_rho_coord = [&](const exactalg::SparseVec<R>& v) {
    int best = -1;
    for (const auto& [g, coeff] : v) {
      (void)coeff;
      if (best < 0 || rho[g] < rho[best]) best = g;
    }
    return best;
  };

  std::map<int, int> pivot_of_rho;  // rho(pivot coordinate) -> index into echelon
  std::vector<exactalg::SparseVec<R>> echelon;
  std::vector<int> pivot_q;
  for (auto& vec : kernel) {
    exactalg::SparseVec<R> v = std::move(vec);
    while (!v.empty()) {
      int g = min_rho_coord(v);
      auto it = pivot_of_rho.find(rho[g]);
      if (it == pivot_of_rho.end()) {
        pivot_of_rho.emplace(rho[g], static_cast<int>(echelon.size()));
        pivot_q.push_back(c.gens[k][g].q);
        echelon.push_back(std::move(v));
        v.clear();
        break;
      }
      const auto& piv = echelon[it->second];
      Elem f = ring.neg(ring.mul(v.at(g), ring.inv(piv.at(g))));
      exactalg::vec_addmul(ring, v, f, piv);
    }
  }

  // echelon basis of the boundary space, lows = largest row index
  auto bred = exactalg::column_reduce(detail::boundary_in(c, k), ring, false);
  std::map<int, int> low_to_b;
  std::vector<exactalg::SparseVec<R>> bspace = std::move(bred.image_basis);
  for (int i = 0; i < static_cast<int>(bspace.size()); ++i) low_to_b.emplace(bspace[i].rbegin()->first, i);

  std::vector<int> by_level(echelon.size());
  std::iota(by_level.begin(), by_level.end(), 0);
  std::stable_sort(by_level.begin(), by_level.end(), [&](int a, int b) { return pivot_q[a] > pivot_q[b]; });

  std::set<int> levels;
  for (const auto& g : c.gens[k]) levels.insert(g.q);

  std::map<int, long long> growth_at_level;
  for (int idx : by_level) {
    exactalg::SparseVec<R> v = echelon[idx];
    while (!v.empty()) {
      int low = v.rbegin()->first;
      auto it = low_to_b.find(low);
      if (it == low_to_b.end()) break;
      Elem f = ring.neg(ring.mul(v.rbegin()->second, ring.inv(bspace[it->second].rbegin()->second)));
      exactalg::vec_addmul(ring, v, f, bspace[it->second]);
    }
    if (v.empty()) continue;  // the class is a boundary
    low_to_b.emplace(v.rbegin()->first, static_cast<int>(bspace.size()));
    bspace.push_back(std::move(v));
    growth_at_level[pivot_q[idx]] += 1;
  }

  // accumulate: value(level) = total growth contributed at levels >= level
  long long acc = 0;
  std::vector<std::pair<int, long long>> values;  // descending levels
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    auto g = growth_at_level.find(*it);
    if (g != growth_at_level.end()) acc += g->second;
    values.emplace_back(*it, acc);
  }
  std::reverse(values.begin(), values.end());  // ascending q
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].second == 0) continue;
    if (i + 1 == values.size() || values[i].second != values[i + 1].second) profile.push_back(values[i]);
  }
  return profile;
}

struct FiltrationProfile {
  std::map<int, std::vector<std::pair<int, long long>>> by_degree;
};

template <class R>
FiltrationProfile filtration_profile(const FilteredComplex<R>& c) {
  FiltrationProfile out;
  for (int k = 0; k < c.n_degree_slots(); ++k) {
    if (c.gens[k].empty()) continue;
    auto p = profile_of_slot(c, k);
    if (!p.empty()) out.by_degree.emplace(c.degree_of_slot(k), std::move(p));
  }
  return out;
}

// Free rank and torsion per degree from Smith forms of consecutive boundaries.
inline HomologyResult homology_integral(const FilteredComplex<IntegerRing>& c) {
  HomologyResult out;
  out.integral = true;
  out.triple = c.triple;
  std::vector<exactalg::SmithForm> forms;
  forms.reserve(c.boundary.size());
  for (const auto& m : c.boundary) forms.push_back(exactalg::smith_normal_form(m));
  for (int k = 0; k < c.n_degree_slots(); ++k) {
    const long long n = static_cast<long long>(c.gens[k].size());
    if (n == 0) continue;
    DegreeData d;
    d.degree = c.degree_of_slot(k);
    const int rank_out = k < static_cast<int>(forms.size()) ? forms[k].rank() : 0;
    const int rank_in = k > 0 ? forms[k - 1].rank() : 0;
    d.dim = n - rank_out - rank_in;
    if (k > 0)
      for (const auto& dj : forms[k - 1].diagonal)
        for (const auto& pw : exactalg::prime_power_factors(dj)) d.torsion.push_back(pw.get_si());
    std::sort(d.torsion.begin(), d.torsion.end());
    out.degrees.push_back(std::move(d));
  }
  return out;
}

struct ComputeOptions {
  bool reduce = true;
  int max_crossings = 16;
  bool debug_check = false;
};

template <class R>
FilteredComplex<R> build_for_triple(const linkio::LinkDiagram& d, const TheoryTriple& tr, const R& ring,
                                    const ComputeOptions& opt) {
  auto sys = frobenius::FrobeniusSystem<R>::from_triple(ring, tr);
  auto cpx = cube::build_complex(d, tr, sys, opt.max_crossings);
  if (!opt.reduce) return cpx;
  return reduce::reduce_complex(cpx, opt.debug_check).first;
}

// Coefficient change Z -> Q or Z -> F_p of a complex (entrywise).
template <class Rdst>
FilteredComplex<Rdst> change_coefficients(const FilteredComplex<IntegerRing>& c, const Rdst& ring) {
  FilteredComplex<Rdst> out;
  out.ring = ring;
  out.triple = TheoryTriple::make(ring.descriptor(), c.triple.h, c.triple.t);
  out.n_crossings = c.n_crossings;
  out.c_plus = c.c_plus;
  out.c_minus = c.c_minus;
  out.n_components = c.n_components;
  out.reduced = c.reduced;
  out.gens = c.gens;
  out.vertex_base = c.vertex_base;
  for (const auto& m : c.boundary) {
    exactalg::SparseMatrix<Rdst> t(m.n_rows(), m.n_cols());
    for (int r = 0; r < m.n_rows(); ++r)
      for (const auto& [col, v] : m.row(r)) {
        if constexpr (std::is_same_v<Rdst, exactalg::RationalField>) {
          t.set(ring, r, col, mpq_class(v));
        } else {
          mpz_class rem;
          mpz_class p(static_cast<long>(ring.characteristic()));
          mpz_fdiv_r(rem.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
          t.set(ring, r, col, ring.from_int(rem.get_si()));
        }
      }
    out.boundary.push_back(std::move(t));
  }
  return out;
}

namespace detail {

inline void merge_profiles(HomologyResult& res, const FiltrationProfile& prof) {
  for (auto& d : res.degrees) {
    auto it = prof.by_degree.find(d.degree);
    if (it != prof.by_degree.end()) d.profile = it->second;
  }
}

}  // namespace detail

// Homology of a diagram under a triple, with filtration profiles attached.
// Integral theories report free rank and torsion; their profile is the one
// of the integral complex tensored with Q (the paper's torsion-free
// convention, with cycle representatives content-normalized by the scaling
// argument of Prop 3.2).
inline HomologyResult compute_homology(const linkio::LinkDiagram& d, const TheoryTriple& tr,
                                       const ComputeOptions& opt = {}) {
  if (tr.ring.kind == exactalg::RingKind::integers) {
    IntegerRing zr;
    auto cz = build_for_triple(d, tr, zr, opt);
    HomologyResult res = homology_integral(cz);
    exactalg::RationalField qr;
    auto cq = change_coefficients(cz, qr);
    detail::merge_profiles(res, filtration_profile(cq));
    return res;
  }
  return exactalg::with_ring(tr.ring, [&](auto ring) -> HomologyResult {
    using R = decltype(ring);
    if constexpr (R::is_field) {
      auto cpx = build_for_triple(d, tr, ring, opt);
      HomologyResult res = homology_field(cpx);
      detail::merge_profiles(res, filtration_profile(cpx));
      return res;
    } else {
      fail(ErrorCode::internal, "unreachable");
    }
  });
}

// Universal-coefficient comparison (Prop 2.3(ii) / Prop 3.2): over F_p the
// dimensions must equal the integral free ranks, the integral theory must be
// p-torsion free, and the F_p profile must agree with the profile of the
// integral complex tensored with F_p.
struct UctReport {
  long long h = 0, t = 0, p = 0;
  bool pass = false;
  bool dims_match = true, no_p_torsion = true, profiles_match = true;
  std::vector<std::tuple<int, long long, long long>> dims;  // degree, dim over F_p, free rank over Z
  std::string hypothesis_note;
};

inline UctReport compare_uct(const linkio::LinkDiagram& d, long long h, long long t, long long p,
                             const ComputeOptions& opt = {}) {
  auto tz = TheoryTriple::make(exactalg::CoefficientRing::integers(), h, t);
  if (!tz.gamma)
    fail(ErrorCode::hypothesis_violated, "h^2 + 4t = " + std::to_string(h * h + 4 * t) +
                                             " is not a nonzero square in Z");
  exactalg::PrimeField fp{exactalg::CoefficientRing::prime_field(p).p};
  if (*tz.gamma % p == 0)
    fail(ErrorCode::gamma_vanishes_mod_p,
         "gamma = " + std::to_string(*tz.gamma) + " vanishes mod " + std::to_string(p));

  UctReport rep;
  rep.h = h;
  rep.t = t;
  rep.p = p;
  rep.hypothesis_note =
      std::string("Prop 2.3(ii) reads 'h, t < p'; representative reading 0 <= h, t < p ") +
      ((0 <= h && h < p && 0 <= t && t < p) ? "holds" : "does not hold") +
      "; plain inequality reading h, t < p " + ((h < p && t < p) ? "holds" : "does not hold") +
      "; the check itself only requires gamma != 0 mod p.";

  IntegerRing zr;
  auto cz = build_for_triple(d, tz, zr, opt);
  HomologyResult hz = homology_integral(cz);

  auto tp = TheoryTriple::make(fp.descriptor(), h, t);
  auto cp = build_for_triple(d, tp, fp, opt);
  HomologyResult hp = homology_field(cp);

  std::map<int, long long> dim_p, free_z;
  for (const auto& e : hp.degrees) dim_p[e.degree] = e.dim;
  for (const auto& e : hz.degrees) {
    free_z[e.degree] = e.dim;
    for (long long order : e.torsion)
      if (order % p == 0) rep.no_p_torsion = false;
  }
  std::set<int> degrees;
  for (const auto& [k, v] : dim_p) degrees.insert(k);
  for (const auto& [k, v] : free_z) degrees.insert(k);
  for (int k : degrees) {
    long long a = dim_p.count(k) ? dim_p[k] : 0;
    long long b = free_z.count(k) ? free_z[k] : 0;
    rep.dims.emplace_back(k, a, b);
    if (a != b) rep.dims_match = false;
  }

  auto ct = change_coefficients(cz, fp);
  rep.profiles_match = filtration_profile(cp).by_degree == filtration_profile(ct).by_degree;
  rep.pass = rep.dims_match && rep.no_p_torsion && rep.profiles_match;
  return rep;
}

}  // namespace khlab::homology
