#include <doctest.h>

#include "helpers.hpp"
#include "khlab/homology.hpp"

using namespace khlab;
using exactalg::CoefficientRing;
using exactalg::IntegerRing;
using exactalg::PrimeField;
using exactalg::RationalField;
using frobenius::TheoryTriple;

namespace {

template <class R>
cube::FilteredComplex<R> build(const linkio::LinkDiagram& d, const R& ring, long long h, long long t) {
  auto tr = TheoryTriple::make(ring.descriptor(), h, t);
  auto sys = frobenius::FrobeniusSystem<R>::from_triple(ring, tr);
  return cube::build_complex(d, tr, sys);
}

std::map<int, long long> dims_of(const homology::HomologyResult& r) {
  std::map<int, long long> m;
  for (const auto& d : r.degrees)
    if (d.dim != 0) m[d.degree] = d.dim;
  return m;
}

}  // namespace

TEST_CASE("reduce: unknot complex is untouched") {
  RationalField q;
  auto c = build(testing::unknot(), q, 0, 1);
  auto [r, trace] = reduce::reduce_complex(c);
  CHECK(trace.eliminations.empty());
  CHECK(trace.size_before == 2);
  CHECK(trace.size_after == 2);
  CHECK(r.total_generators() == 2);
}

TEST_CASE("reduce: R2 unknot diagram collapses to two degree-0 generators") {
  RationalField q;
  auto c = build(testing::r2_unknot(), q, 0, 1);
  auto [r, trace] = reduce::reduce_complex(c, true);  // debug mode: d^2 checked per step
  CHECK(r.total_generators() == 2);
  REQUIRE(r.gens[r.c_minus].size() == 2);
  std::multiset<int> qs{r.gens[r.c_minus][0].q, r.gens[r.c_minus][1].q};
  CHECK(qs == std::multiset<int>{-1, 1});
  CHECK(trace.size_before - 2 * static_cast<long long>(trace.eliminations.size()) == trace.size_after);
}

TEST_CASE("reduce: trefoil Bar-Natan homology has total dimension 2") {
  PrimeField f2{2};
  auto c = build(testing::trefoil(), f2, 1, 0);
  auto [r, trace] = reduce::reduce_complex(c);
  auto h = homology::homology_field(r);
  CHECK(h.total_dim() == 2);
}

TEST_CASE("reduce: eliminated pairs are unit entries with equal q") {
  RationalField q;
  auto c = build(testing::figure_eight(), q, 0, 1);
  auto [r, trace] = reduce::reduce_complex(c);
  CHECK(trace.size_after < trace.size_before);
  for (const auto& e : trace.eliminations) CHECK(e.source.q == e.target.q);
}

TEST_CASE("reduce preserves homology dimensions and filtration profiles") {
  RationalField q;
  PrimeField f2{2}, f5{5};
  auto panel = [&](const linkio::LinkDiagram& d, auto ring, long long h, long long t) {
    auto c = build(d, ring, h, t);
    auto [r, trace] = reduce::reduce_complex(c);
    CHECK(dims_of(homology::homology_field(c)) == dims_of(homology::homology_field(r)));
    // the critical contract: identical profiles at every degree and level
    CHECK(homology::filtration_profile(c).by_degree == homology::filtration_profile(r).by_degree);
  };
  std::vector<linkio::LinkDiagram> diagrams = {testing::trefoil(), testing::figure_eight(), testing::hopf(),
                                               testing::atlas_trefoil(), testing::r2_unknot()};
  for (auto& [name, d] : testing::random_braid_closures(8, 7, 41)) diagrams.push_back(d);
  for (const auto& d : diagrams) {
    panel(d, q, 0, 1);
    panel(d, q, 0, 0);
    panel(d, f2, 1, 0);
    panel(d, f5, 0, 1);
  }
}

TEST_CASE("reduce over Z only uses +-1 pivots and preserves integral homology") {
  IntegerRing z;
  auto check = [&](const linkio::LinkDiagram& d, long long h, long long t) {
    auto c = build(d, z, h, t);
    auto [r, trace] = reduce::reduce_complex(c);
    auto hu = homology::homology_integral(c);
    auto hr = homology::homology_integral(r);
    CHECK(dims_of(hu) == dims_of(hr));
    auto torsion = [](const homology::HomologyResult& res) {
      std::map<int, std::vector<long long>> m;
      for (const auto& deg : res.degrees)
        if (!deg.torsion.empty()) m[deg.degree] = deg.torsion;
      return m;
    };
    CHECK(torsion(hu) == torsion(hr));
  };
  check(testing::trefoil(), 0, 0);  // keeps its Z/2
  check(testing::trefoil(), 1, 0);
  check(testing::figure_eight(), 0, 1);
  check(testing::hopf(), 0, 0);
}
