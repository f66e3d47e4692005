#pragma once

#include <optional>
#include <string>
#include <utility>

#include "khlab/rings.hpp"

namespace khlab::frobenius {

using exactalg::CoefficientRing;
using exactalg::RingKind;

// A theory (K, h, t) with h, t integers mapped into the ring; gamma is a
// square root of h^2 + 4t when that is a nonzero square in the ring.
struct TheoryTriple {
  CoefficientRing ring;
  long long h = 0, t = 0;
  std::optional<long long> gamma;

  static TheoryTriple make(const CoefficientRing& ring, long long h, long long t) {
    constexpr long long bound = 1'000'000;
    if (h < -bound || h > bound || t < -bound || t > bound)
      fail(ErrorCode::bad_ring, "|h|, |t| must be at most 10^6");
    TheoryTriple tr{ring, h, t, std::nullopt};
    const long long disc = h * h + 4 * t;
    if (ring.kind == RingKind::prime_field) {
      long long dm = ((disc % ring.p) + ring.p) % ring.p;
      if (dm != 0) {
        if (auto r = exactalg::sqrt_mod(dm, ring.p)) tr.gamma = std::min(*r, ring.p - *r);
      }
    } else if (disc != 0) {
      if (auto r = exactalg::perfect_sqrt(disc)) tr.gamma = *r;
    }
    return tr;
  }

  long long disc() const { return h * h + 4 * t; }
  std::string name() const { return ring.name() + ":" + std::to_string(h) + ":" + std::to_string(t); }
  bool operator==(const TheoryTriple&) const = default;
};

template <class R>
struct AlgebraElement {
  typename R::Elem c1{}, cx{};  // c1*1 + cx*x

  bool operator==(const AlgebraElement&) const = default;
};

template <class R>
struct TensorElement {
  typename R::Elem c11{}, c1x{}, cx1{}, cxx{};  // basis 1(x)1, 1(x)x, x(x)1, x(x)x

  bool operator==(const TensorElement&) const = default;
};

template <class R>
AlgebraElement<R> el(const R& ring, long long c1, long long cx) {
  return {ring.from_int(c1), ring.from_int(cx)};
}

template <class R>
AlgebraElement<R> el_add(const R& ring, const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  return {ring.add(a.c1, b.c1), ring.add(a.cx, b.cx)};
}

template <class R>
AlgebraElement<R> el_sub(const R& ring, const AlgebraElement<R>& a, const AlgebraElement<R>& b) {
  return {ring.sub(a.c1, b.c1), ring.sub(a.cx, b.cx)};
}

template <class R>
AlgebraElement<R> el_scale(const R& ring, const typename R::Elem& f, const AlgebraElement<R>& a) {
  return {ring.mul(f, a.c1), ring.mul(f, a.cx)};
}

template <class R>
bool el_is_zero(const R& ring, const AlgebraElement<R>& a) {
  return ring.is_zero(a.c1) && ring.is_zero(a.cx);
}

// The rank-two system K[x]/(x^2 - hx - t) with Example-2.1 coproduct and
// counit, optionally twisted by a unit theta: Delta'(a) = Delta(theta^{-1} a),
// eps'(a) = eps(theta a). Multiplication is unaffected by the twist.
template <class R>
class FrobeniusSystem {
 public:
  using Elem = typename R::Elem;

  FrobeniusSystem(const R& ring, Elem h, Elem t) : ring_(ring), h_(std::move(h)), t_(std::move(t)) {}

  FrobeniusSystem(const R& ring, Elem h, Elem t, const AlgebraElement<R>& theta)
      : FrobeniusSystem(ring, std::move(h), std::move(t)) {
    set_twist(theta);
  }

  static FrobeniusSystem from_triple(const R& ring, const TheoryTriple& tr) {
    return FrobeniusSystem(ring, ring.from_int(tr.h), ring.from_int(tr.t));
  }

  const R& ring() const { return ring_; }
  const Elem& h() const { return h_; }
  const Elem& t() const { return t_; }
  const std::optional<AlgebraElement<R>>& twist() const { return twist_; }

  // theta must be a unit of A: the 2x2 multiplication-by-theta matrix has
  // unit determinant th1^2 + h*th1*thx - t*thx^2.
  void set_twist(const AlgebraElement<R>& theta) {
    Elem det = ring_.add(ring_.mul(theta.c1, theta.c1),
                         ring_.sub(ring_.mul(h_, ring_.mul(theta.c1, theta.cx)),
                                   ring_.mul(t_, ring_.mul(theta.cx, theta.cx))));
    if (!ring_.is_unit(det)) fail(ErrorCode::twist_not_unit, "twist element is not a unit of A_{h,t}");
    Elem det_inv = ring_.inv(det);
    twist_ = theta;
    twist_inv_ = AlgebraElement<R>{ring_.mul(det_inv, ring_.add(theta.c1, ring_.mul(h_, theta.cx))),
                                   ring_.neg(ring_.mul(det_inv, theta.cx))};
  }

  AlgebraElement<R> multiply(const AlgebraElement<R>& a, const AlgebraElement<R>& b) const {
    Elem xx = ring_.mul(a.cx, b.cx);
    return {ring_.add(ring_.mul(a.c1, b.c1), ring_.mul(t_, xx)),
            ring_.add(ring_.add(ring_.mul(a.c1, b.cx), ring_.mul(a.cx, b.c1)), ring_.mul(h_, xx))};
  }

  TensorElement<R> comultiply(const AlgebraElement<R>& a) const {
    AlgebraElement<R> v = twist_inv_ ? multiply(*twist_inv_, a) : a;
    // Delta(1) = 1(x)x + x(x)1 - h 1(x)1,  Delta(x) = x(x)x + t 1(x)1
    return {ring_.add(ring_.mul(ring_.neg(h_), v.c1), ring_.mul(t_, v.cx)), v.c1, v.c1, v.cx};
  }

  Elem counit(const AlgebraElement<R>& a) const {
    AlgebraElement<R> v = twist_ ? multiply(*twist_, a) : a;
    return v.cx;  // eps(1) = 0, eps(x) = 1
  }

 private:
  R ring_;
  Elem h_, t_;
  std::optional<AlgebraElement<R>> twist_, twist_inv_;
};

// Product in A (x) A: (a (x) b) * (c (x) d) = ac (x) bd, extended bilinearly.
template <class R>
TensorElement<R> tensor_multiply(const FrobeniusSystem<R>& sys, const TensorElement<R>& s,
                                 const TensorElement<R>& t) {
  const R& rg = sys.ring();
  auto basis = [&](int i) {
    return i == 0 ? AlgebraElement<R>{rg.one(), rg.zero()} : AlgebraElement<R>{rg.zero(), rg.one()};
  };
  auto coeff = [&rg](const TensorElement<R>& v, int i, int j) {
    if (i == 0) return j == 0 ? v.c11 : v.c1x;
    return j == 0 ? v.cx1 : v.cxx;
  };
  TensorElement<R> out{rg.zero(), rg.zero(), rg.zero(), rg.zero()};
  auto acc = [&](int i, int j, const typename R::Elem& f) {
    if (rg.is_zero(f)) return;
    auto& slot = i == 0 ? (j == 0 ? out.c11 : out.c1x) : (j == 0 ? out.cx1 : out.cxx);
    slot = rg.add(slot, f);
  };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          typename R::Elem f = rg.mul(coeff(s, i, j), coeff(t, k, l));
          if (rg.is_zero(f)) continue;
          AlgebraElement<R> left = sys.multiply(basis(i), basis(k));
          AlgebraElement<R> right = sys.multiply(basis(j), basis(l));
          acc(0, 0, rg.mul(f, rg.mul(left.c1, right.c1)));
          acc(0, 1, rg.mul(f, rg.mul(left.c1, right.cx)));
          acc(1, 0, rg.mul(f, rg.mul(left.cx, right.c1)));
          acc(1, 1, rg.mul(f, rg.mul(left.cx, right.cx)));
        }
  return out;
}

// Diagonal basis alpha = x - (h-gamma)/2, beta = x - (h+gamma)/2 (Prop 2.2);
// in characteristic two alpha = x, beta = x + 1, which requires h = gamma = 1
// and x^2 = x. The defining products are always verified.
template <class R>
std::pair<AlgebraElement<R>, AlgebraElement<R>> diagonal_basis(const R& ring, const TheoryTriple& tr) {
  if (tr.ring != ring.descriptor()) fail(ErrorCode::ring_mismatch, "triple ring does not match");
  if (!tr.gamma) fail(ErrorCode::not_diagonalizable, "h^2 + 4t is not a nonzero square in " + tr.ring.name());
  const long long gamma = *tr.gamma;
  AlgebraElement<R> alpha, beta;
  if (ring.characteristic() == 2) {
    alpha = el(ring, 0, 1);      // x
    beta = el(ring, 1, 1);       // x + 1
  } else {
    // h and gamma have the same parity since gamma^2 = h^2 + 4t.
    if (tr.ring.kind == RingKind::integers && (tr.h - gamma) % 2 != 0)
      fail(ErrorCode::internal, "parity violation in diagonal basis");
    if (ring.characteristic() == 0) {
      alpha = {ring.from_int(-(tr.h - gamma) / 2), ring.one()};
      beta = {ring.from_int(-(tr.h + gamma) / 2), ring.one()};
    } else {
      typename R::Elem half = ring.inv(ring.from_int(2));
      alpha = {ring.mul(half, ring.from_int(gamma - tr.h)), ring.one()};
      beta = {ring.neg(ring.mul(half, ring.from_int(gamma + tr.h))), ring.one()};
    }
  }
  FrobeniusSystem<R> sys = FrobeniusSystem<R>::from_triple(ring, tr);
  typename R::Elem g = ring.from_int(gamma);
  bool ok = sys.multiply(alpha, alpha) == el_scale(ring, g, alpha) &&
            sys.multiply(beta, beta) == el_scale(ring, ring.neg(g), beta) &&
            el_is_zero(ring, sys.multiply(alpha, beta));
  if (!ok)
    fail(ErrorCode::not_diagonalizable,
         "multiplication does not diagonalize for " + tr.name() + " (characteristic-two t != 0 case)");
  return {alpha, beta};
}

// The Prop 2.1 basis change y -> a*x + b from A_src into A_dst twisted by
// theta = a^{-1}: a^2 = disc(src)/disc(dst), b = (h_src - a*h_dst)/2. The
// degenerate case disc = 0 on both sides is the same formula with a = 1.
template <class R>
struct BasisChangeMap {
  typename R::Elem a, b;
  AlgebraElement<R> theta;

  AlgebraElement<R> apply(const R& ring, const AlgebraElement<R>& v) const {
    return {ring.add(v.c1, ring.mul(v.cx, b)), ring.mul(v.cx, a)};
  }
};

template <class R>
BasisChangeMap<R> basis_change_map(const R& ring, const TheoryTriple& src, const TheoryTriple& dst) {
  if (src.ring != dst.ring || src.ring != ring.descriptor())
    fail(ErrorCode::ring_mismatch, "basis change requires matching rings");
  using Elem = typename R::Elem;
  const Elem ds = ring.from_int(src.disc()), dd = ring.from_int(dst.disc());
  const bool zs = ring.is_zero(ds), zd = ring.is_zero(dd);
  Elem a = ring.one(), b = ring.zero();
  if (zs && zd) {
    if (ring.characteristic() == 2) {
      b = ring.from_int(src.t - dst.t);  // b^2 = t_src - t_dst and squaring is identity in F_2
    } else if (ring.characteristic() == 0) {
      b = ring.from_int((src.h - dst.h) / 2);  // disc = 0 forces even h over Z and Q
    } else {
      b = ring.mul(ring.inv(ring.from_int(2)), ring.from_int(src.h - dst.h));
    }
  } else {
    if (zs || zd)
      fail(ErrorCode::no_square_ratio,
           "case (ii) requires nonzero h^2+4t on both sides (" + src.name() + " vs " + dst.name() + ")");
    if (ring.characteristic() == 2)
      fail(ErrorCode::char_two_unsupported, "Prop 2.1(ii) requires characteristic != 2");
    // solve a^2 = disc(src)/disc(dst) in the ring
    if constexpr (std::is_same_v<R, exactalg::PrimeField>) {
      Elem ratio = ring.mul(ds, ring.inv(dd));
      auto r = exactalg::sqrt_mod(ratio, ring.p);
      if (!r) fail(ErrorCode::no_square_ratio, "disc ratio is not a square mod " + std::to_string(ring.p));
      a = ring.from_int(std::min(*r, ring.p - *r));
      b = ring.mul(ring.inv(ring.from_int(2)), ring.sub(ring.from_int(src.h), ring.mul(a, ring.from_int(dst.h))));
    } else if constexpr (std::is_same_v<R, exactalg::RationalField>) {
      mpq_class ratio = mpq_class(static_cast<long>(src.disc())) / mpq_class(static_cast<long>(dst.disc()));
      ratio.canonicalize();
      if (sgn(ratio) < 0 || !mpz_perfect_square_p(ratio.get_num().get_mpz_t()) ||
          !mpz_perfect_square_p(ratio.get_den().get_mpz_t()))
        fail(ErrorCode::no_square_ratio, "disc ratio is not a rational square");
      mpz_class rn, rd;
      mpz_sqrt(rn.get_mpz_t(), ratio.get_num().get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), ratio.get_den().get_mpz_t());
      a = mpq_class(rn, rd);
      b = (mpq_class(static_cast<long>(src.h)) - a * static_cast<long>(dst.h)) / 2;
    } else {  // integers
      if (dst.disc() == 0 || src.disc() % dst.disc() != 0)
        fail(ErrorCode::no_square_ratio, "disc ratio is not an integer square");
      auto r = exactalg::perfect_sqrt(src.disc() / dst.disc());
      if (!r) fail(ErrorCode::no_square_ratio, "disc ratio is not an integer square");
      if ((src.h - *r * dst.h) % 2 != 0)
        fail(ErrorCode::no_square_ratio, "no integral basis change: b is not integral");
      a = ring.from_int(*r);
      b = ring.from_int((src.h - *r * dst.h) / 2);
    }
  }
  if (!ring.is_unit(a))
    fail(ErrorCode::no_square_ratio, "scaling factor a is not a unit of the ring");

  BasisChangeMap<R> map{a, b, AlgebraElement<R>{ring.inv(a), ring.zero()}};

  // The map must intertwine product, coproduct and counit with the twisted target.
  FrobeniusSystem<R> ssys = FrobeniusSystem<R>::from_triple(ring, src);
  FrobeniusSystem<R> dsys(ring, ring.from_int(dst.h), ring.from_int(dst.t), map.theta);
  AlgebraElement<R> one{ring.one(), ring.zero()}, x{ring.zero(), ring.one()};
  auto phi_tensor = [&](const TensorElement<R>& v) {
    TensorElement<R> out{ring.zero(), ring.zero(), ring.zero(), ring.zero()};
    auto add_into = [&](Elem& slot, const Elem& f) { slot = ring.add(slot, f); };
    auto acc = [&](const Elem& coeff, const AlgebraElement<R>& l, const AlgebraElement<R>& r) {
      if (ring.is_zero(coeff)) return;
      add_into(out.c11, ring.mul(coeff, ring.mul(l.c1, r.c1)));
      add_into(out.c1x, ring.mul(coeff, ring.mul(l.c1, r.cx)));
      add_into(out.cx1, ring.mul(coeff, ring.mul(l.cx, r.c1)));
      add_into(out.cxx, ring.mul(coeff, ring.mul(l.cx, r.cx)));
    };
    AlgebraElement<R> px = map.apply(ring, x);
    acc(v.c11, one, one);
    acc(v.c1x, one, px);
    acc(v.cx1, px, one);
    acc(v.cxx, px, px);
    return out;
  };
  for (const auto& z : {one, x}) {
    AlgebraElement<R> pz = map.apply(ring, z);
    if (!(dsys.counit(pz) == ssys.counit(z)))
      fail(ErrorCode::internal, "basis change does not intertwine the counit");
    if (!(dsys.comultiply(pz) == phi_tensor(ssys.comultiply(z))))
      fail(ErrorCode::internal, "basis change does not intertwine the coproduct");
  }
  AlgebraElement<R> px = map.apply(ring, x);
  if (!(dsys.multiply(px, px) == map.apply(ring, ssys.multiply(x, x))))
    fail(ErrorCode::internal, "basis change does not intertwine the product");
  return map;
}

}  // namespace khlab::frobenius
