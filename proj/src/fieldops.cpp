#include "mixtwist/fieldops.hpp"

#include <algorithm>
#include <set>

namespace mixtwist {

bool is_square(const Val& x, Val* witness) {
  const Field& F = *x.F;
  if (x.is_zero()) {
    if (witness) *witness = F.zero();
    return true;
  }
  if (auto ff = std::dynamic_pointer_cast<const FiniteField>(x.F)) {
    uint64_t q = ff->size();
    if (ff->characteristic() == 2) {
      // Frobenius is bijective; sqrt(x) = x^(q/2)
      Val w = F.pow(x, (long long)(q / 2));
      if (witness) *witness = w;
      return true;
    }
    if (!F.eq(F.pow(x, (long long)((q - 1) / 2)), F.one())) return false;
    if (witness) {
      for (uint64_t i = 0; i < q; ++i) {
        Val c = ff->element_at(i);
        if (F.eq(F.mul(c, c), x)) {
          *witness = c;
          return true;
        }
      }
      fail(errc::generic, "euler criterion passed but no root found");
    }
    return true;
  }
  if (auto fn = std::dynamic_pointer_cast<const FunctionField>(x.F)) {
    // f/g is a square iff f*g is a polynomial square; witness sqrt(fg)/g
    const Frac& fr = x.frac();
    PPoly prod = mul(fr.num, fr.den);
    PPoly root;
    if (!poly_sqrt(prod, root)) return false;
    if (witness) *witness = fn->make(root, fr.den);
    return true;
  }
  fail(errc::decision_failure, "square testing unsupported for " + F.describe());
}

ExtendResult extend_tits_p3(const BlendedField& b, const Val& delta) {
  const Field& k = *b.k;
  if (k.characteristic() != 3) fail(errc::wrong_characteristic, "p must be 3");
  if (delta.is_zero()) fail(errc::bad_argument, "delta must be nonzero");
  Val w;
  if (is_square(delta, &w)) return AlreadySquare{w};
  Val dtheta = b.theta(delta);

  auto build = [&](const Val& d) -> TitsExtension {
    // ell = k(sqrt(d), sqrt(d^theta)); theta extends by
    //   sqrt(d) -> sqrt(d^theta),  sqrt(d^theta) -> d*sqrt(d)
    Val dt = b.theta(d);
    auto tower = TowerField::make(
        b.k, {{TowerField::RelKind::sqrt, "r1", d}, {TowerField::RelKind::sqrt, "r2", dt}});
    Val r1 = tower->adjoined(0), r2 = tower->adjoined(1);
    auto base_theta = std::make_shared<FieldHom>(
        b.k, tower,
        [&] {
          std::vector<Val> imgs;
          for (int i = 0; i < b.k->num_generators(); ++i)
            imgs.push_back(tower->embed(b.theta(b.k->generator(i))));
          return imgs;
        }());
    FieldHom theta_ext(tower, tower, {r2, tower->mul(tower->embed(d), r1)}, base_theta);
    return TitsExtension{BlendedField{tower, theta_ext}, Val{}};
  };

  // different square classes <=> delta * delta^theta is not a square
  Val cls_witness;
  if (!is_square(k.mul(delta, dtheta), &cls_witness)) {
    TitsExtension ext = build(delta);
    ext.sqrt_delta = std::dynamic_pointer_cast<const TowerField>(ext.tower.k)->adjoined(0);
    return ext;
  }
  // same class: delta * delta^theta = x^2 forces delta = +- x^(theta-1)
  const Val& x = cls_witness;
  Val ratio = k.mul(delta, k.div(x, b.theta(x)));  // delta / x^(theta-1)
  if (k.eq(ratio, k.one())) {
    // delta = x^(theta-1); x and x^theta are in different classes here
    // (same class would make delta a square) and sqrt(x^theta)/sqrt(x)
    // squares to delta in the tower over x
    TitsExtension ext = build(x);
    auto tw = std::dynamic_pointer_cast<const TowerField>(ext.tower.k);
    ext.sqrt_delta = tw->div(tw->adjoined(1), tw->adjoined(0));
    return ext;
  }
  if (k.eq(ratio, k.neg(k.one()))) return NoTitsExtension{x};
  fail(errc::decision_failure, "square-class dichotomy failed");
}

NoSolutionReport no_solution_checks_p3(const BlendedField& b, uint64_t bound) {
  const Field& k = *b.k;
  if (k.characteristic() != 3) fail(errc::wrong_characteristic, "p must be 3");
  uint64_t q = k.size();
  if (!q || q > bound) fail(errc::bound_exceeded, "field too large for exhaustive check");
  NoSolutionReport rep;
  Val minus_one = k.neg(k.one());
  rep.theta_eq_ok = rep.power_eq_ok = true;
  for (uint64_t i = 0; i < q; ++i) {
    Val x = k.element_at(i);
    if (x.is_zero()) continue;
    ++rep.units_checked;
    if (k.eq(k.div(b.theta(x), x), minus_one)) rep.theta_eq_ok = false;
    if (k.eq(k.pow(x, k.characteristic() - 1), minus_one)) rep.power_eq_ok = false;
  }
  return rep;
}

Val wp(const Val& u) {
  if (u.F->characteristic() != 2) fail(errc::wrong_characteristic, "Artin-Schreier map needs p=2");
  return u.F->add(u.F->mul(u, u), u);
}

std::pair<Val, Val> wp_tilde(const Val& x, const Val& y, const MixedField& m) {
  if (m.K->characteristic() != 2) fail(errc::wrong_characteristic, "mixed Artin-Schreier needs p=2");
  if (!same_field(*x.F, *m.K) || !same_field(*y.F, *m.L))
    fail(errc::bad_argument, "wp_tilde arguments must lie in (K, L)");
  return {m.K->add(x, m.lambda(y)), m.L->add(m.kappa(x), y)};
}

Etale2Classes etale2_classify(const MixedField& m) {
  if (m.K->characteristic() != 2) fail(errc::wrong_characteristic, "etale classification needs p=2");
  uint64_t qk = m.K->size(), ql = m.L->size();
  if (!qk || !ql) fail(errc::undecidable, "class enumeration needs finite fields");
  auto kf = std::dynamic_pointer_cast<const FiniteField>(m.K);
  auto lf = std::dynamic_pointer_cast<const FiniteField>(m.L);
  if (!kf || !lf) fail(errc::undecidable, "class enumeration needs finite fields");

  auto key = [&](const Val& a, const Val& b) { return kf->index_of(a) * ql + lf->index_of(b); };
  // image of wp~ is an additive subgroup of K + L
  std::set<uint64_t> image;
  for (uint64_t i = 0; i < qk; ++i)
    for (uint64_t j = 0; j < ql; ++j) {
      auto [u, v] = wp_tilde(kf->element_at(i), lf->element_at(j), m);
      image.insert(key(u, v));
    }
  // cosets: every class contains a pair (u, 0) since u -> (u, 0) hits all
  // classes; take the smallest such u as the canonical representative
  Etale2Classes out;
  std::set<uint64_t> seen;
  uint64_t marked = 0;
  for (uint64_t i = 0; i < qk; ++i) {
    uint64_t me = key(kf->element_at(i), m.L->zero());
    if (seen.count(me)) continue;
    Val a = kf->element_at(i);
    for (uint64_t img : image) {
      Val iu = kf->element_at(img / ql), iv = lf->element_at(img % ql);
      if (seen.insert(key(m.K->add(a, iu), iv)).second) ++marked;
    }
    out.reps.push_back({a, m.L->zero()});
  }
  if (marked != qk * ql) fail(errc::invariant_failure, "cosets of (u,0) do not exhaust K+L");
  // coker(wp) on the K side
  std::set<uint64_t> wimage;
  for (uint64_t i = 0; i < qk; ++i) wimage.insert(kf->index_of(wp(kf->element_at(i))));
  std::set<uint64_t> wseen;
  for (uint64_t i = 0; i < qk; ++i) {
    if (wseen.count(i)) continue;
    Val a = kf->element_at(i);
    for (uint64_t img : wimage) wseen.insert(kf->index_of(m.K->add(a, kf->element_at(img))));
    out.ord_reps.push_back(a);
  }

  auto same_mixed_class = [&](std::pair<Val, Val> x, std::pair<Val, Val> y) {
    uint64_t diff = key(m.K->add(x.first, y.first), m.L->add(x.second, y.second));
    return image.count(diff) > 0;
  };
  auto same_ord_class = [&](const Val& x, const Val& y) {
    return wimage.count(kf->index_of(m.K->add(x, y))) > 0;
  };

  // the Corollary's maps: u -> (u,0) and (u,v) -> u + lambda(v)
  out.maps_mutually_inverse = true;
  for (auto& u : out.ord_reps) {
    std::pair<Val, Val> fwd{u, m.L->zero()};
    Val back = m.K->add(fwd.first, m.lambda(fwd.second));
    if (!same_ord_class(back, u)) out.maps_mutually_inverse = false;
  }
  for (auto& [u, v] : out.reps) {
    Val down = m.K->add(u, m.lambda(v));
    std::pair<Val, Val> up{down, m.L->zero()};
    if (!same_mixed_class(up, {u, v})) out.maps_mutually_inverse = false;
  }
  return out;
}

bool etale2_witness_identities(const MixedField& m, int samples, uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Val a = m.K->sample(rng);
    Val b = m.L->sample(rng);
    auto [u1, v1] = wp_tilde(a, m.kappa(a), m);
    if (!m.K->eq(u1, m.K->add(m.K->mul(a, a), a)) || !v1.is_zero()) return false;
    auto [u2, v2] = wp_tilde(m.K->zero(), b, m);
    if (!m.K->eq(u2, m.lambda(b)) || !m.L->eq(v2, b)) return false;
  }
  return true;
}

}  // namespace mixtwist
