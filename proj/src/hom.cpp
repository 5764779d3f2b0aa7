#include "mixtwist/hom.hpp"

#include <algorithm>
#include <sstream>

namespace mixtwist {

FieldHom::FieldHom(FieldPtr dom, FieldPtr cod, std::vector<Val> images,
                   std::shared_ptr<const FieldHom> base_hom)
    : dom_(std::move(dom)), cod_(std::move(cod)), images_(std::move(images)),
      base_hom_(std::move(base_hom)) {
  auto tw = std::dynamic_pointer_cast<const TowerField>(dom_);
  int expect = tw ? (int)tw->rels().size() : dom_->num_generators();
  if ((int)images_.size() != expect) fail(errc::bad_argument, "generator image count");
  for (auto& v : images_)
    if (!same_field(*v.F, *cod_)) fail(errc::bad_argument, "image not in codomain");
  if (tw && !base_hom_) fail(errc::bad_argument, "tower hom needs a base hom");
}

// the embedding of a (non-tower) base field into its tower
static std::shared_ptr<const FieldHom> tower_embedding(const TowerFieldPtr& tw) {
  const FieldPtr& B = tw->base();
  if (std::dynamic_pointer_cast<const TowerField>(B))
    fail(errc::bad_argument, "nested tower homs are not supported");
  std::vector<Val> imgs;
  for (int i = 0; i < B->num_generators(); ++i) imgs.push_back(tw->embed(B->generator(i)));
  return std::make_shared<FieldHom>(B, tw, imgs);
}

FieldHom FieldHom::identity(const FieldPtr& f) {
  if (auto tw = std::dynamic_pointer_cast<const TowerField>(f)) {
    std::vector<Val> imgs;
    for (size_t i = 0; i < tw->rels().size(); ++i) imgs.push_back(tw->adjoined((int)i));
    return FieldHom(f, f, imgs, tower_embedding(tw));
  }
  std::vector<Val> imgs;
  for (int i = 0; i < f->num_generators(); ++i) imgs.push_back(f->generator(i));
  return FieldHom(f, f, imgs);
}

FieldHom FieldHom::frobenius(const FieldPtr& f) {
  int p = f->characteristic();
  if (auto tw = std::dynamic_pointer_cast<const TowerField>(f)) {
    std::vector<Val> imgs;
    for (size_t i = 0; i < tw->rels().size(); ++i) imgs.push_back(f->pow(tw->adjoined((int)i), p));
    const FieldPtr& B = tw->base();
    std::vector<Val> bimgs;
    for (int i = 0; i < B->num_generators(); ++i)
      bimgs.push_back(tw->embed(B->pow(B->generator(i), p)));
    auto bh = std::make_shared<FieldHom>(B, f, bimgs);
    return FieldHom(f, f, imgs, bh);
  }
  std::vector<Val> imgs;
  for (int i = 0; i < f->num_generators(); ++i) imgs.push_back(f->pow(f->generator(i), p));
  return FieldHom(f, f, imgs);
}

FieldHom FieldHom::frobenius_power(const FiniteFieldPtr& f, int m) {
  long long e = (long long)ipow((uint64_t)f->characteristic(), (unsigned)m);
  return FieldHom(f, f, {f->pow(f->generator(0), e)});
}

Val FieldHom::apply(const Val& x) const {
  if (!same_field(*x.F, *dom_)) fail(errc::bad_argument, "hom applied outside its domain");
  if (auto ff = std::dynamic_pointer_cast<const FiniteField>(dom_)) {
    Val r = cod_->zero();
    const auto& c = x.fq();
    for (int i = ff->degree() - 1; i >= 0; --i)
      r = cod_->add(cod_->mul(r, images_[0]), cod_->from_int(c[i]));
    return r;
  }
  if (auto fn = std::dynamic_pointer_cast<const FunctionField>(dom_)) {
    const Frac& fr = x.frac();
    auto evalp = [&](const PPoly& f) {
      Val r = cod_->zero();
      for (auto& tm : f.t) {
        Val term = cod_->from_int(tm.c);
        for (int v = 0; v < fn->ring()->nvars(); ++v) {
          unsigned e = mono_get(*fn->ring(), tm.mono, v);
          if (e) term = cod_->mul(term, cod_->pow(images_[v], e));
        }
        r = cod_->add(r, term);
      }
      return r;
    };
    Val den = evalp(fr.den);
    if (den.is_zero()) fail(errc::bad_argument, "hom image has vanishing denominator");
    return cod_->div(evalp(fr.num), den);
  }
  if (auto tw = std::dynamic_pointer_cast<const TowerField>(dom_)) {
    Val r = cod_->zero();
    for (int m = 0; m < tw->dim(); ++m) {
      const Val& c = tw->coord(x, m);
      if (c.is_zero()) continue;
      Val term = base_hom_->apply(c);
      for (size_t i = 0; i < tw->rels().size(); ++i)
        if (m & (1 << i)) term = cod_->mul(term, images_[i]);
      r = cod_->add(r, term);
    }
    return r;
  }
  fail(errc::bad_argument, "unsupported homomorphism domain");
}

FieldHom FieldHom::then(const FieldHom& g) const {
  std::vector<Val> imgs;
  for (auto& v : images_) imgs.push_back(g.apply(v));
  std::shared_ptr<const FieldHom> bh;
  if (base_hom_) bh = std::make_shared<FieldHom>(base_hom_->then(g));
  return FieldHom(dom_, g.cod(), imgs, bh);
}

bool FieldHom::eq_on_generators(const FieldHom& o) const {
  if (images_.size() != o.images_.size()) return false;
  for (size_t i = 0; i < images_.size(); ++i)
    if (!cod_->eq(images_[i], o.images_[i])) return false;
  if (base_hom_ && o.base_hom_) return base_hom_->eq_on_generators(*o.base_hom_);
  return !base_hom_ == !o.base_hom_;
}

std::string FieldHom::str() const {
  std::string s;
  auto tw = std::dynamic_pointer_cast<const TowerField>(dom_);
  for (size_t i = 0; i < images_.size(); ++i) {
    if (i) s += ",";
    std::string name = tw ? tw->rels()[i].name : dom_->generator_name((int)i);
    s += name + "->" + cod_->str(images_[i]);
  }
  return s;
}

FieldHom FieldHom::parse(const FieldPtr& dom, const FieldPtr& cod, const std::string& text) {
  std::vector<Val> imgs(dom->num_generators(), cod->zero());
  std::vector<bool> seen(dom->num_generators(), false);
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    auto arrow = item.find("->");
    if (arrow == std::string::npos) fail(errc::parse_error, "expected gen->expr");
    std::string name = item.substr(0, arrow), expr = item.substr(arrow + 2);
    int idx = -1;
    for (int i = 0; i < dom->num_generators(); ++i)
      if (dom->generator_name(i) == name) idx = i;
    if (idx < 0) fail(errc::parse_error, "unknown generator '" + name + "'");
    imgs[idx] = cod->parse(expr);
    seen[idx] = true;
  }
  for (int i = 0; i < dom->num_generators(); ++i)
    if (!seen[i]) fail(errc::parse_error, "missing image for " + dom->generator_name(i));
  return FieldHom(dom, cod, imgs);
}

// ---- blended ----------------------------------------------------------------

bool validate_blended(const BlendedField& b, int samples, uint64_t seed) {
  const Field& k = *b.k;
  int p = k.characteristic();
  if (k.size() && k.size() <= (1ull << 12)) {
    for (uint64_t i = 0; i < k.size(); ++i) {
      Val x = k.element_at(i);
      if (!k.eq(b.theta(b.theta(x)), k.pow(x, p))) return false;
    }
    return true;
  }
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    Val x = k.sample(rng);
    if (!k.eq(b.theta(b.theta(x)), k.pow(x, p))) return false;
  }
  return true;
}

BlendedField tits_endomorphism(const FiniteFieldPtr& F) {
  int n = F->degree();
  if (n % 2 == 0)
    fail(errc::no_tits_endomorphism,
         "no Tits endomorphism (even degree " + std::to_string(n) + ")");
  FieldHom theta = FieldHom::frobenius_power(F, (n + 1) / 2);
  BlendedField b{F, theta};
  if (!validate_blended(b)) fail(errc::invariant_failure, "theta^2 != Frobenius");
  return b;
}

BlendedField blended_function_field(int p, int m) {
  if (m < 1) fail(errc::bad_argument, "m must be positive");
  std::vector<std::string> names;
  if (m == 1) {
    names = {"s", "t"};
  } else {
    for (int i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= m; ++i) names.push_back("y" + std::to_string(i));
  }
  auto F = FunctionField::make(p, names);
  std::vector<Val> imgs(2 * m, F->zero());
  for (int i = 0; i < m; ++i) {
    imgs[i] = F->generator(m + i);             // x_i -> y_i
    imgs[m + i] = F->pow(F->generator(i), p);  // y_i -> x_i^p
  }
  return BlendedField{F, FieldHom(F, F, imgs)};
}

// ---- mixed -------------------------------------------------------------------

MixedField make_mixed_field(FieldPtr K, FieldPtr L, FieldHom kappa, FieldHom lambda,
                            std::vector<int> subfield_derivations) {
  if (!same_field(*kappa.dom(), *K) || !same_field(*kappa.cod(), *L))
    fail(errc::bad_argument, "kappa must map K to L");
  if (!same_field(*lambda.dom(), *L) || !same_field(*lambda.cod(), *K))
    fail(errc::bad_argument, "lambda must map L to K");
  int p = K->characteristic();
  for (int i = 0; i < K->num_generators(); ++i) {
    Val g = K->generator(i);
    if (!K->eq(lambda(kappa(g)), K->pow(g, p)))
      fail(errc::composition_mismatch,
           "lambda(kappa(" + K->generator_name(i) + ")) != " + K->generator_name(i) + "^p");
  }
  for (int i = 0; i < L->num_generators(); ++i) {
    Val g = L->generator(i);
    if (!L->eq(kappa(lambda(g)), L->pow(g, p)))
      fail(errc::composition_mismatch,
           "kappa(lambda(" + L->generator_name(i) + ")) != " + L->generator_name(i) + "^p");
  }
  return MixedField{std::move(K), std::move(L), std::move(kappa), std::move(lambda),
                    std::move(subfield_derivations)};
}

MixedField visible_mixed_field(const FieldPtr& F) {
  return make_mixed_field(F, F, FieldHom::frobenius(F), FieldHom::identity(F));
}

MixedField plane_mixed_field() {
  auto K = FunctionField::make(2, {"a", "b"});
  auto L = FunctionField::make(2, {"s", "t"});
  Val s = L->generator(0), t = L->generator(1);
  Val a = K->generator(0), b = K->generator(1);
  FieldHom kappa(K, L, {L->mul(s, s), t});
  FieldHom lambda(L, K, {a, K->mul(b, b)});
  return make_mixed_field(K, L, kappa, lambda, {0});
}

bool MixedField::visible() const {
  if (K->size()) return true;  // cross-homs of finite fields of equal size are onto
  return lambda.eq_on_generators(FieldHom::identity(L));
}

bool MixedField::anti_visible() const {
  if (L->size()) return true;
  return kappa.eq_on_generators(FieldHom::identity(K));
}

bool in_subimage(const Val& x, const MixedField& m) {
  if (!same_field(*x.F, *m.L)) fail(errc::bad_argument, "element not in L");
  if (m.L->size()) {
    uint64_t n = m.K->size();
    if (!n) fail(errc::unsupported_subfield, "finite L over infinite K");
    for (uint64_t i = 0; i < n; ++i)
      if (m.L->eq(m.kappa(m.K->element_at(i)), x)) return true;
    return false;
  }
  auto fn = std::dynamic_pointer_cast<const FunctionField>(m.L);
  if (!fn || m.subfield_derivations.empty())
    fail(errc::unsupported_subfield, "no derivation description for the subfield");
  for (int v : m.subfield_derivations)
    if (!fn->derivative(x, v).is_zero()) return false;
  return true;
}

Val kappa_preimage(const Val& x, const MixedField& m) {
  if (m.L->size()) {
    uint64_t n = m.K->size();
    for (uint64_t i = 0; i < n; ++i) {
      Val c = m.K->element_at(i);
      if (m.L->eq(m.kappa(c), x)) return c;
    }
    fail(errc::bad_argument, "element not in the subfield");
  }
  auto fnL = std::dynamic_pointer_cast<const FunctionField>(m.L);
  auto fnK = std::dynamic_pointer_cast<const FunctionField>(m.K);
  if (!fnL || !fnK) fail(errc::unsupported_subfield, "preimage needs function fields");
  // kappa must send each K-variable to a power of a distinct L-variable;
  // preimages are then exponent arithmetic
  int nk = fnK->ring()->nvars();
  std::vector<int> var_of(nk, -1);
  std::vector<unsigned> pow_of(nk, 0);
  for (int i = 0; i < nk; ++i) {
    const Frac& im = m.kappa.images()[i].frac();
    if (!(im.den.is_constant() && im.den.constant_value() == 1 && im.num.t.size() == 1 &&
          im.num.t[0].c == 1))
      fail(errc::unsupported_subfield, "kappa image not monomial");
    uint64_t mono = im.num.t[0].mono;
    for (int v = 0; v < fnL->ring()->nvars(); ++v) {
      unsigned e = mono_get(*fnL->ring(), mono, v);
      if (e) {
        if (var_of[i] >= 0) fail(errc::unsupported_subfield, "kappa image not a single variable");
        var_of[i] = v;
        pow_of[i] = e;
      }
    }
  }
  // clear the denominator: x = num*den^(p-1) / den^p, and den^p is in the
  // subfield automatically
  const Frac& fr = x.frac();
  int p = m.L->characteristic();
  PPoly num = fr.num;
  for (int i = 1; i < p; ++i) num = mul(num, fr.den);
  PPoly den = pow(fr.den, (unsigned)p);
  auto pull = [&](const PPoly& f) {
    PPoly r(fnK->ring());
    for (auto& tm : f.t) {
      uint64_t mono = 0;
      unsigned covered = 0;
      for (int i = 0; i < nk; ++i) {
        unsigned e = mono_get(*fnL->ring(), tm.mono, var_of[i]);
        if (e % pow_of[i]) fail(errc::bad_argument, "element not in the subfield");
        covered += e;
        mono = mono_set(*fnK->ring(), mono, i, e / pow_of[i]);
      }
      if (covered != mono_total(*fnL->ring(), tm.mono))
        fail(errc::bad_argument, "element not in the subfield");
      r.t.push_back({mono, tm.c});
    }
    const PolyRing* R = fnK->ring().get();
    std::sort(r.t.begin(), r.t.end(),
              [R](const Term& a, const Term& b) { return mono_cmp_grevlex(*R, a.mono, b.mono) > 0; });
    return r;
  };
  Val y = fnK->make(pull(num), pull(den));
  if (!m.L->eq(m.kappa(y), x)) fail(errc::bad_argument, "element not in the subfield");
  return y;
}

}  // namespace mixtwist
