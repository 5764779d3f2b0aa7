#include "mixtwist/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mixtwist {

int TermOrd::cmp(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const {
  auto grev = [](const unsigned* x, const unsigned* y, int n) {
    unsigned dx = 0, dy = 0;
    for (int i = 0; i < n; ++i) dx += x[i], dy += y[i];
    if (dx != dy) return dx < dy ? -1 : 1;
    for (int i = n - 1; i >= 0; --i)
      if (x[i] != y[i]) return x[i] > y[i] ? -1 : 1;
    return 0;
  };
  int n = (int)a.size();
  if (kind == Kind::grevlex) return grev(a.data(), b.data(), n);
  int c = grev(a.data(), b.data(), block);
  if (c) return c;
  return grev(a.data() + block, b.data() + block, n - block);
}

unsigned MPoly::total_deg() const {
  unsigned d = 0;
  for (auto& tm : t) {
    unsigned s = 0;
    for (unsigned e : tm.e) s += e;
    d = std::max(d, s);
  }
  return d;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
  if (t.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += " + ";
    std::string mono;
    for (size_t v = 0; v < t[i].e.size(); ++v) {
      if (!t[i].e[v]) continue;
      if (!mono.empty()) mono += "*";
      mono += names[v];
      if (t[i].e[v] > 1) mono += "^" + std::to_string(t[i].e[v]);
    }
    std::string c = t[i].c.str();
    if (mono.empty())
      s += c;
    else if (c == "1")
      s += mono;
    else
      s += "(" + c + ")*" + mono;
  }
  return s;
}

MPoly mp_constant(const FieldPtr& K, int nvars, const Val& c) {
  MPoly f(K, nvars);
  if (!c.is_zero()) f.t.push_back({std::vector<unsigned>(nvars, 0), c});
  return f;
}

MPoly mp_variable(const FieldPtr& K, int nvars, int i, unsigned e) {
  MPoly f(K, nvars);
  std::vector<unsigned> ev(nvars, 0);
  ev[i] = e;
  f.t.push_back({std::move(ev), K->one()});
  return f;
}

static void mp_sort(MPoly& f, const TermOrd& o) {
  std::sort(f.t.begin(), f.t.end(),
            [&o](const MTerm& a, const MTerm& b) { return o.cmp(a.e, b.e) > 0; });
}

MPoly mp_add(const MPoly& a, const MPoly& b, const TermOrd& o) {
  MPoly r(a.K ? a.K : b.K, a.K ? a.nvars : b.nvars);
  size_t i = 0, j = 0;
  while (i < a.t.size() || j < b.t.size()) {
    int c = (i == a.t.size()) ? -1 : (j == b.t.size()) ? 1 : o.cmp(a.t[i].e, b.t[j].e);
    if (c > 0)
      r.t.push_back(a.t[i++]);
    else if (c < 0)
      r.t.push_back(b.t[j++]);
    else {
      Val s = a.t[i].c + b.t[j].c;
      if (!s.is_zero()) r.t.push_back({a.t[i].e, s});
      ++i, ++j;
    }
  }
  return r;
}

MPoly mp_neg(const MPoly& a) {
  MPoly r = a;
  for (auto& tm : r.t) tm.c = -tm.c;
  return r;
}

MPoly mp_sub(const MPoly& a, const MPoly& b, const TermOrd& o) { return mp_add(a, mp_neg(b), o); }

MPoly mp_scale(const MPoly& a, const Val& c) {
  MPoly r(a.K, a.nvars);
  if (c.is_zero()) return r;
  for (auto& tm : a.t) {
    Val v = tm.c * c;
    if (!v.is_zero()) r.t.push_back({tm.e, v});
  }
  return r;
}

MPoly mp_mul(const MPoly& a, const MPoly& b, const TermOrd& o) {
  MPoly r(a.K ? a.K : b.K, a.K ? a.nvars : b.nvars);
  if (a.is_zero() || b.is_zero()) return r;
  std::map<std::vector<unsigned>, Val> acc;
  for (auto& x : a.t)
    for (auto& y : b.t) {
      std::vector<unsigned> e(x.e.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = x.e[i] + y.e[i];
      Val v = x.c * y.c;
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(std::move(e), v);
      else
        it->second = it->second + v;
    }
  for (auto& [e, c] : acc)
    if (!c.is_zero()) r.t.push_back({e, c});
  mp_sort(r, o);
  return r;
}

MPoly mp_pow(const MPoly& a, unsigned e, const TermOrd& o) {
  MPoly r = mp_constant(a.K, a.nvars, a.K->one());
  MPoly b = a;
  while (e) {
    if (e & 1) r = mp_mul(r, b, o);
    e >>= 1;
    if (e) b = mp_mul(b, b, o);
  }
  return r;
}

bool mp_eq(const MPoly& a, const MPoly& b) {
  if (a.t.size() != b.t.size()) return false;
  for (size_t i = 0; i < a.t.size(); ++i)
    if (a.t[i].e != b.t[i].e || a.t[i].c != b.t[i].c) return false;
  return true;
}

MPoly mp_map_coeffs(const MPoly& a, const FieldPtr& cod, const std::function<Val(const Val&)>& f) {
  MPoly r(cod, a.nvars);
  for (auto& tm : a.t) {
    Val c = f(tm.c);
    if (!c.is_zero()) r.t.push_back({tm.e, c});
  }
  return r;
}

MPoly mp_derivative(const MPoly& a, int var, const TermOrd& o) {
  MPoly r(a.K, a.nvars);
  int p = a.K->characteristic();
  for (auto& tm : a.t) {
    unsigned e = tm.e[var];
    if (!e || (int)(e % p) == 0) continue;
    Val c = tm.c * a.K->from_int((long long)(e % p));
    if (c.is_zero()) continue;
    auto ev = tm.e;
    --ev[var];
    r.t.push_back({std::move(ev), c});
  }
  mp_sort(r, o);
  return r;
}

static bool exp_divides(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

MPoly mp_reduce(const MPoly& f, const std::vector<MPoly>& basis, const TermOrd& o) {
  MPoly rem(f.K, f.nvars);
  MPoly cur = f;
  while (!cur.is_zero()) {
    bool reduced = false;
    for (auto& g : basis) {
      if (g.is_zero()) continue;
      if (exp_divides(g.t[0].e, cur.t[0].e)) {
        std::vector<unsigned> q(cur.t[0].e.size());
        for (size_t i = 0; i < q.size(); ++i) q[i] = cur.t[0].e[i] - g.t[0].e[i];
        Val c = cur.t[0].c / g.t[0].c;
        MPoly m(f.K, f.nvars);
        m.t.push_back({std::move(q), c});
        cur = mp_sub(cur, mp_mul(m, g, o), o);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.t.push_back(cur.t[0]);
      cur.t.erase(cur.t.begin());
    }
  }
  return rem;
}

std::vector<MPoly> groebner(std::vector<MPoly> gens, const TermOrd& o, unsigned degree_cap) {
  std::vector<MPoly> G;
  for (auto& g : gens)
    if (!g.is_zero()) G.push_back(g);
  for (auto& g : G) {
    Val lc = g.t[0].c;
    g = mp_scale(g, g.K->inv(lc));
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t i = 0; i < G.size(); ++i)
    for (size_t j = i + 1; j < G.size(); ++j) pairs.push_back({i, j});
  while (!pairs.empty()) {
    auto [i, j] = pairs.back();
    pairs.pop_back();
    const auto &f = G[i], &g = G[j];
    std::vector<unsigned> lcm(f.t[0].e.size());
    bool coprime = true;
    for (size_t v = 0; v < lcm.size(); ++v) {
      lcm[v] = std::max(f.t[0].e[v], g.t[0].e[v]);
      if (f.t[0].e[v] && g.t[0].e[v]) coprime = false;
    }
    if (coprime) continue;  // Buchberger's first criterion
    unsigned lcmdeg = 0;
    for (unsigned e : lcm) lcmdeg += e;
    if (lcmdeg > degree_cap)
      fail(errc::degree_cap_exceeded, "Groebner degree cap " + std::to_string(degree_cap));
    MPoly mf(f.K, f.nvars), mg(f.K, f.nvars);
    std::vector<unsigned> qf(lcm.size()), qg(lcm.size());
    for (size_t v = 0; v < lcm.size(); ++v) {
      qf[v] = lcm[v] - f.t[0].e[v];
      qg[v] = lcm[v] - g.t[0].e[v];
    }
    mf.t.push_back({qf, f.K->one()});
    mg.t.push_back({qg, f.K->one()});
    MPoly s = mp_sub(mp_mul(mf, f, o), mp_mul(mg, g, o), o);
    MPoly r = mp_reduce(s, G, o);
    if (!r.is_zero()) {
      if (r.total_deg() > degree_cap)
        fail(errc::degree_cap_exceeded, "Groebner degree cap " + std::to_string(degree_cap));
      r = mp_scale(r, r.K->inv(r.t[0].c));
      G.push_back(r);
      for (size_t k = 0; k + 1 < G.size(); ++k) pairs.push_back({k, G.size() - 1});
    }
  }
  // inter-reduce for a unique reduced basis
  for (size_t i = 0; i < G.size(); ++i) {
    std::vector<MPoly> others;
    for (size_t j = 0; j < G.size(); ++j)
      if (j != i) others.push_back(G[j]);
    G[i] = mp_reduce(G[i], others, o);
  }
  std::vector<MPoly> out;
  for (auto& g : G)
    if (!g.is_zero()) out.push_back(mp_scale(g, g.K->inv(g.t[0].c)));
  std::sort(out.begin(), out.end(),
            [&o](const MPoly& a, const MPoly& b) { return o.cmp(a.t[0].e, b.t[0].e) > 0; });
  return out;
}

// ---- PresAlgebra ------------------------------------------------------------

PresAlgebra::PresAlgebra(FieldPtr k, std::vector<std::string> names, std::vector<MPoly> relations,
                         unsigned cap)
    : K(std::move(k)), gens(std::move(names)), rels(std::move(relations)), degree_cap(cap) {}

const std::vector<MPoly>& PresAlgebra::basis() const {
  if (!gb_) gb_ = std::make_shared<std::vector<MPoly>>(groebner(rels, ord, degree_cap));
  return *gb_;
}

MPoly PresAlgebra::normal_form(const MPoly& f) const { return mp_reduce(f, basis(), ord); }

MPoly PresAlgebra::parse(const std::string& text) const {
  // reuse the prime-field parser shape: parse over a PolyRing when the base is
  // a prime field is not enough (coefficients can be field elements), so this
  // small recursive-descent parser handles sums of products of powers where a
  // leaf is a generator name or a coefficient literal in the base field
  struct P {
    const PresAlgebra& A;
    const std::string& s;
    size_t i = 0;
    const TermOrd& o;
    void ws() {
      while (i < s.size() && isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char c) {
      ws();
      if (i < s.size() && s[i] == c) {
        ++i;
        return true;
      }
      return false;
    }
    [[noreturn]] void err(const std::string& m) { fail(errc::parse_error, m + " in '" + s + "'"); }
    MPoly expr() {
      MPoly r = term();
      for (;;) {
        if (eat('+'))
          r = mp_add(r, term(), o);
        else if (eat('-'))
          r = mp_sub(r, term(), o);
        else
          return r;
      }
    }
    MPoly term() {
      MPoly r = factor();
      for (;;) {
        ws();
        if (eat('*'))
          r = mp_mul(r, factor(), o);
        else if (i < s.size() && (isalpha((unsigned char)s[i]) || s[i] == '('))
          r = mp_mul(r, factor(), o);
        else
          return r;
      }
    }
    MPoly factor() {
      MPoly b = base();
      ws();
      if (eat('^')) {
        ws();
        size_t j = i;
        while (i < s.size() && isdigit((unsigned char)s[i])) ++i;
        if (j == i) err("expected exponent");
        b = mp_pow(b, (unsigned)std::stoul(s.substr(j, i - j)), o);
      }
      return b;
    }
    MPoly base() {
      ws();
      if (i >= s.size()) err("unexpected end");
      if (eat('(')) {
        MPoly r = expr();
        if (!eat(')')) err("expected ')'");
        return r;
      }
      if (eat('-')) return mp_neg(base());
      if (isdigit((unsigned char)s[i])) {
        size_t j = i;
        while (i < s.size() && isdigit((unsigned char)s[i])) ++i;
        return mp_constant(A.K, A.nvars(), A.K->from_int(std::stoll(s.substr(j, i - j))));
      }
      if (isalpha((unsigned char)s[i])) {
        size_t j = i;
        while (i < s.size() && (isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
        std::string name = s.substr(j, i - j);
        for (int v = 0; v < A.nvars(); ++v)
          if (A.gens[v] == name) return mp_variable(A.K, A.nvars(), v);
        // otherwise a coefficient literal (a base-field generator name)
        return mp_constant(A.K, A.nvars(), A.K->parse(name));
      }
      err("unexpected character");
    }
  };
  P p{*this, text, 0, ord};
  MPoly r = p.expr();
  p.ws();
  if (p.i != text.size()) p.err("trailing input");
  return r;
}

std::string PresAlgebra::describe() const {
  std::string g;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) g += ",";
    g += gens[i];
  }
  std::string r;
  for (size_t i = 0; i < rels.size(); ++i) {
    if (i) r += ";";
    r += rels[i].str(gens);
  }
  return "alg base=<" + K->describe() + "> gens=" + g + (r.empty() ? "" : " rels=" + r);
}

// ---- AlgHom -------------------------------------------------------------------

AlgHom::AlgHom(const PresAlgebra& d, const PresAlgebra& c, std::vector<MPoly> imgs,
               std::optional<FieldHom> coeff_map)
    : dom(&d), cod(&c), images(std::move(imgs)), coeff(std::move(coeff_map)) {
  if ((int)images.size() != d.nvars()) fail(errc::bad_argument, "generator image count");
}

MPoly AlgHom::apply(const MPoly& f) const {
  MPoly r(cod->K, cod->nvars());
  for (auto& tm : f.t) {
    Val c = coeff ? (*coeff)(tm.c) : tm.c;
    MPoly term = mp_constant(cod->K, cod->nvars(), c);
    for (size_t v = 0; v < tm.e.size(); ++v)
      if (tm.e[v]) term = mp_mul(term, mp_pow(images[v], tm.e[v], cod->ord), cod->ord);
    r = mp_add(r, term, cod->ord);
  }
  return cod->normal_form(r);
}

bool AlgHom::check() const {
  for (auto& rel : dom->rels)
    if (!apply(rel).is_zero()) return false;
  return true;
}

AlgHom AlgHom::then(const AlgHom& g) const {
  std::vector<MPoly> imgs;
  for (auto& im : images) imgs.push_back(g.apply(im));
  std::optional<FieldHom> cm;
  if (coeff && g.coeff)
    cm = coeff->then(*g.coeff);
  else if (coeff && !g.coeff)
    cm = coeff;  // g is coefficient-identity into the same field
  else if (g.coeff)
    cm = g.coeff;
  return AlgHom(*dom, *g.cod, imgs, cm);
}

AlgHom frobenius_hom(const PresAlgebra& A) {
  std::vector<MPoly> imgs;
  int p = A.K->characteristic();
  for (int i = 0; i < A.nvars(); ++i)
    imgs.push_back(mp_pow(mp_variable(A.K, A.nvars(), i), (unsigned)p, A.ord));
  return AlgHom(A, A, imgs, FieldHom::frobenius(A.K));
}

// ---- twisted / mixed rings -----------------------------------------------------

TwistedRing make_twisted_ring(PresAlgebra A, AlgHom phi) {
  if (!phi.check()) fail(errc::relation_not_preserved, "phi does not preserve the ideal");
  AlgHom sq = phi.then(phi);
  AlgHom fr = frobenius_hom(A);
  for (int i = 0; i < A.nvars(); ++i) {
    MPoly diff = mp_sub(sq.images[i], fr.images[i], A.ord);
    if (!A.is_zero_mod(diff))
      fail(errc::composition_mismatch, "phi^2 != Frobenius on " + A.gens[i]);
  }
  TwistedRing R{std::move(A), std::move(phi)};
  return R;
}

MixedRing make_mixed_ring(PresAlgebra A, PresAlgebra B, AlgHom kap, AlgHom lam, MixedField m) {
  if (!kap.check()) fail(errc::relation_not_preserved, "kappa-hat does not preserve the ideal");
  if (!lam.check()) fail(errc::relation_not_preserved, "lambda-hat does not preserve the ideal");
  int p = A.K->characteristic();
  AlgHom lk = kap.then(lam);
  for (int i = 0; i < A.nvars(); ++i) {
    MPoly diff = mp_sub(lk.images[i], mp_pow(mp_variable(A.K, A.nvars(), i), p, A.ord), A.ord);
    if (!A.is_zero_mod(diff))
      fail(errc::composition_mismatch, "lambda(kappa(.)) != Frobenius on " + A.gens[i]);
  }
  AlgHom kl = lam.then(kap);
  for (int i = 0; i < B.nvars(); ++i) {
    MPoly diff = mp_sub(kl.images[i], mp_pow(mp_variable(B.K, B.nvars(), i), p, B.ord), B.ord);
    if (!B.is_zero_mod(diff))
      fail(errc::composition_mismatch, "kappa(lambda(.)) != Frobenius on " + B.gens[i]);
  }
  return MixedRing{std::move(A), std::move(B), std::move(kap), std::move(lam), std::move(m)};
}

TwistedRing twisted_plane(const BlendedField& b) {
  PresAlgebra A(b.k, {"x", "y"});
  int p = b.k->characteristic();
  std::vector<MPoly> imgs = {mp_variable(A.K, 2, 1), mp_pow(mp_variable(A.K, 2, 0), p, A.ord)};
  AlgHom phi(A, A, imgs, b.theta);
  return make_twisted_ring(A, phi);
}

MixedRing mixed_plane(const MixedField& m) {
  PresAlgebra A(m.K, {"x", "y"});
  PresAlgebra B(m.L, {"x", "y"});
  int p = m.K->characteristic();
  // kap: x -> y^p, y -> x (over kappa); lam likewise (over lambda): the mixed
  // points are then the pairs (a, b) in L^2 with a in the subfield
  AlgHom kap(A, B, {mp_pow(mp_variable(B.K, 2, 1), p, B.ord), mp_variable(B.K, 2, 0)}, m.kappa);
  AlgHom lam(B, A, {mp_pow(mp_variable(A.K, 2, 1), p, A.ord), mp_variable(A.K, 2, 0)}, m.lambda);
  MixedRing R = make_mixed_ring(A, B, kap, lam, m);
  return R;
}

// ---- rational points ------------------------------------------------------------

static Val eval_mpoly(const MPoly& f, const Point& pt) {
  const Field& K = *pt[0].F;
  Val r = K.zero();
  for (auto& tm : f.t) {
    if (!same_field(*tm.c.F, K)) fail(errc::bad_argument, "evaluation field mismatch");
    Val term = tm.c;
    for (size_t v = 0; v < tm.e.size(); ++v)
      if (tm.e[v]) term = term * K.pow(pt[v], tm.e[v]);
    r = r + term;
  }
  return r;
}

std::vector<Point> points_of_algebra(const PresAlgebra& A, uint64_t bound) {
  uint64_t q = A.K->size();
  if (!q) fail(errc::enumeration_bound, "point enumeration needs a finite base field");
  uint64_t total = 1;
  for (int i = 0; i < A.nvars(); ++i) {
    total *= q;
    if (total > bound) fail(errc::enumeration_bound, "too many candidate points");
  }
  std::vector<Point> out;
  for (uint64_t k = 0; k < total; ++k) {
    uint64_t kk = k;
    Point pt;
    for (int i = 0; i < A.nvars(); ++i) {
      pt.push_back(A.K->element_at(kk % q));
      kk /= q;
    }
    bool ok = true;
    for (auto& rel : A.rels)
      if (!eval_mpoly(rel, pt).is_zero()) {
        ok = false;
        break;
      }
    if (ok) out.push_back(std::move(pt));
  }
  return out;
}

bool twisted_point_predicate(const TwistedRing& R, const BlendedField& b, const Point& pt) {
  for (auto& rel : R.A.rels)
    if (!eval_mpoly(rel, pt).is_zero()) return false;
  // alpha o phi = theta o alpha on generators
  for (int i = 0; i < R.A.nvars(); ++i) {
    Val lhs = eval_mpoly(R.phi.images[i], pt);
    if (lhs != b.theta(pt[i])) return false;
  }
  return true;
}

TwistedPoints points_twisted(const TwistedRing& R, const BlendedField& b) {
  if (!same_field(*R.A.K, *b.k)) fail(errc::bad_argument, "ring base and blended field differ");
  TwistedPoints out;
  std::vector<Point> all = points_of_algebra(R.A);
  for (auto& pt : all)
    if (twisted_point_predicate(R, b, pt)) out.points.push_back(pt);
  // cross-check against the involution fixed set when theta is invertible
  // (always, over a finite field): alpha(pt)_i = theta^{-1}(eval(phi(x_i), pt))
  auto ff = std::dynamic_pointer_cast<const FiniteField>(b.k);
  if (ff) {
    auto theta_inv = [&](const Val& v) {
      // theta is x -> x^(p^m); its inverse is x -> x^(p^(n-m))
      for (int m = 0; m < ff->degree(); ++m) {
        FieldHom cand = FieldHom::frobenius_power(ff, m);
        if (cand.eq_on_generators(b.theta))
          return FieldHom::frobenius_power(ff, (ff->degree() - m) % ff->degree())(v);
      }
      fail(errc::decision_failure, "theta is not a Frobenius power");
    };
    auto alpha = [&](const Point& pt) {
      Point r;
      for (int i = 0; i < R.A.nvars(); ++i) r.push_back(theta_inv(eval_mpoly(R.phi.images[i], pt)));
      return r;
    };
    bool involution = true;
    for (auto& pt : all) {
      Point a1 = alpha(pt);
      Point a2 = alpha(a1);
      bool fixed = true, back = true;
      for (int i = 0; i < R.A.nvars(); ++i) {
        if (a1[i] != pt[i]) fixed = false;
        if (a2[i] != pt[i]) back = false;
      }
      if (!back) involution = false;
      if (fixed) out.involution_fixed.push_back(pt);
    }
    out.cross_check_ok = involution && out.involution_fixed.size() == out.points.size();
    if (out.cross_check_ok) {
      for (size_t i = 0; i < out.points.size(); ++i) {
        bool found = false;
        for (auto& q : out.involution_fixed) {
          bool eqp = true;
          for (int v = 0; v < R.A.nvars(); ++v)
            if (out.points[i][v] != q[v]) eqp = false;
          if (eqp) {
            found = true;
            break;
          }
        }
        if (!found) out.cross_check_ok = false;
      }
    }
  }
  return out;
}

bool mixed_point_predicate(const MixedRing& R, const Point& v) {
  for (auto& rel : R.B.rels)
    if (!eval_mpoly(rel, v).is_zero()) return false;
  for (int i = 0; i < R.A.nvars(); ++i) {
    Val fv = eval_mpoly(R.kap.images[i], v);
    if (!in_subimage(fv, R.m)) return false;
  }
  return true;
}

MixedPoints points_mixed(const MixedRing& R, uint64_t bound) {
  MixedPoints out;
  std::vector<Point> us = points_of_algebra(R.A, bound);
  std::vector<Point> vs = points_of_algebra(R.B, bound);
  // route A: the full pair condition, both intertwining squares
  for (auto& u : us)
    for (auto& v : vs) {
      bool ok = true;
      for (int i = 0; i < R.A.nvars() && ok; ++i)
        if (eval_mpoly(R.kap.images[i], v) != R.m.kappa(u[i])) ok = false;
      for (int j = 0; j < R.B.nvars() && ok; ++j)
        if (eval_mpoly(R.lam.images[j], u) != R.m.lambda(v[j])) ok = false;
      if (ok) out.pairs.push_back({u, v});
    }
  // route B: v alone, pulled back through the subfield
  for (auto& v : vs) {
    bool ok = true;
    Point u;
    for (int i = 0; i < R.A.nvars() && ok; ++i) {
      Val fv = eval_mpoly(R.kap.images[i], v);
      if (!in_subimage(fv, R.m)) {
        ok = false;
        break;
      }
      u.push_back(kappa_preimage(fv, R.m));
    }
    if (!ok) continue;
    for (auto& rel : R.A.rels)
      if (!eval_mpoly(rel, u).is_zero()) ok = false;
    if (ok) out.pullback.push_back({u, v});
  }
  // the two routes must produce the same set
  auto pair_eq = [&](const std::pair<Point, Point>& a, const std::pair<Point, Point>& b) {
    for (size_t i = 0; i < a.first.size(); ++i)
      if (a.first[i] != b.first[i]) return false;
    for (size_t i = 0; i < a.second.size(); ++i)
      if (a.second[i] != b.second[i]) return false;
    return true;
  };
  out.routes_agree = out.pairs.size() == out.pullback.size();
  if (out.routes_agree)
    for (auto& a : out.pairs) {
      bool found = false;
      for (auto& b : out.pullback)
        if (pair_eq(a, b)) {
          found = true;
          break;
        }
      if (!found) {
        out.routes_agree = false;
        break;
      }
    }
  return out;
}

}  // namespace mixtwist
