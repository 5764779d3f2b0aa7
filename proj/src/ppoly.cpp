#include "mixtwist/ppoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace mixtwist {

PolyRing::PolyRing(int p_, std::vector<std::string> names) : p(p_), vars(std::move(names)) {
  if (!is_prime_u64((uint64_t)p)) fail(errc::non_prime, "characteristic must be prime");
  if (nvars() > 8) fail(errc::bad_argument, "at most 8 variables supported");
}

int PolyRing::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (vars[i] == name) return i;
  return -1;
}

unsigned mono_get(const PolyRing& R, uint64_t m, int var) {
  return (unsigned)((m >> (var * R.bits())) & R.expmask());
}

uint64_t mono_set(const PolyRing& R, uint64_t m, int var, unsigned e) {
  uint64_t mask = R.expmask() << (var * R.bits());
  return (m & ~mask) | ((uint64_t)e << (var * R.bits()));
}

uint64_t mono_mul(const PolyRing& R, uint64_t a, uint64_t b) {
  uint64_t r = 0;
  for (int i = 0; i < R.nvars(); ++i) {
    uint64_t e = (uint64_t)mono_get(R, a, i) + mono_get(R, b, i);
    if (e > R.expmask()) fail(errc::degree_cap_exceeded, "monomial exponent overflow");
    r |= e << (i * R.bits());
  }
  return r;
}

unsigned mono_total(const PolyRing& R, uint64_t m) {
  unsigned s = 0;
  for (int i = 0; i < R.nvars(); ++i) s += mono_get(R, m, i);
  return s;
}

bool mono_divides(const PolyRing& R, uint64_t a, uint64_t b) {
  for (int i = 0; i < R.nvars(); ++i)
    if (mono_get(R, a, i) > mono_get(R, b, i)) return false;
  return true;
}

uint64_t mono_div(const PolyRing& R, uint64_t b, uint64_t a) {
  uint64_t r = 0;
  for (int i = 0; i < R.nvars(); ++i)
    r |= (uint64_t)(mono_get(R, b, i) - mono_get(R, a, i)) << (i * R.bits());
  return r;
}

int mono_cmp_grevlex(const PolyRing& R, uint64_t a, uint64_t b) {
  if (a == b) return 0;
  unsigned da = mono_total(R, a), db = mono_total(R, b);
  if (da != db) return da < db ? -1 : 1;
  for (int i = R.nvars() - 1; i >= 0; --i) {
    unsigned ea = mono_get(R, a, i), eb = mono_get(R, b, i);
    if (ea != eb) return ea > eb ? -1 : 1;  // reverse: smaller last exponent wins
  }
  return 0;
}

static int modp(long long c, int p) {
  int r = (int)(c % p);
  return r < 0 ? r + p : r;
}

PPoly PPoly::constant(const RingPtr& R, long long c) {
  PPoly f(R);
  int cc = modp(c, R->p);
  if (cc) f.t.push_back({0, cc});
  return f;
}

PPoly PPoly::variable(const RingPtr& R, int i, unsigned e) {
  PPoly f(R);
  if (e == 0) return constant(R, 1);
  f.t.push_back({mono_set(*R, 0, i, e), 1});
  return f;
}

unsigned PPoly::deg(int var) const {
  unsigned d = 0;
  for (auto& tm : t) d = std::max(d, mono_get(*R, tm.mono, var));
  return d;
}

unsigned PPoly::total_deg() const {
  unsigned d = 0;
  for (auto& tm : t) d = std::max(d, mono_total(*R, tm.mono));
  return d;
}

// merge two sorted term lists
static PPoly merge(const PPoly& a, const PPoly& b, int bsign) {
  PPoly r(a.R ? a.R : b.R);
  const PolyRing& R = *r.R;
  int p = R.p;
  size_t i = 0, j = 0;
  r.t.reserve(a.t.size() + b.t.size());
  while (i < a.t.size() || j < b.t.size()) {
    if (j == b.t.size() || (i < a.t.size() && mono_cmp_grevlex(R, a.t[i].mono, b.t[j].mono) > 0)) {
      r.t.push_back(a.t[i++]);
    } else if (i == a.t.size() || mono_cmp_grevlex(R, a.t[i].mono, b.t[j].mono) < 0) {
      int c = modp((long long)bsign * b.t[j].c, p);
      if (c) r.t.push_back({b.t[j].mono, c});
      ++j;
    } else {
      int c = modp((long long)a.t[i].c + bsign * b.t[j].c, p);
      if (c) r.t.push_back({a.t[i].mono, c});
      ++i, ++j;
    }
  }
  return r;
}

PPoly add(const PPoly& a, const PPoly& b) { return merge(a, b, 1); }
PPoly sub(const PPoly& a, const PPoly& b) { return merge(a, b, -1); }

PPoly neg(const PPoly& a) { return scale(a, -1); }

PPoly scale(const PPoly& a, int c) {
  PPoly r(a.R);
  if (!a.R) return r;
  int cc = modp(c, a.R->p);
  if (!cc) return r;
  r.t.reserve(a.t.size());
  for (auto& tm : a.t) {
    int v = modp((long long)tm.c * cc, a.R->p);
    if (v) r.t.push_back({tm.mono, v});
  }
  return r;
}

PPoly mul_term(const PPoly& a, uint64_t mono, int c) {
  PPoly r(a.R);
  int cc = modp(c, a.R->p);
  if (!cc) return r;
  r.t.reserve(a.t.size());
  for (auto& tm : a.t) {
    int v = modp((long long)tm.c * cc, a.R->p);
    if (v) r.t.push_back({mono_mul(*a.R, tm.mono, mono), v});
  }
  return r;
}

PPoly mul(const PPoly& a, const PPoly& b) {
  PPoly r(a.R ? a.R : b.R);
  if (a.is_zero() || b.is_zero()) return r;
  const PolyRing& R = *r.R;
  // accumulate in a map keyed by monomial; sort once at the end
  std::map<uint64_t, int> acc;
  for (auto& x : a.t)
    for (auto& y : b.t) {
      uint64_t m = mono_mul(R, x.mono, y.mono);
      int& slot = acc[m];
      slot = modp((long long)slot + (long long)x.c * y.c, R.p);
    }
  r.t.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c) r.t.push_back({m, c});
  std::sort(r.t.begin(), r.t.end(), [&R](const Term& x, const Term& y) {
    return mono_cmp_grevlex(R, x.mono, y.mono) > 0;
  });
  return r;
}

PPoly pow(const PPoly& a, unsigned e) {
  PPoly r = PPoly::constant(a.R, 1), base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return r;
}

static int inv_mod(int a, int p) {
  int r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = (int)((long long)r * b % p);
    b = (int)((long long)b * b % p);
    e >>= 1;
  }
  return r;
}

bool try_divexact(const PPoly& a, const PPoly& b, PPoly& out) {
  if (b.is_zero()) return false;
  const PolyRing& R = *b.R;
  PPoly rem = a, q(b.R);
  int lcinv = inv_mod(b.lead().c, R.p);
  while (!rem.is_zero()) {
    if (!mono_divides(R, b.lead().mono, rem.lead().mono)) return false;
    uint64_t m = mono_div(R, rem.lead().mono, b.lead().mono);
    int c = modp((long long)rem.lead().c * lcinv, R.p);
    q.t.push_back({m, c});
    rem = sub(rem, mul_term(b, m, c));
  }
  std::sort(q.t.begin(), q.t.end(), [&R](const Term& x, const Term& y) {
    return mono_cmp_grevlex(R, x.mono, y.mono) > 0;
  });
  out = q;
  return true;
}

PPoly divexact(const PPoly& a, const PPoly& b) {
  PPoly q;
  if (!try_divexact(a, b, q)) fail(errc::generic, "inexact polynomial division");
  return q;
}

PPoly derivative(const PPoly& a, int var) {
  PPoly r(a.R);
  for (auto& tm : a.t) {
    unsigned e = mono_get(*a.R, tm.mono, var);
    int c = modp((long long)tm.c * (long long)(e % a.R->p), a.R->p);
    if (e && c) r.t.push_back({mono_set(*a.R, tm.mono, var, e - 1), c});
  }
  return r;
}

// ---- gcd via primitive PRS in the lowest variable present -----------------

static void split_by_var(const PPoly& f, int var, std::vector<PPoly>& coeffs) {
  unsigned d = f.deg(var);
  coeffs.assign(d + 1, PPoly(f.R));
  for (auto& tm : f.t) {
    unsigned e = mono_get(*f.R, tm.mono, var);
    coeffs[e].t.push_back({mono_set(*f.R, tm.mono, var, 0), tm.c});
  }
  const PolyRing& R = *f.R;
  for (auto& c : coeffs)
    std::sort(c.t.begin(), c.t.end(), [&R](const Term& x, const Term& y) {
      return mono_cmp_grevlex(R, x.mono, y.mono) > 0;
    });
}

static PPoly join_by_var(const RingPtr& R, int var, const std::vector<PPoly>& coeffs) {
  PPoly r(R);
  for (unsigned e = 0; e < coeffs.size(); ++e)
    r = add(r, mul(coeffs[e], PPoly::variable(R, var, e)));
  return r;
}

static PPoly content_wrt(const PPoly& f, int var) {
  std::vector<PPoly> cs;
  split_by_var(f, var, cs);
  PPoly g(f.R);
  for (auto& c : cs)
    if (!c.is_zero()) g = gcd(g, c);
  return g;
}

// pseudo-remainder of a by b in variable var
static PPoly prem(const PPoly& a, const PPoly& b, int var) {
  std::vector<PPoly> bc;
  split_by_var(b, var, bc);
  PPoly blc = bc.back();
  unsigned db = (unsigned)bc.size() - 1;
  PPoly r = a;
  while (!r.is_zero() && r.deg(var) >= db) {
    std::vector<PPoly> rc;
    split_by_var(r, var, rc);
    unsigned dr = (unsigned)rc.size() - 1;
    PPoly shift = mul(rc.back(), PPoly::variable(r.R, var, dr - db));
    r = sub(mul(r, blc), mul(shift, b));
    if (!r.is_zero() && r.deg(var) >= dr) fail(errc::generic, "prem failed to reduce");
  }
  return r;
}

static PPoly make_monic(const PPoly& f) {
  if (f.is_zero()) return f;
  return scale(f, inv_mod(f.lead().c, f.R->p));
}

PPoly gcd(const PPoly& a, const PPoly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  const RingPtr R = a.R;
  if (a.is_constant() || b.is_constant()) return PPoly::constant(R, 1);
  // pick the lowest-index variable occurring in either
  int var = -1;
  for (int i = 0; i < R->nvars() && var < 0; ++i)
    if (a.depends_on(i) || b.depends_on(i)) var = i;
  if (var < 0) return PPoly::constant(R, 1);
  if (!a.depends_on(var)) return gcd(a, content_wrt(b, var));
  if (!b.depends_on(var)) return gcd(b, content_wrt(a, var));

  PPoly ca = content_wrt(a, var), cb = content_wrt(b, var);
  PPoly f = divexact(a, ca), g = divexact(b, cb);
  if (f.deg(var) < g.deg(var)) std::swap(f, g);
  while (!g.is_zero()) {
    PPoly r = prem(f, g, var);
    if (!r.is_zero()) {
      PPoly cr = content_wrt(r, var);
      r = divexact(r, cr);
    }
    f = g;
    g = r;
  }
  PPoly cont = gcd(ca, cb);
  return make_monic(mul(cont, f));
}

bool pth_root(const PPoly& a, PPoly& out) {
  const PolyRing& R = *a.R;
  PPoly r(a.R);
  for (auto& tm : a.t) {
    uint64_t m = 0;
    for (int i = 0; i < R.nvars(); ++i) {
      unsigned e = mono_get(R, tm.mono, i);
      if (e % R.p) return false;
      m = mono_set(R, m, i, e / R.p);
    }
    r.t.push_back({m, tm.c});  // c^p = c on the prime field
  }
  const PolyRing* Rp = a.R.get();
  std::sort(r.t.begin(), r.t.end(), [Rp](const Term& x, const Term& y) {
    return mono_cmp_grevlex(*Rp, x.mono, y.mono) > 0;
  });
  out = r;
  return true;
}

static bool const_sqrt(int c, int p, int& out) {
  for (int x = 0; x < p; ++x)
    if ((long long)x * x % p == c) {
      out = x;
      return true;
    }
  return false;
}

bool poly_sqrt(const PPoly& a, PPoly& out) {
  const RingPtr R = a.R;
  if (a.is_zero()) {
    out = a;
    return true;
  }
  if (R->p == 2) {
    // in characteristic 2 squares are exactly the polynomials with even
    // exponents everywhere (prime-field coefficients are all squares)
    PPoly r(R);
    for (auto& tm : a.t) {
      uint64_t m = 0;
      for (int i = 0; i < R->nvars(); ++i) {
        unsigned e = mono_get(*R, tm.mono, i);
        if (e & 1) return false;
        m = mono_set(*R, m, i, e / 2);
      }
      r.t.push_back({m, tm.c});
    }
    const PolyRing* Rp = R.get();
    std::sort(r.t.begin(), r.t.end(), [Rp](const Term& x, const Term& y) {
      return mono_cmp_grevlex(*Rp, x.mono, y.mono) > 0;
    });
    out = r;
    return true;
  }
  if (a.is_constant()) {
    int w;
    if (!const_sqrt(a.constant_value(), R->p, w)) return false;
    out = PPoly::constant(R, w);
    return true;
  }
  // schoolbook square root in the highest variable present
  int var = -1;
  for (int i = R->nvars() - 1; i >= 0 && var < 0; --i)
    if (a.depends_on(i)) var = i;
  unsigned d = a.deg(var);
  if (d & 1) return false;
  std::vector<PPoly> ac;
  split_by_var(a, var, ac);
  PPoly lc_root;
  if (!poly_sqrt(ac.back(), lc_root)) return false;
  // r = lc_root * x^(d/2) + lower terms, found by peeling off leading terms
  std::vector<PPoly> rc(d / 2 + 1, PPoly(R));
  rc[d / 2] = lc_root;
  PPoly twice_lead = scale(lc_root, 2);
  PPoly rem = sub(a, mul(join_by_var(R, var, rc), join_by_var(R, var, rc)));
  while (!rem.is_zero()) {
    unsigned e = rem.deg(var);
    std::vector<PPoly> remc;
    split_by_var(rem, var, remc);
    if (e < d / 2) return false;
    // coefficient at x^(e - d/2): remc[e] = 2 * lc_root * rc[e - d/2] + ...
    PPoly q;
    if (!try_divexact(remc[e], twice_lead, q)) return false;
    rc[e - d / 2] = q;
    rem = sub(a, mul(join_by_var(R, var, rc), join_by_var(R, var, rc)));
    if (!rem.is_zero() && rem.deg(var) >= e) return false;
  }
  out = join_by_var(R, var, rc);
  return true;
}

// ---- printing and parsing --------------------------------------------------

std::string PPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += "+";
    const Term& tm = t[i];
    bool any = false;
    std::string m;
    for (int v = 0; v < R->nvars(); ++v) {
      unsigned e = mono_get(*R, tm.mono, v);
      if (!e) continue;
      if (any) m += "*";
      m += R->vars[v];
      if (e > 1) m += "^" + std::to_string(e);
      any = true;
    }
    if (!any) {
      s += std::to_string(tm.c);
    } else {
      if (tm.c != 1) s += std::to_string(tm.c) + "*";
      s += m;
    }
  }
  return s;
}

namespace {

struct Parser {
  const RingPtr& R;
  const std::string& s;
  size_t i = 0;

  Parser(const RingPtr& r, const std::string& text) : R(r), s(text) {}

  void ws() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
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

  PPoly expr() {
    PPoly r = term();
    for (;;) {
      ws();
      if (eat('+'))
        r = add(r, term());
      else if (eat('-'))
        r = sub(r, term());
      else
        return r;
    }
  }
  PPoly term() {
    PPoly r = factor();
    for (;;) {
      ws();
      if (eat('*'))
        r = mul(r, factor());
      else if (i < s.size() && (std::isalpha((unsigned char)s[i]) || s[i] == '('))
        r = mul(r, factor());
      else
        return r;
    }
  }
  PPoly factor() {
    PPoly b = base();
    ws();
    if (eat('^')) {
      ws();
      size_t j = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      if (j == i) err("expected exponent");
      b = pow(b, (unsigned)std::stoul(s.substr(j, i - j)));
    }
    return b;
  }
  PPoly base() {
    ws();
    if (i >= s.size()) err("unexpected end");
    if (eat('(')) {
      PPoly r = expr();
      if (!eat(')')) err("expected ')'");
      return r;
    }
    if (eat('-')) return neg(base());
    if (std::isdigit((unsigned char)s[i])) {
      size_t j = i;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
      return PPoly::constant(R, std::stoll(s.substr(j, i - j)));
    }
    if (std::isalpha((unsigned char)s[i])) {
      size_t j = i;
      while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_')) ++i;
      std::string name = s.substr(j, i - j);
      int v = R->var_index(name);
      if (v < 0) err("unknown variable '" + name + "'");
      return PPoly::variable(R, v);
    }
    err("unexpected character");
  }
};

}  // namespace

PPoly parse_poly(const RingPtr& R, const std::string& text) {
  Parser p(R, text);
  PPoly r = p.expr();
  p.ws();
  if (p.i != text.size()) p.err("trailing input");
  return r;
}

}  // namespace mixtwist
