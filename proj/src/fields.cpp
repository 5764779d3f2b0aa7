#include "mixtwist/fields.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mixtwist {

// ---- Val operators ---------------------------------------------------------

static const Field& common_field(const Val& a, const Val& b) {
  if (!a.F || !b.F) fail(errc::bad_argument, "value without a field");
  if (!same_field(*a.F, *b.F))
    fail(errc::bad_argument, "mixing elements of " + a.F->describe() + " and " + b.F->describe());
  return *a.F;
}

Val Val::operator+(const Val& o) const { return common_field(*this, o).add(*this, o); }
Val Val::operator-(const Val& o) const { return common_field(*this, o).sub(*this, o); }
Val Val::operator*(const Val& o) const { return common_field(*this, o).mul(*this, o); }
Val Val::operator/(const Val& o) const { return common_field(*this, o).div(*this, o); }
Val Val::operator-() const { return F->neg(*this); }
bool Val::operator==(const Val& o) const { return common_field(*this, o).eq(*this, o); }
bool Val::is_zero() const { return F->is_zero(*this); }
std::string Val::str() const { return F->str(*this); }

Val Field::pow(const Val& a, long long e) const {
  if (e < 0) return pow(inv(a), -e);
  Val r = one(), b = a;
  unsigned long long ee = (unsigned long long)e;
  while (ee) {
    if (ee & 1) r = mul(r, b);
    ee >>= 1;
    if (ee) b = mul(b, b);
  }
  return r;
}

Val Field::element_at(uint64_t) const {
  fail(errc::enumeration_bound, "field is not enumerable: " + describe());
}

// ---- FiniteField -----------------------------------------------------------

bool FiniteField::poly_irreducible(int p, const std::vector<uint8_t>& f) {
  // trial division by all monic polynomials of degree <= deg(f)/2
  int n = (int)f.size() - 1;
  if (n <= 0) return false;
  for (int d = 1; 2 * d <= n; ++d) {
    uint64_t count = ipow((uint64_t)p, d);
    std::vector<int> g(d + 1, 0);
    g[d] = 1;
    for (uint64_t k = 0; k < count; ++k) {
      uint64_t kk = k;
      for (int i = 0; i < d; ++i) {
        g[i] = (int)(kk % p);
        kk /= p;
      }
      // remainder of f mod g
      std::vector<int> r(f.begin(), f.end());
      for (int i = n; i >= d; --i) {
        int c = r[i] % p;
        if (!c) continue;
        for (int j = 0; j <= d; ++j)
          r[i - d + j] = ((r[i - d + j] - c * g[j]) % p + p * p) % p;
      }
      bool zero = true;
      for (int i = 0; i < d; ++i)
        if (r[i] % p) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

FiniteField::FiniteField(int p, int n, std::vector<uint8_t> modulus)
    : p_(p), n_(n), q_(ipow((uint64_t)p, (unsigned)n)), mod_(std::move(modulus)) {
  std::string m;
  for (int i = n_; i >= 0; --i) m += std::to_string((int)mod_[i]);
  desc_ = "Fq p=" + std::to_string(p_) + " n=" + std::to_string(n_) + " mod=" + m;
}

std::shared_ptr<const FiniteField> FiniteField::make(int p, int n, std::vector<uint8_t> modulus) {
  if (!is_prime_u64((uint64_t)p)) fail(errc::non_prime, std::to_string(p) + " not prime");
  if (n < 1) fail(errc::bad_argument, "degree must be positive");
  if ((int)modulus.size() != n + 1 || modulus[n] != 1)
    fail(errc::bad_argument, "modulus must be monic of degree n");
  if (!poly_irreducible(p, modulus)) fail(errc::bad_argument, "modulus is reducible");
  return std::shared_ptr<const FiniteField>(new FiniteField(p, n, std::move(modulus)));
}

std::shared_ptr<const FiniteField> FiniteField::make(int p, int n) {
  if (!is_prime_u64((uint64_t)p)) fail(errc::non_prime, std::to_string(p) + " not prime");
  if (n < 1) fail(errc::bad_argument, "degree must be positive");
  if (n > 20 || ipow((uint64_t)p, (unsigned)n) > (1ull << 20))
    fail(errc::enumeration_bound, "field size exceeds the configured bound");
  // first irreducible monic polynomial in base-p counter order of the low
  // coefficients; for F_8 this picks u^3+u+1
  std::vector<uint8_t> f(n + 1, 0);
  f[n] = 1;
  uint64_t count = ipow((uint64_t)p, (unsigned)n);
  for (uint64_t k = 0; k < count; ++k) {
    uint64_t kk = k;
    for (int i = 0; i < n; ++i) {
      f[i] = (uint8_t)(kk % p);
      kk /= p;
    }
    if (poly_irreducible(p, f)) return make(p, n, f);
  }
  fail(errc::generic, "no irreducible polynomial found");
}

Val FiniteField::zero() const {
  Val v;
  v.F = shared_from_this();
  v.v = std::vector<uint8_t>(n_, 0);
  return v;
}

Val FiniteField::one() const { return from_int(1); }

Val FiniteField::from_int(long long c) const {
  Val v = zero();
  int r = (int)(c % p_);
  if (r < 0) r += p_;
  std::get<std::vector<uint8_t>>(v.v)[0] = (uint8_t)r;
  return v;
}

Val FiniteField::add(const Val& a, const Val& b) const {
  Val v = zero();
  auto& r = std::get<std::vector<uint8_t>>(v.v);
  for (int i = 0; i < n_; ++i) r[i] = (uint8_t)((a.fq()[i] + b.fq()[i]) % p_);
  return v;
}

Val FiniteField::neg(const Val& a) const {
  Val v = zero();
  auto& r = std::get<std::vector<uint8_t>>(v.v);
  for (int i = 0; i < n_; ++i) r[i] = (uint8_t)((p_ - a.fq()[i]) % p_);
  return v;
}

std::vector<uint8_t> FiniteField::reduce(std::vector<int> c) const {
  if ((int)c.size() < n_) c.resize(n_, 0);
  for (int i = (int)c.size() - 1; i >= n_; --i) {
    int v = c[i] % p_;
    if (v)
      for (int j = 0; j <= n_; ++j)
        c[i - n_ + j] = ((c[i - n_ + j] - v * mod_[j]) % p_ + p_ * p_) % p_;
  }
  std::vector<uint8_t> r(n_, 0);
  for (int i = 0; i < n_; ++i) r[i] = (uint8_t)(((c[i] % p_) + p_) % p_);
  return r;
}

Val FiniteField::mul(const Val& a, const Val& b) const {
  std::vector<int> c(2 * n_ - 1, 0);
  for (int i = 0; i < n_; ++i) {
    if (!a.fq()[i]) continue;
    for (int j = 0; j < n_; ++j) c[i + j] = (c[i + j] + a.fq()[i] * b.fq()[j]) % p_;
  }
  Val v;
  v.F = shared_from_this();
  v.v = reduce(std::move(c));
  return v;
}

Val FiniteField::inv(const Val& a) const {
  if (is_zero(a)) fail(errc::bad_argument, "inverse of zero");
  // extended Euclid in F_p[x] against the modulus
  std::vector<int> r0(mod_.begin(), mod_.end()), r1(a.fq().begin(), a.fq().end());
  std::vector<int> s0{0}, s1{1};
  auto deg = [&](const std::vector<int>& f) {
    for (int i = (int)f.size() - 1; i >= 0; --i)
      if (f[i] % p_) return i;
    return -1;
  };
  auto invp = [&](int x) {
    int r = 1, b = ((x % p_) + p_) % p_;
    for (int e = p_ - 2; e; e >>= 1) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
    }
    return r;
  };
  while (deg(r1) > 0) {
    int d0 = deg(r0), d1 = deg(r1);
    if (d0 < d1) {
      std::swap(r0, r1);
      std::swap(s0, s1);
      continue;
    }
    int c = (r0[d0] * invp(r1[d1])) % p_;
    int shift = d0 - d1;
    if ((int)s0.size() < (int)s1.size() + shift) s0.resize(s1.size() + shift, 0);
    for (int i = 0; i <= d1; ++i) r0[i + shift] = ((r0[i + shift] - c * r1[i]) % p_ + p_ * p_) % p_;
    for (size_t i = 0; i < s1.size(); ++i)
      s0[i + shift] = ((s0[i + shift] - c * s1[i]) % p_ + p_ * p_) % p_;
  }
  if (deg(r1) != 0) fail(errc::generic, "inverse failed; modulus not coprime");
  int c = invp(r1[0]);
  std::vector<int> s(s1.size());
  for (size_t i = 0; i < s1.size(); ++i) s[i] = (s1[i] * c) % p_;
  Val v;
  v.F = shared_from_this();
  v.v = reduce(std::move(s));
  return v;
}

bool FiniteField::eq(const Val& a, const Val& b) const { return a.fq() == b.fq(); }

bool FiniteField::is_zero(const Val& a) const {
  for (auto c : a.fq())
    if (c) return false;
  return true;
}

std::string FiniteField::str(const Val& a) const {
  if (n_ == 1) return std::to_string((int)a.fq()[0]);
  std::string s;
  for (int i = n_ - 1; i >= 0; --i) {
    int c = a.fq()[i];
    if (!c) continue;
    if (!s.empty()) s += "+";
    if (i == 0)
      s += std::to_string(c);
    else {
      if (c != 1) s += std::to_string(c) + "*";
      s += "u";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

Val FiniteField::parse(const std::string& text) const {
  auto R = std::make_shared<PolyRing>(p_, std::vector<std::string>{"u"});
  PPoly f = parse_poly(R, text);
  std::vector<int> c;
  for (auto& tm : f.t) {
    unsigned e = mono_get(*R, tm.mono, 0);
    if (c.size() <= e) c.resize(e + 1, 0);
    c[e] = tm.c;
  }
  if (c.empty()) return zero();
  Val v;
  v.F = shared_from_this();
  v.v = reduce(std::move(c));
  return v;
}

Val FiniteField::generator(int i) const {
  if (i != 0) fail(errc::bad_argument, "finite field has one generator");
  Val v = zero();
  if (n_ == 1) return one();
  std::get<std::vector<uint8_t>>(v.v)[1] = 1;
  return v;
}

Val FiniteField::element_at(uint64_t idx) const {
  Val v = zero();
  auto& r = std::get<std::vector<uint8_t>>(v.v);
  for (int i = 0; i < n_; ++i) {
    r[i] = (uint8_t)(idx % p_);
    idx /= p_;
  }
  return v;
}

uint64_t FiniteField::index_of(const Val& a) const {
  uint64_t idx = 0;
  for (int i = n_ - 1; i >= 0; --i) idx = idx * p_ + a.fq()[i];
  return idx;
}

Val FiniteField::sample(Rng& rng) const { return element_at(rng.below(q_)); }

uint32_t FiniteField::Tables::neg(uint32_t a) const {
  if (p == 2 || !a) return a;
  return mul(a, expt[(q - 1) / 2]);  // multiply by -1 = g^((q-1)/2)
}

uint32_t FiniteField::Tables::pow(uint32_t a, uint64_t e) const {
  if (!a) return e ? 0 : 1;
  return expt[(uint64_t)logt[a] * (e % (q - 1)) % (q - 1)];
}

const FiniteField::Tables* FiniteField::tables() const {
  if (q_ > kTableLimit) return nullptr;
  if (tables_) return tables_.get();
  auto T = std::make_shared<Tables>();
  T->q = (uint32_t)q_;
  T->p = p_;
  // find a primitive element by direct order computation
  std::vector<uint64_t> factors;
  uint64_t m = q_ - 1;
  for (uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  if (m > 1) factors.push_back(m);
  Val g = zero();
  for (uint64_t i = 2; i < q_; ++i) {
    Val cand = element_at(i);
    bool prim = true;
    for (uint64_t f : factors)
      if (eq(pow(cand, (long long)((q_ - 1) / f)), one())) {
        prim = false;
        break;
      }
    if (prim) {
      g = cand;
      break;
    }
  }
  if (q_ == 2) g = one();
  T->logt.assign(q_, 0);
  T->expt.assign(q_ - 1, 0);
  Val x = one();
  for (uint64_t k = 0; k < q_ - 1; ++k) {
    uint32_t idx = (uint32_t)index_of(x);
    T->expt[k] = idx;
    T->logt[idx] = (uint32_t)k;
    x = mul(x, g);
  }
  T->addt.assign(q_ * q_, 0);
  for (uint64_t a = 0; a < q_; ++a)
    for (uint64_t b = 0; b < q_; ++b)
      T->addt[a * q_ + b] = (uint32_t)index_of(add(element_at(a), element_at(b)));
  tables_ = T;
  return tables_.get();
}

// ---- FunctionField ---------------------------------------------------------

FunctionField::FunctionField(RingPtr r) : ring_(std::move(r)) {
  std::string vs;
  for (int i = 0; i < ring_->nvars(); ++i) {
    if (i) vs += ",";
    vs += ring_->vars[i];
  }
  desc_ = "Fun p=" + std::to_string(ring_->p) + " vars=" + vs;
}

std::shared_ptr<const FunctionField> FunctionField::make(int p, std::vector<std::string> vars) {
  if (vars.empty()) fail(errc::bad_argument, "need at least one variable");
  return std::shared_ptr<const FunctionField>(
      new FunctionField(std::make_shared<PolyRing>(p, std::move(vars))));
}

Val FunctionField::make(PPoly num, PPoly den) const {
  if (den.is_zero()) fail(errc::bad_argument, "zero denominator");
  if (num.is_zero()) {
    Val v;
    v.F = shared_from_this();
    v.v = Frac{PPoly(ring_), PPoly::constant(ring_, 1)};
    return v;
  }
  PPoly g = gcd(num, den);
  if (!g.is_constant() || g.constant_value() != 1) {
    num = divexact(num, g);
    den = divexact(den, g);
  }
  // normalize the denominator to have leading coefficient 1
  int lc = den.lead().c;
  if (lc != 1) {
    int li = 1, b = lc, e = ring_->p - 2;
    while (e) {
      if (e & 1) li = li * b % ring_->p;
      b = b * b % ring_->p;
      e >>= 1;
    }
    num = scale(num, li);
    den = scale(den, li);
  }
  Val v;
  v.F = shared_from_this();
  v.v = Frac{std::move(num), std::move(den)};
  return v;
}

Val FunctionField::from_poly(PPoly f) const { return make(std::move(f), PPoly::constant(ring_, 1)); }

Val FunctionField::zero() const { return from_int(0); }
Val FunctionField::one() const { return from_int(1); }

Val FunctionField::from_int(long long c) const {
  Val v;
  v.F = shared_from_this();
  v.v = Frac{PPoly::constant(ring_, c), PPoly::constant(ring_, 1)};
  return v;
}

Val FunctionField::add(const Val& a, const Val& b) const {
  const Frac &x = a.frac(), &y = b.frac();
  return make(mixtwist::add(mixtwist::mul(x.num, y.den), mixtwist::mul(y.num, x.den)),
              mixtwist::mul(x.den, y.den));
}

Val FunctionField::neg(const Val& a) const {
  Val v;
  v.F = shared_from_this();
  v.v = Frac{mixtwist::neg(a.frac().num), a.frac().den};
  return v;
}

Val FunctionField::mul(const Val& a, const Val& b) const {
  const Frac &x = a.frac(), &y = b.frac();
  return make(mixtwist::mul(x.num, y.num), mixtwist::mul(x.den, y.den));
}

Val FunctionField::inv(const Val& a) const {
  if (a.frac().num.is_zero()) fail(errc::bad_argument, "inverse of zero");
  return make(a.frac().den, a.frac().num);
}

bool FunctionField::eq(const Val& a, const Val& b) const { return a.frac() == b.frac(); }
bool FunctionField::is_zero(const Val& a) const { return a.frac().num.is_zero(); }

std::string FunctionField::str(const Val& a) const {
  const Frac& f = a.frac();
  if (f.den.is_constant() && f.den.constant_value() == 1) return f.num.str();
  std::string n = f.num.str();
  if (f.num.t.size() > 1) n = "(" + n + ")";
  std::string d = f.den.str();
  if (f.den.t.size() > 1) d = "(" + d + ")";
  return n + "/" + d;
}

Val FunctionField::parse(const std::string& text) const {
  // split a top-level '/' if present
  int depth = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (text[i] == '/' && depth == 0)
      return make(parse_poly(ring_, text.substr(0, i)), parse_poly(ring_, text.substr(i + 1)));
  }
  return from_poly(parse_poly(ring_, text));
}

Val FunctionField::generator(int i) const { return from_poly(PPoly::variable(ring_, i)); }

Val FunctionField::sample(Rng& rng) const {
  // small random polynomial over a small random denominator; enough variety
  // for property tests without blowing up degrees
  auto rnd_poly = [&](int maxterms) {
    PPoly f = PPoly::constant(ring_, (long long)rng.below(ring_->p));
    int terms = 1 + (int)rng.below(maxterms);
    for (int t = 0; t < terms; ++t) {
      uint64_t m = 0;
      for (int v = 0; v < ring_->nvars(); ++v) m = mono_set(*ring_, m, v, (unsigned)rng.below(3));
      PPoly term(ring_);
      int c = 1 + (int)rng.below(ring_->p - 1);
      term.t.push_back({m, c});
      f = mixtwist::add(f, term);
    }
    return f;
  };
  PPoly num = rnd_poly(3);
  PPoly den(ring_);
  do {
    den = rnd_poly(2);
  } while (den.is_zero());
  return make(std::move(num), std::move(den));
}

Val FunctionField::derivative(const Val& a, int var) const {
  const Frac& f = a.frac();
  PPoly n = mixtwist::sub(mixtwist::mul(mixtwist::derivative(f.num, var), f.den),
                          mixtwist::mul(f.num, mixtwist::derivative(f.den, var)));
  return make(std::move(n), mixtwist::mul(f.den, f.den));
}

// ---- TowerField ------------------------------------------------------------

TowerField::TowerField(FieldPtr base, std::vector<Rel> rels)
    : base_(std::move(base)), rels_(std::move(rels)) {
  std::string s = "Tower over [" + base_->describe() + "]";
  for (auto& r : rels_) {
    s += " " + r.name + (r.kind == RelKind::sqrt ? "^2=" : "^2+" + r.name + "=") +
         base_->str(r.delta);
  }
  desc_ = s;
}

std::shared_ptr<const TowerField> TowerField::make(FieldPtr base, std::vector<Rel> rels) {
  if (rels.empty() || rels.size() > 4) fail(errc::bad_argument, "1..4 adjoined generators");
  for (auto& r : rels)
    if (!same_field(*r.delta.F, *base)) fail(errc::bad_argument, "delta not in base field");
  return std::shared_ptr<const TowerField>(new TowerField(std::move(base), std::move(rels)));
}

uint64_t TowerField::size() const {
  uint64_t b = base_->size();
  return b ? b << rels_.size() : 0;
}

Val TowerField::make(std::vector<Val> coords) const {
  if ((int)coords.size() != dim()) fail(errc::bad_argument, "coordinate count");
  Val v;
  v.F = shared_from_this();
  v.v = std::make_shared<const std::vector<Val>>(std::move(coords));
  return v;
}

Val TowerField::embed(const Val& base_elt) const {
  std::vector<Val> c(dim(), base_->zero());
  c[0] = base_elt;
  return make(std::move(c));
}

const Val& TowerField::coord(const Val& x, int mask) const { return x.tower()[mask]; }

Val TowerField::zero() const { return embed(base_->zero()); }
Val TowerField::one() const { return embed(base_->one()); }
Val TowerField::from_int(long long c) const { return embed(base_->from_int(c)); }

Val TowerField::add(const Val& a, const Val& b) const {
  std::vector<Val> c(dim(), base_->zero());
  for (int i = 0; i < dim(); ++i) c[i] = a.tower()[i] + b.tower()[i];
  return make(std::move(c));
}

Val TowerField::neg(const Val& a) const {
  std::vector<Val> c(dim(), base_->zero());
  for (int i = 0; i < dim(); ++i) c[i] = -a.tower()[i];
  return make(std::move(c));
}

Val TowerField::mul(const Val& a, const Val& b) const {
  // accumulate coefficient-wise, reducing squared generators by their
  // relations one bit at a time
  std::vector<Val> acc(dim(), base_->zero());
  // stack of (mask, coeff) pending reduction
  std::vector<std::pair<int, Val>> todo;
  for (int s = 0; s < dim(); ++s) {
    if (a.tower()[s].is_zero()) continue;
    for (int t = 0; t < dim(); ++t) {
      if (b.tower()[t].is_zero()) continue;
      todo.push_back({s ^ t ^ ((s & t) << 16), base_->mul(a.tower()[s], b.tower()[t])});
      // encode the set of squared generators in the high bits
    }
  }
  while (!todo.empty()) {
    auto [code, c] = todo.back();
    todo.pop_back();
    int sq = code >> 16, rest = code & 0xffff;
    if (!sq) {
      acc[rest] = acc[rest] + c;
      continue;
    }
    int i = 0;
    while (!(sq & (1 << i))) ++i;
    int sq2 = sq & ~(1 << i);
    const Rel& r = rels_[i];
    // a_i^2 = delta  or  a_i^2 = a_i + delta (char 2 artin-schreier)
    todo.push_back({(sq2 << 16) | rest, base_->mul(c, r.delta)});
    if (r.kind == RelKind::artin_schreier) {
      if (characteristic() != 2) fail(errc::wrong_characteristic, "artin-schreier tower needs p=2");
      todo.push_back({(sq2 << 16) | (rest | (1 << i)), c});
    }
  }
  return make(std::move(acc));
}

Val TowerField::inv(const Val& a) const {
  if (is_zero(a)) fail(errc::bad_argument, "inverse of zero");
  // solve (x * y) = 1 as a linear system over the base field
  int d = dim();
  // columns: multiplication of a by each basis monomial
  std::vector<std::vector<Val>> cols;
  for (int j = 0; j < d; ++j) {
    std::vector<Val> e(d, base_->zero());
    e[j] = base_->one();
    cols.push_back(mul(a, make(std::move(e))).tower());
  }
  // gaussian elimination on [cols | e0]
  std::vector<std::vector<Val>> M(d, std::vector<Val>(d + 1, base_->zero()));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M[i][j] = cols[j][i];
  M[0][d] = base_->one();
  int row = 0;
  std::vector<int> pivot_col(d, -1);
  for (int col = 0; col < d && row < d; ++col) {
    int pr = -1;
    for (int i = row; i < d; ++i)
      if (!M[i][col].is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[pr], M[row]);
    Val piv = base_->inv(M[row][col]);
    for (int j = col; j <= d; ++j) M[row][j] = M[row][j] * piv;
    for (int i = 0; i < d; ++i) {
      if (i == row || M[i][col].is_zero()) continue;
      Val f = M[i][col];
      for (int j = col; j <= d; ++j) M[i][j] = M[i][j] - f * M[row][j];
    }
    pivot_col[row] = col;
    ++row;
  }
  std::vector<Val> x(d, base_->zero());
  for (int i = 0; i < d; ++i)
    if (pivot_col[i] >= 0) x[pivot_col[i]] = M[i][d];
  Val r = make(std::move(x));
  if (!eq(mul(a, r), one())) fail(errc::generic, "tower inverse failed");
  return r;
}

bool TowerField::eq(const Val& a, const Val& b) const {
  for (int i = 0; i < dim(); ++i)
    if (a.tower()[i] != b.tower()[i]) return false;
  return true;
}

bool TowerField::is_zero(const Val& a) const {
  for (auto& c : a.tower())
    if (!c.is_zero()) return false;
  return true;
}

std::string TowerField::str(const Val& a) const {
  std::string s;
  for (int m = 0; m < dim(); ++m) {
    if (a.tower()[m].is_zero()) continue;
    std::string mono;
    for (size_t i = 0; i < rels_.size(); ++i)
      if (m & (1 << i)) mono += (mono.empty() ? "" : "*") + rels_[i].name;
    std::string c = base_->str(a.tower()[m]);
    if (!s.empty()) s += " + ";
    if (mono.empty())
      s += c;
    else
      s += "(" + c + ")*" + mono;
  }
  return s.empty() ? "0" : s;
}

Val TowerField::parse(const std::string&) const {
  fail(errc::parse_error, "tower element parsing is not supported");
}

int TowerField::num_generators() const { return base_->num_generators() + (int)rels_.size(); }

Val TowerField::generator(int i) const {
  int nb = base_->num_generators();
  if (i < nb) return embed(base_->generator(i));
  return adjoined(i - nb);
}

std::string TowerField::generator_name(int i) const {
  int nb = base_->num_generators();
  if (i < nb) return base_->generator_name(i);
  return rels_[i - nb].name;
}

Val TowerField::adjoined(int i) const {
  std::vector<Val> c(dim(), base_->zero());
  c[1 << i] = base_->one();
  return make(std::move(c));
}

Val TowerField::sample(Rng& rng) const {
  std::vector<Val> c(dim(), base_->zero());
  for (int i = 0; i < dim(); ++i) c[i] = base_->sample(rng);
  return make(std::move(c));
}

Val TowerField::element_at(uint64_t idx) const {
  uint64_t b = base_->size();
  if (!b) fail(errc::enumeration_bound, "tower base is infinite");
  std::vector<Val> c(dim(), base_->zero());
  for (int i = 0; i < dim(); ++i) {
    c[i] = base_->element_at(idx % b);
    idx /= b;
  }
  return make(std::move(c));
}

Val TowerField::as_conjugate(const Val& x, int gen) const {
  if (rels_[gen].kind != RelKind::artin_schreier)
    fail(errc::bad_argument, "conjugation needs an artin-schreier generator");
  // substitute a -> a + 1
  std::vector<Val> c(dim(), base_->zero());
  for (int m = 0; m < dim(); ++m) {
    if (x.tower()[m].is_zero()) continue;
    c[m] = c[m] + x.tower()[m];
    if (m & (1 << gen)) c[m ^ (1 << gen)] = c[m ^ (1 << gen)] + x.tower()[m];
  }
  return make(std::move(c));
}

// ---- description parsing ---------------------------------------------------

static std::string take_kv(std::istringstream& in, const std::string& key) {
  std::string tok;
  if (!(in >> tok) || tok.rfind(key + "=", 0) != 0)
    fail(errc::parse_error, "expected " + key + "=...");
  return tok.substr(key.size() + 1);
}

FieldPtr parse_field(const std::string& desc) {
  std::istringstream in(desc);
  std::string kind;
  in >> kind;
  if (kind == "Fq") {
    int p = std::stoi(take_kv(in, "p"));
    int n = std::stoi(take_kv(in, "n"));
    std::string mod = take_kv(in, "mod");
    if ((int)mod.size() != n + 1) fail(errc::parse_error, "modulus digit count");
    std::vector<uint8_t> m(n + 1);
    for (int i = 0; i <= n; ++i) m[n - i] = (uint8_t)(mod[i] - '0');
    return FiniteField::make(p, n, m);
  }
  if (kind == "Fun") {
    int p = std::stoi(take_kv(in, "p"));
    std::string vars = take_kv(in, "vars");
    std::vector<std::string> names;
    std::string cur;
    for (char c : vars) {
      if (c == ',') {
        names.push_back(cur);
        cur.clear();
      } else
        cur += c;
    }
    if (!cur.empty()) names.push_back(cur);
    return FunctionField::make(p, names);
  }
  fail(errc::parse_error, "unknown field kind '" + kind + "'");
}

}  // namespace mixtwist
