#ifndef MIXTWIST_PPOLY_HPP
#define MIXTWIST_PPOLY_HPP

// Multivariate polynomials over a prime field F_p.  These are the raw
// material for rational function fields; coefficients are held mod p and
// monomials are packed exponent vectors.  Terms are kept sorted in
// descending graded reverse lexicographic order.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mixtwist/common.hpp"

namespace mixtwist {

struct PolyRing {
  int p;                              // characteristic (prime)
  std::vector<std::string> vars;      // variable names
  int nvars() const { return (int)vars.size(); }
  int bits() const { return nvars() <= 1 ? 64 : 64 / nvars(); }
  uint64_t expmask() const { return bits() >= 64 ? ~0ull : ((1ull << bits()) - 1); }

  PolyRing(int p_, std::vector<std::string> names);
  int var_index(const std::string& name) const;  // -1 when absent
};

using RingPtr = std::shared_ptr<const PolyRing>;

struct Term {
  uint64_t mono;  // packed exponents
  int c;          // coefficient in [1, p)
  bool operator==(const Term& o) const = default;
};

class PPoly {
 public:
  RingPtr R;
  std::vector<Term> t;  // sorted descending grevlex, no zero coefficients

  PPoly() = default;
  explicit PPoly(RingPtr r) : R(std::move(r)) {}

  bool is_zero() const { return t.empty(); }
  bool is_constant() const { return t.empty() || (t.size() == 1 && t[0].mono == 0); }
  int constant_value() const { return t.empty() ? 0 : t[0].c; }

  static PPoly constant(const RingPtr& R, long long c);
  static PPoly variable(const RingPtr& R, int i, unsigned e = 1);

  unsigned deg(int var) const;   // degree in one variable
  unsigned total_deg() const;
  bool depends_on(int var) const { return deg(var) > 0; }

  const Term& lead() const { return t.front(); }

  bool operator==(const PPoly& o) const { return t == o.t; }

  std::string str() const;
};

// packing helpers
uint64_t mono_mul(const PolyRing& R, uint64_t a, uint64_t b);
unsigned mono_get(const PolyRing& R, uint64_t m, int var);
uint64_t mono_set(const PolyRing& R, uint64_t m, int var, unsigned e);
unsigned mono_total(const PolyRing& R, uint64_t m);
bool mono_divides(const PolyRing& R, uint64_t a, uint64_t b);        // a | b
uint64_t mono_div(const PolyRing& R, uint64_t b, uint64_t a);        // b / a
int mono_cmp_grevlex(const PolyRing& R, uint64_t a, uint64_t b);     // -1,0,1

PPoly add(const PPoly& a, const PPoly& b);
PPoly sub(const PPoly& a, const PPoly& b);
PPoly neg(const PPoly& a);
PPoly mul(const PPoly& a, const PPoly& b);
PPoly mul_term(const PPoly& a, uint64_t mono, int c);
PPoly scale(const PPoly& a, int c);
PPoly pow(const PPoly& a, unsigned e);

// exact division; throws generic error when division is not exact
PPoly divexact(const PPoly& a, const PPoly& b);
bool try_divexact(const PPoly& a, const PPoly& b, PPoly& out);

PPoly derivative(const PPoly& a, int var);

// gcd of multivariate polynomials (monic-normalized in grevlex lead)
PPoly gcd(const PPoly& a, const PPoly& b);

// p-th root when all exponents are divisible by p (coefficients are fixed
// by Frobenius on the prime field); returns false when impossible
bool pth_root(const PPoly& a, PPoly& out);

// exact square root; returns false when a is not a square in F_p[x...]
bool poly_sqrt(const PPoly& a, PPoly& out);

PPoly parse_poly(const RingPtr& R, const std::string& text);

}  // namespace mixtwist

#endif
