#ifndef MIXTWIST_ALGEBRA_HPP
#define MIXTWIST_ALGEBRA_HPP

// Presented algebras over the library's fields with Groebner normal forms,
// algebra homomorphisms (possibly semi-linear over a field hom), twisted and
// mixed rings, and rational-point enumeration.

#include <functional>
#include <optional>

#include "mixtwist/hom.hpp"

namespace mixtwist {

// term orders: graded reverse lexicographic, or a two-block elimination
// order that eliminates the first `block` variables
struct TermOrd {
  enum class Kind { grevlex, elim_block } kind = Kind::grevlex;
  int block = 0;

  static TermOrd grevlex() { return {Kind::grevlex, 0}; }
  static TermOrd eliminate_first(int nblock) { return {Kind::elim_block, nblock}; }

  // -1, 0, 1 comparing exponent vectors
  int cmp(const std::vector<unsigned>& a, const std::vector<unsigned>& b) const;
};

struct MTerm {
  std::vector<unsigned> e;
  Val c;
};

class MPoly {
 public:
  FieldPtr K;
  int nvars = 0;
  std::vector<MTerm> t;  // sorted descending in the ambient order

  MPoly() = default;
  MPoly(FieldPtr k, int n) : K(std::move(k)), nvars(n) {}

  bool is_zero() const { return t.empty(); }
  unsigned total_deg() const;
  std::string str(const std::vector<std::string>& names) const;
};

MPoly mp_constant(const FieldPtr& K, int nvars, const Val& c);
MPoly mp_variable(const FieldPtr& K, int nvars, int i, unsigned e = 1);
MPoly mp_add(const MPoly& a, const MPoly& b, const TermOrd& o);
MPoly mp_sub(const MPoly& a, const MPoly& b, const TermOrd& o);
MPoly mp_neg(const MPoly& a);
MPoly mp_mul(const MPoly& a, const MPoly& b, const TermOrd& o);
MPoly mp_scale(const MPoly& a, const Val& c);
MPoly mp_pow(const MPoly& a, unsigned e, const TermOrd& o);
bool mp_eq(const MPoly& a, const MPoly& b);
MPoly mp_map_coeffs(const MPoly& a, const FieldPtr& cod, const std::function<Val(const Val&)>& f);
MPoly mp_derivative(const MPoly& a, int var, const TermOrd& o);

// full reduction of f modulo basis; deterministic
MPoly mp_reduce(const MPoly& f, const std::vector<MPoly>& basis, const TermOrd& o);

// Buchberger with a total-degree cap; throws degree_cap_exceeded
std::vector<MPoly> groebner(std::vector<MPoly> gens, const TermOrd& o, unsigned degree_cap);

// ---------------------------------------------------------------------------

class PresAlgebra {
 public:
  FieldPtr K;
  std::vector<std::string> gens;
  std::vector<MPoly> rels;
  TermOrd ord = TermOrd::grevlex();
  unsigned degree_cap = 12;

  PresAlgebra() = default;
  PresAlgebra(FieldPtr k, std::vector<std::string> names, std::vector<MPoly> relations = {},
              unsigned cap = 12);

  int nvars() const { return (int)gens.size(); }
  const std::vector<MPoly>& basis() const;  // cached Groebner basis
  MPoly normal_form(const MPoly& f) const;
  bool is_zero_mod(const MPoly& f) const { return normal_form(f).is_zero(); }

  MPoly parse(const std::string& text) const;
  std::string describe() const;  // "alg base=<field> gens=x,y rels=..."

 private:
  mutable std::shared_ptr<std::vector<MPoly>> gb_;
};

// algebra homomorphism determined by generator images, optionally semi-linear
// over a coefficient field hom
class AlgHom {
 public:
  const PresAlgebra* dom = nullptr;
  const PresAlgebra* cod = nullptr;
  std::vector<MPoly> images;
  std::optional<FieldHom> coeff;  // empty = identity on coefficients

  AlgHom() = default;
  AlgHom(const PresAlgebra& d, const PresAlgebra& c, std::vector<MPoly> imgs,
         std::optional<FieldHom> coeff_map = std::nullopt);

  MPoly apply(const MPoly& f) const;  // image, reduced in the codomain
  // every relation of the domain maps to zero in the codomain
  bool check() const;
  AlgHom then(const AlgHom& g) const;
};

// the coordinate Frobenius x_i -> x_i^p with coefficient Frobenius
AlgHom frobenius_hom(const PresAlgebra& A);

// ---------------------------------------------------------------------------

struct TwistedRing {
  PresAlgebra A;
  AlgHom phi;  // phi o phi = Frobenius mod the ideal
};

TwistedRing make_twisted_ring(PresAlgebra A, AlgHom phi);

struct MixedRing {
  PresAlgebra A, B;   // components over m.K and m.L
  AlgHom kap, lam;    // kap: A->B over kappa, lam: B->A over lambda
  MixedField m;
};

MixedRing make_mixed_ring(PresAlgebra A, PresAlgebra B, AlgHom kap, AlgHom lam, MixedField m);

// the twisted affine plane (k[x,y], f(x,y) -> f^theta(y, x^p)) over b
TwistedRing twisted_plane(const BlendedField& b);

// the mixed affine plane over m; the predicate accepts (a, b) in L^2 with the
// first coordinate in the subfield
MixedRing mixed_plane(const MixedField& m);

// ---------------------------------------------------------------------------

using Point = std::vector<Val>;

// all K-points of A (finite base field)
std::vector<Point> points_of_algebra(const PresAlgebra& A, uint64_t bound = 1 << 22);

struct TwistedPoints {
  std::vector<Point> points;              // solutions of alpha o phi = theta o alpha
  std::vector<Point> involution_fixed;    // fixed points of the involution (theta invertible)
  bool cross_check_ok = false;
};

// rational points of a twisted ring over a finite blended field
TwistedPoints points_twisted(const TwistedRing& R, const BlendedField& b);

// membership predicate form for infinite fields
bool twisted_point_predicate(const TwistedRing& R, const BlendedField& b, const Point& pt);

struct MixedPoints {
  // route A: pairs (u, v) satisfying the mixed-arrow square
  std::vector<std::pair<Point, Point>> pairs;
  // route B: v-points whose pullback through kap lands in the subfield
  std::vector<std::pair<Point, Point>> pullback;
  bool routes_agree = false;
};

MixedPoints points_mixed(const MixedRing& R, uint64_t bound = 1 << 22);

// predicate form: does the L-point v of B extend to a mixed point?
bool mixed_point_predicate(const MixedRing& R, const Point& v);

// ---------------------------------------------------------------------------

struct FactorizationVerdict {
  bool composite_is_frobenius = false;  // pi' o pi = F_{X/S} on generators
  bool pi_epic = false;                 // ring map injective (kernel trivial)
  bool dual_composite_ok = false;       // the Lemma's conclusion, checked directly
  bool relative() const { return composite_is_frobenius && pi_epic && dual_composite_ok; }
};

// pi: B->A (dual of X -> Xbar), pip: A->B (dual of Xbar -> Fr*X, coordinates
// of Fr*X identified with those of X)
FactorizationVerdict relative_factorization_check(const AlgHom& pi, const AlgHom& pip);

// kernel triviality of a linear algebra hom via elimination; nullopt when the
// degree cap is hit
std::optional<bool> kernel_trivial(const AlgHom& h, unsigned degree_cap);

// mixed ring from a relative factorization and a mixed base (components Q = B
// over m.K, W = A base-changed to m.L)
MixedRing mix_from_factorization(const AlgHom& pi, const AlgHom& pip, const MixedField& m);

// the mixed quadric of rank n over m (characteristic 2); q defaults to the
// hyperbolic-plus-square form x0^2 + x1 x2 + x3 x4 + ...
MixedRing mixed_quadric(const MixedField& m, int n);

// ---------------------------------------------------------------------------

struct MixedVectorSpace {
  MixedField m;
  // kap_mat is n2 x n1 over L (maps V_k -> V_l), lam_mat is n1 x n2 over K
  std::vector<std::vector<Val>> kap_mat, lam_mat;
  // optional declared p-structure for the strict subtype: composite
  // lam o kap must equal this matrix (entries over K)
  std::optional<std::vector<std::vector<Val>>> declared_pstr;
};

std::pair<int, int> partial_dims(const MixedVectorSpace& V);
bool check_declared_pstructure(const MixedVectorSpace& V);

// partial dimensions of a mixed ring via Jacobian ranks of the mixers
std::pair<int, int> jacobian_partial_dims(const MixedRing& R);

// is the kap-Jacobian identically zero mod the ideal?
bool kap_jacobian_zero(const MixedRing& R);

enum class Visibility { visible, anti_visible, invisible, inconclusive };
Visibility visibility_test(const MixedRing& R, unsigned degree_cap = 12);

// ---------------------------------------------------------------------------

// Weil restriction of a presented algebra along F_{q^d} / F_q: one new
// variable per basis element per original variable; relations expanded in the
// basis.  assemble maps a restricted point to the original point.
struct WeilRestriction {
  PresAlgebra restricted;
  FiniteFieldPtr big, small;
  std::vector<Val> basis;  // of big over small
  Point assemble(const Point& small_pt) const;
};

WeilRestriction weil_restrict(const PresAlgebra& A, const FiniteFieldPtr& big,
                              const FiniteFieldPtr& small);

// points-level right-adjoint identity for a visible base map: mixed points of
// R over m(big) correspond to componentwise-restricted mixed points over
// m(small)
bool weil_visible_pushforward_check(const MixedRing& R, const FiniteFieldPtr& big,
                                    const FiniteFieldPtr& small);

}  // namespace mixtwist

#endif
