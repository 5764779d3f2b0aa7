#ifndef MIXTWIST_FIELDOPS_HPP
#define MIXTWIST_FIELDOPS_HPP

// Square classes, one-step Tits extensions at p = 3, and the degree-2 etale
// classification machinery at p = 2.

#include <optional>
#include <variant>

#include "mixtwist/hom.hpp"

namespace mixtwist {

// complete for finite fields and rational function fields; returns a witness
// w with w^2 = x when true
bool is_square(const Val& x, Val* witness = nullptr);

// outcome of the one-step extension of a blended field at p = 3
struct AlreadySquare {
  Val witness;  // witness^2 = delta
};
struct TitsExtension {
  BlendedField tower;     // k(sqrt(d), sqrt(d^theta)) with theta extended
  Val sqrt_delta;         // a square root of the requested delta in the tower
};
struct NoTitsExtension {
  Val obstruction;  // x with delta = -x^(theta-1)
};
using ExtendResult = std::variant<AlreadySquare, TitsExtension, NoTitsExtension>;

ExtendResult extend_tits_p3(const BlendedField& b, const Val& delta);

struct NoSolutionReport {
  uint64_t units_checked = 0;
  bool theta_eq_ok = false;  // x^(theta-1) = -1 has no solutions
  bool power_eq_ok = false;  // x^(p-1) = -1 has no solutions
  bool ok() const { return theta_eq_ok && power_eq_ok; }
};

// exhaustive verification that x^(theta-1) = -1 and x^(p-1) = -1 have no
// solutions in a finite blended field with p = 3
NoSolutionReport no_solution_checks_p3(const BlendedField& b, uint64_t bound = 1 << 20);

// the Artin-Schreier map u -> u^2 + u
Val wp(const Val& u);

// the mixed Artin-Schreier map (x, y) -> (x + lambda(y), kappa(x) + y)
std::pair<Val, Val> wp_tilde(const Val& x, const Val& y, const MixedField& m);

struct Etale2Classes {
  // canonical representatives of coker(wp~) for a finite mixed field
  std::vector<std::pair<Val, Val>> reps;
  // representatives of coker(wp) on the K side
  std::vector<Val> ord_reps;
  bool maps_mutually_inverse = false;  // the two correspondence maps, on classes
};

// enumerates coker(wp~) over a finite mixed field and verifies that
// u -> (u, 0) and (u, v) -> u + lambda(v) are mutually inverse on classes
Etale2Classes etale2_classify(const MixedField& m);

// the witness identities wp~(a, kappa(a)) = (a^2+a, 0) and
// wp~(0, b) = (lambda(b), b), sampled over any mixed field
bool etale2_witness_identities(const MixedField& m, int samples, uint64_t seed);

}  // namespace mixtwist

#endif
