#ifndef MIXTWIST_COMMON_HPP
#define MIXTWIST_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mixtwist {

enum class errc {
  generic,
  bad_argument,
  non_prime,
  no_tits_endomorphism,
  composition_mismatch,
  relation_not_preserved,
  wrong_characteristic,
  unsupported_subfield,
  undecidable,
  decision_failure,
  reducible_extension,
  size_exceeded,
  missing_limit,
  no_descent,
  grade_overflow,
  missing_pullback,
  degree_cap_exceeded,
  kernel_cap_exceeded,
  enumeration_bound,
  unsupported_type,
  not_in_group,
  form_not_preserved,
  invariant_failure,
  bound_exceeded,
  infinite_degree,
  parse_error,
};

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

// Deterministic RNG (splitmix64).  All randomized suites take an explicit
// seed; std:: distributions are avoided so output is stable across stdlibs.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed = 0) : state(seed + 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0, n)
  uint64_t below(uint64_t n) { return n ? next() % n : 0; }
  bool coin() { return next() & 1; }
};

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline uint64_t ipow(uint64_t b, unsigned e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace mixtwist

#endif
