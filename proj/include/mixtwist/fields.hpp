#ifndef MIXTWIST_FIELDS_HPP
#define MIXTWIST_FIELDS_HPP

// Exact arithmetic in the fields of characteristic p that the rest of the
// library is built on: finite fields F_{p^n} with a deterministically chosen
// modulus, multivariate rational function fields F_p(x_1,...), and towers of
// degree-2 extensions.  All values are immutable; a Val carries a pointer to
// its field and a payload.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mixtwist/common.hpp"
#include "mixtwist/ppoly.hpp"

namespace mixtwist {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

struct Frac {
  PPoly num, den;
  bool operator==(const Frac& o) const { return num == o.num && den == o.den; }
};

class Val {
 public:
  FieldPtr F;
  std::variant<std::monostate,
               std::vector<uint8_t>,                       // finite field coefficients
               Frac,                                       // rational function
               std::shared_ptr<const std::vector<Val>>>    // tower coordinates
      v;

  Val() = default;

  const std::vector<uint8_t>& fq() const { return std::get<std::vector<uint8_t>>(v); }
  const Frac& frac() const { return std::get<Frac>(v); }
  const std::vector<Val>& tower() const { return *std::get<std::shared_ptr<const std::vector<Val>>>(v); }

  Val operator+(const Val& o) const;
  Val operator-(const Val& o) const;
  Val operator*(const Val& o) const;
  Val operator/(const Val& o) const;
  Val operator-() const;
  bool operator==(const Val& o) const;
  bool operator!=(const Val& o) const { return !(*this == o); }
  bool is_zero() const;
  std::string str() const;
};

class Field : public std::enable_shared_from_this<Field> {
 public:
  virtual ~Field() = default;

  virtual int characteristic() const = 0;
  virtual uint64_t size() const = 0;  // 0 when infinite
  const std::string& describe() const { return desc_; }

  virtual Val zero() const = 0;
  virtual Val one() const = 0;
  virtual Val from_int(long long c) const = 0;
  virtual Val add(const Val& a, const Val& b) const = 0;
  virtual Val neg(const Val& a) const = 0;
  virtual Val mul(const Val& a, const Val& b) const = 0;
  virtual Val inv(const Val& a) const = 0;
  virtual bool eq(const Val& a, const Val& b) const = 0;
  virtual bool is_zero(const Val& a) const = 0;
  virtual std::string str(const Val& a) const = 0;
  virtual Val parse(const std::string& text) const = 0;

  // generators as targets for homomorphisms (fixed on the prime field)
  virtual int num_generators() const = 0;
  virtual Val generator(int i) const = 0;
  virtual std::string generator_name(int i) const = 0;

  // enumeration of a finite field; index in [0, size())
  virtual Val element_at(uint64_t idx) const;

  // deterministic random element, never too large to compute with
  virtual Val sample(Rng& rng) const = 0;

  Val sub(const Val& a, const Val& b) const { return add(a, neg(b)); }
  Val div(const Val& a, const Val& b) const { return mul(a, inv(b)); }
  Val pow(const Val& a, long long e) const;
  Val frobenius(const Val& a) const { return pow(a, characteristic()); }

 protected:
  std::string desc_;
};

inline bool same_field(const Field& a, const Field& b) {
  return &a == &b || a.describe() == b.describe();
}

// ---------------------------------------------------------------------------

class FiniteField : public Field {
 public:
  // modulus chosen as the first irreducible monic polynomial of degree n in
  // base-p counter order of the low coefficients
  static std::shared_ptr<const FiniteField> make(int p, int n);
  // explicit modulus (low-to-high coefficients, length n+1, monic)
  static std::shared_ptr<const FiniteField> make(int p, int n, std::vector<uint8_t> modulus);

  int characteristic() const override { return p_; }
  uint64_t size() const override { return q_; }
  int degree() const { return n_; }
  const std::vector<uint8_t>& modulus() const { return mod_; }

  Val zero() const override;
  Val one() const override;
  Val from_int(long long c) const override;
  Val add(const Val& a, const Val& b) const override;
  Val neg(const Val& a) const override;
  Val mul(const Val& a, const Val& b) const override;
  Val inv(const Val& a) const override;
  bool eq(const Val& a, const Val& b) const override;
  bool is_zero(const Val& a) const override;
  std::string str(const Val& a) const override;
  Val parse(const std::string& text) const override;
  int num_generators() const override { return 1; }
  Val generator(int i) const override;
  std::string generator_name(int) const override { return "u"; }
  Val element_at(uint64_t idx) const override;
  Val sample(Rng& rng) const override;

  uint64_t index_of(const Val& a) const;  // base-p digits of the coefficient vector

  // fast index-based arithmetic for enumeration-heavy callers; built when
  // q <= kTableLimit
  struct Tables {
    uint32_t q = 0;
    int p = 0;
    std::vector<uint32_t> logt, expt;  // discrete logs w.r.t. a primitive element
    std::vector<uint32_t> addt;        // q*q addition table
    uint32_t add(uint32_t a, uint32_t b) const { return addt[a * q + b]; }
    uint32_t mul(uint32_t a, uint32_t b) const {
      if (!a || !b) return 0;
      return expt[(logt[a] + logt[b]) % (q - 1)];
    }
    uint32_t inv(uint32_t a) const { return expt[(q - 1 - logt[a]) % (q - 1)]; }
    uint32_t neg(uint32_t a) const;
    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t frob(uint32_t a) const { return pow(a, p); }
  };
  static constexpr uint32_t kTableLimit = 4096;
  const Tables* tables() const;  // nullptr when the field is too large

  static bool poly_irreducible(int p, const std::vector<uint8_t>& f);

 private:
  FiniteField(int p, int n, std::vector<uint8_t> modulus);
  std::vector<uint8_t> reduce(std::vector<int> c) const;
  int p_, n_;
  uint64_t q_;
  std::vector<uint8_t> mod_;
  mutable std::shared_ptr<Tables> tables_;
};

using FiniteFieldPtr = std::shared_ptr<const FiniteField>;

// ---------------------------------------------------------------------------

class FunctionField : public Field {
 public:
  static std::shared_ptr<const FunctionField> make(int p, std::vector<std::string> vars);

  int characteristic() const override { return ring_->p; }
  uint64_t size() const override { return 0; }
  const RingPtr& ring() const { return ring_; }

  Val make(PPoly num, PPoly den) const;  // normalizes
  Val from_poly(PPoly f) const;

  Val zero() const override;
  Val one() const override;
  Val from_int(long long c) const override;
  Val add(const Val& a, const Val& b) const override;
  Val neg(const Val& a) const override;
  Val mul(const Val& a, const Val& b) const override;
  Val inv(const Val& a) const override;
  bool eq(const Val& a, const Val& b) const override;
  bool is_zero(const Val& a) const override;
  std::string str(const Val& a) const override;
  Val parse(const std::string& text) const override;
  int num_generators() const override { return ring_->nvars(); }
  Val generator(int i) const override;
  std::string generator_name(int i) const override { return ring_->vars[i]; }
  Val sample(Rng& rng) const override;

  // formal partial derivative of a rational function
  Val derivative(const Val& a, int var) const;

 private:
  explicit FunctionField(RingPtr r);
  RingPtr ring_;
};

using FunctionFieldPtr = std::shared_ptr<const FunctionField>;

// ---------------------------------------------------------------------------

// Iterated degree-2 extensions: each adjoined generator a_i satisfies either
// a^2 = delta (kind::sqrt) or a^2 + a = delta (kind::artin_schreier) with
// delta in the base field.  Elements are coordinate vectors over the base in
// the 2^m monomial basis.
class TowerField : public Field {
 public:
  enum class RelKind { sqrt, artin_schreier };
  struct Rel {
    RelKind kind;
    std::string name;
    Val delta;  // element of the base field
  };

  static std::shared_ptr<const TowerField> make(FieldPtr base, std::vector<Rel> rels);

  int characteristic() const override { return base_->characteristic(); }
  uint64_t size() const override;
  const FieldPtr& base() const { return base_; }
  const std::vector<Rel>& rels() const { return rels_; }
  int dim() const { return 1 << rels_.size(); }

  Val make(std::vector<Val> coords) const;
  Val embed(const Val& base_elt) const;
  const Val& coord(const Val& x, int mask) const;

  Val zero() const override;
  Val one() const override;
  Val from_int(long long c) const override;
  Val add(const Val& a, const Val& b) const override;
  Val neg(const Val& a) const override;
  Val mul(const Val& a, const Val& b) const override;
  Val inv(const Val& a) const override;
  bool eq(const Val& a, const Val& b) const override;
  bool is_zero(const Val& a) const override;
  std::string str(const Val& a) const override;
  Val parse(const std::string& text) const override;
  int num_generators() const override;
  Val generator(int i) const override;  // base generators first, then adjoined
  std::string generator_name(int i) const override;
  Val sample(Rng& rng) const override;
  Val element_at(uint64_t idx) const override;

  Val adjoined(int i) const;  // the i-th adjoined generator as an element

  // Galois conjugate a_i -> a_i + 1 for an artin_schreier generator
  Val as_conjugate(const Val& x, int i) const;

 private:
  TowerField(FieldPtr base, std::vector<Rel> rels);
  FieldPtr base_;
  std::vector<Rel> rels_;
};

using TowerFieldPtr = std::shared_ptr<const TowerField>;

// parse a field description: "Fq p=2 n=3 mod=1011" or "Fun p=2 vars=s,t"
FieldPtr parse_field(const std::string& desc);

}  // namespace mixtwist

#endif
