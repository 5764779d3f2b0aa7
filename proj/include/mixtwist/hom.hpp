#ifndef MIXTWIST_HOM_HPP
#define MIXTWIST_HOM_HPP

// Field homomorphisms given by generator images (identity on the prime
// field), and the blended / mixed field structures built from them.

#include <optional>
#include <vector>

#include "mixtwist/fields.hpp"

namespace mixtwist {

class FieldHom {
 public:
  FieldHom() = default;
  // images[i] is the image of dom->generator(i) in cod; for towers the
  // base-field part is handled by base_hom
  FieldHom(FieldPtr dom, FieldPtr cod, std::vector<Val> images,
           std::shared_ptr<const FieldHom> base_hom = nullptr);

  static FieldHom identity(const FieldPtr& f);
  static FieldHom frobenius(const FieldPtr& f);
  // x -> x^(p^m) on a finite field
  static FieldHom frobenius_power(const FiniteFieldPtr& f, int m);

  const FieldPtr& dom() const { return dom_; }
  const FieldPtr& cod() const { return cod_; }
  const std::vector<Val>& images() const { return images_; }

  Val operator()(const Val& x) const { return apply(x); }
  Val apply(const Val& x) const;

  FieldHom then(const FieldHom& g) const;  // g o this

  // equality of generator images (decides equality of homomorphisms)
  bool eq_on_generators(const FieldHom& o) const;

  std::string str() const;  // "s->t,t->s^2"

  static FieldHom parse(const FieldPtr& dom, const FieldPtr& cod, const std::string& text);

 private:
  FieldPtr dom_, cod_;
  std::vector<Val> images_;
  std::shared_ptr<const FieldHom> base_hom_;
};

// a field k with theta such that theta(theta(x)) = x^p
struct BlendedField {
  FieldPtr k;
  FieldHom theta;

  Val apply_theta(const Val& x) const { return theta(x); }
};

// check theta^2 = Frobenius: exhaustive when |k| <= 2^12, sampled otherwise
bool validate_blended(const BlendedField& b, int samples = 200, uint64_t seed = 0);

// theta = x -> x^(p^((n+1)/2)) on F_{p^n}, n odd
BlendedField tits_endomorphism(const FiniteFieldPtr& F);

// F_p(x_1..x_m, y_1..y_m) with theta: x_i -> y_i, y_i -> x_i^p; for m = 1 the
// variables are named s, t
BlendedField blended_function_field(int p, int m);

// K, L with kappa: K->L and lambda: L->K composing to the Frobenius of each
// side.  For the group-theoretic instances K plays the small field k and L
// the big field ell, with kappa the inclusion.
struct MixedField {
  FieldPtr K, L;
  FieldHom kappa, lambda;
  // the image of kappa inside L described as the constant field of formal
  // derivations (variable indices of L); empty for finite fields
  std::vector<int> subfield_derivations;

  bool visible() const;       // lambda is an isomorphism
  bool anti_visible() const;  // kappa is an isomorphism
};

// validates the two Frobenius composites on all generators
MixedField make_mixed_field(FieldPtr K, FieldPtr L, FieldHom kappa, FieldHom lambda,
                            std::vector<int> subfield_derivations = {});

// the visible mixed field m(F) = (F, F, fr, id)
MixedField visible_mixed_field(const FieldPtr& F);

// (F_2(a,b) ~ F_2(s^2,t), F_2(s,t)); kappa: a->s^2, b->t
MixedField plane_mixed_field();

// is x (an element of L) in the image of kappa?
bool in_subimage(const Val& x, const MixedField& m);

// rewrite x = kappa(y) in terms of K's generators; requires in_subimage(x)
Val kappa_preimage(const Val& x, const MixedField& m);

}  // namespace mixtwist

#endif
