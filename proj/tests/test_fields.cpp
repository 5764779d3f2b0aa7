#include "doctest.h"

#include <set>

#include "mixtwist/fieldops.hpp"
#include "mixtwist/fields.hpp"
#include "mixtwist/hom.hpp"

using namespace mixtwist;

// Independent irreducibility oracle: a monic polynomial of degree <= 3 over
// F_p is irreducible iff it has no root; degree 4+ is not needed here.
static bool oracle_irreducible_cubic_or_less(int p, const std::vector<uint8_t>& f) {
  int n = (int)f.size() - 1;
  REQUIRE(n <= 3);
  for (int x = 0; x < p; ++x) {
    long long v = 0, xp = 1;
    for (int i = 0; i <= n; ++i) {
      v = (v + f[i] * xp) % p;
      xp = xp * x % p;
    }
    if (v == 0) return false;
  }
  return n >= 1;
}

TEST_CASE("finite field construction is deterministic") {
  auto F2 = FiniteField::make(2, 1);
  CHECK(F2->size() == 2);
  CHECK(F2->describe() == "Fq p=2 n=1 mod=10");

  // oracle: enumerate monic cubics over F_2 in counter order; the first
  // irreducible one must be the modulus of F_8
  std::vector<uint8_t> first;
  for (int k = 0; k < 8 && first.empty(); ++k) {
    std::vector<uint8_t> f = {(uint8_t)(k & 1), (uint8_t)((k >> 1) & 1), (uint8_t)((k >> 2) & 1), 1};
    if (oracle_irreducible_cubic_or_less(2, f)) first = f;
  }
  REQUIRE(!first.empty());
  CHECK(first == std::vector<uint8_t>{1, 1, 0, 1});  // u^3 + u + 1

  auto F8 = FiniteField::make(2, 3);
  CHECK(F8->modulus() == first);
  CHECK(F8->describe() == "Fq p=2 n=3 mod=1011");

  CHECK_THROWS_AS((void)FiniteField::make(4, 2), error);
  CHECK_THROWS_AS((void)FiniteField::make(2, 0), error);
}

TEST_CASE("finite field arithmetic satisfies field axioms exhaustively") {
  for (auto [p, n] : {std::pair{2, 3}, {3, 2}, {5, 1}}) {
    auto F = FiniteField::make(p, n);
    uint64_t q = F->size();
    for (uint64_t i = 0; i < q; ++i) {
      Val a = F->element_at(i);
      CHECK(F->eq(F->add(a, F->zero()), a));
      CHECK(F->eq(F->mul(a, F->one()), a));
      CHECK(F->add(a, F->neg(a)).is_zero());
      if (!a.is_zero()) {
        CHECK(F->eq(F->mul(a, F->inv(a)), F->one()));
        // Lagrange: a^(q-1) = 1
        CHECK(F->eq(F->pow(a, (long long)(q - 1)), F->one()));
      }
      for (uint64_t j = 0; j < q; ++j) {
        Val b = F->element_at(j);
        CHECK(F->eq(F->add(a, b), F->add(b, a)));
        CHECK(F->eq(F->mul(a, b), F->mul(b, a)));
      }
    }
  }
}

TEST_CASE("finite field distributivity and associativity, sampled") {
  auto F = FiniteField::make(3, 3);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Val a = F->sample(rng), b = F->sample(rng), c = F->sample(rng);
    CHECK(F->eq(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c))));
    CHECK(F->eq(F->mul(F->mul(a, b), c), F->mul(a, F->mul(b, c))));
  }
}

TEST_CASE("fast tables agree with vector arithmetic") {
  for (auto [p, n] : {std::pair{2, 3}, {3, 2}}) {
    auto F = FiniteField::make(p, n);
    auto T = F->tables();
    REQUIRE(T != nullptr);
    uint64_t q = F->size();
    for (uint64_t i = 0; i < q; ++i)
      for (uint64_t j = 0; j < q; ++j) {
        Val a = F->element_at(i), b = F->element_at(j);
        CHECK(F->index_of(F->add(a, b)) == T->add((uint32_t)i, (uint32_t)j));
        CHECK(F->index_of(F->mul(a, b)) == T->mul((uint32_t)i, (uint32_t)j));
      }
    for (uint64_t i = 1; i < q; ++i)
      CHECK(F->index_of(F->inv(F->element_at(i))) == T->inv((uint32_t)i));
  }
}

TEST_CASE("tits endomorphism") {
  auto F2 = FiniteField::make(2, 1);
  BlendedField b2 = tits_endomorphism(F2);
  CHECK(b2.theta.eq_on_generators(FieldHom::identity(F2)));

  auto F8 = FiniteField::make(2, 3);
  BlendedField b8 = tits_endomorphism(F8);
  // theta(x) = x^4; theta(u) = u^2 + u under u^3 = u + 1
  Val u = F8->generator(0);
  CHECK(F8->eq(b8.theta(u), F8->parse("u^2+u")));
  CHECK(F8->eq(b8.theta(b8.theta(u)), F8->parse("u^2")));
  CHECK(validate_blended(b8));

  auto F4 = FiniteField::make(2, 2);
  CHECK_THROWS_WITH_AS((void)tits_endomorphism(F4), doctest::Contains("even degree"),
                       error);
  // oracle: no Galois power squares to Frobenius when n is even
  for (int j = 0; j < 2; ++j) {
    FieldHom cand = FieldHom::frobenius_power(F4, j);
    FieldHom sq = cand.then(cand);
    CHECK(!sq.eq_on_generators(FieldHom::frobenius(F4)));
  }
}

TEST_CASE("blended function field") {
  BlendedField b = blended_function_field(2, 1);
  auto F = std::dynamic_pointer_cast<const FunctionField>(b.k);
  Val s = F->generator(0), t = F->generator(1);
  CHECK(F->eq(b.theta(s), t));
  CHECK(F->eq(b.theta(t), F->mul(s, s)));
  CHECK(F->eq(b.theta(b.theta(s)), F->mul(s, s)));
  CHECK(F->eq(b.theta(F->add(s, t)), F->add(t, F->mul(s, s))));
  CHECK(validate_blended(b));

  BlendedField b3 = blended_function_field(3, 1);
  auto F3 = std::dynamic_pointer_cast<const FunctionField>(b3.k);
  CHECK(F3->eq(b3.theta(F3->generator(0)), F3->generator(1)));
  CHECK(F3->eq(b3.theta(F3->generator(1)), F3->pow(F3->generator(0), 3)));
  CHECK(validate_blended(b3));
}

TEST_CASE("function field normalization is canonical and idempotent") {
  auto F = FunctionField::make(3, {"s", "t"});
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    Val a = F->sample(rng), b = F->sample(rng);
    Val c = F->add(a, b);
    // re-normalizing the stored representative changes nothing
    const Frac& fr = c.frac();
    Val c2 = F->make(fr.num, fr.den);
    CHECK(F->eq(c, c2));
    CHECK(c2.frac().num == fr.num);
    CHECK(c2.frac().den == fr.den);
    if (!b.is_zero()) {
      Val d = F->div(a, b);
      CHECK(F->eq(F->mul(d, b), a));
    }
  }
  // gcd cancellation: (s^2 - t^2)/(s - t) = s + t
  Val num = F->parse("s^2-t^2"), den = F->parse("s-t");
  CHECK(F->eq(F->div(num, den), F->parse("s+t")));
}

TEST_CASE("mixed field validation") {
  // K = F_2(s,t), L = F_2(a,b), lambda: a->s^2, b->t, kappa: s->a, t->b^2
  auto K = FunctionField::make(2, {"s", "t"});
  auto L = FunctionField::make(2, {"a", "b"});
  FieldHom kappa = FieldHom::parse(K, L, "s->a,t->b^2");
  FieldHom lambda = FieldHom::parse(L, K, "a->s^2,b->t");
  MixedField m = make_mixed_field(K, L, kappa, lambda);
  CHECK(K->eq(m.lambda(m.kappa(K->generator(0))), K->parse("s^2")));

  // composition mismatch: lambda: a->s, b->t
  FieldHom bad = FieldHom::parse(L, K, "a->s,b->t");
  CHECK_THROWS_AS((void)make_mixed_field(K, L, kappa, bad), error);

  // visible field m(F_8)
  auto F8 = FiniteField::make(2, 3);
  MixedField v = visible_mixed_field(F8);
  CHECK(v.visible());
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    Val x = F8->sample(rng);
    CHECK(in_subimage(x, v));
  }
}

TEST_CASE("subfield membership via derivations") {
  MixedField m = plane_mixed_field();
  auto L = std::dynamic_pointer_cast<const FunctionField>(m.L);
  // s^2*t + t^3 has vanishing d/ds
  CHECK(in_subimage(L->parse("s^2*t+t^3"), m));
  CHECK(!in_subimage(L->parse("s"), m));
  CHECK(in_subimage(L->parse("s^2"), m));
  CHECK(in_subimage(L->parse("(s^2+t)/(s^4+t^3)"), m));
  CHECK(!in_subimage(L->parse("(s+t)/(s^2)"), m));

  // preimages satisfy kappa(preimage(x)) = x
  Rng rng(5);
  auto K = m.K;
  for (int i = 0; i < 50; ++i) {
    Val y = K->sample(rng);
    Val x = m.kappa(y);
    CHECK(in_subimage(x, m));
    Val back = kappa_preimage(x, m);
    CHECK(m.L->eq(m.kappa(back), x));
  }
}

TEST_CASE("is_square") {
  auto F9 = FiniteField::make(3, 2);
  Val g = F9->generator(0);
  Val w;
  CHECK(is_square(F9->mul(g, g), &w));
  CHECK(F9->eq(F9->mul(w, w), F9->mul(g, g)));
  // multiplicative group has even order; exactly (q-1)/2 + 1 squares
  int squares = 0;
  for (uint64_t i = 0; i < 9; ++i)
    if (is_square(F9->element_at(i))) ++squares;
  CHECK(squares == 5);

  auto F = FunctionField::make(3, {"s", "t"});
  CHECK(!is_square(F->parse("s")));
  Val wit;
  CHECK(is_square(F->parse("s^2*t^4"), &wit));
  CHECK(F->eq(wit, F->parse("s*t^2")));
  CHECK(is_square(F->parse("(s^2+2*s*t+t^2)/(t^2)"), &wit));
  CHECK(F->eq(F->mul(wit, wit), F->parse("(s^2+2*s*t+t^2)/(t^2)")));
  CHECK(!is_square(F->parse("s*t")));
  CHECK(!is_square(F->parse("2")));  // -1 is not a square mod 3

  // property: x^2 always a square with a correct witness
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    Val x = F->sample(rng);
    Val sq = F->mul(x, x), w2;
    CHECK(is_square(sq, &w2));
    CHECK(F->eq(F->mul(w2, w2), sq));
  }
}

TEST_CASE("char-2 square roots in function fields") {
  auto F = FunctionField::make(2, {"s", "t"});
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    Val x = F->sample(rng);
    Val sq = F->mul(x, x), w;
    CHECK(is_square(sq, &w));
    CHECK(F->eq(w, x));  // unique square roots in characteristic 2
  }
  CHECK(!is_square(F->parse("s")));
  CHECK(!is_square(F->parse("s+t")));
}

TEST_CASE("extend_tits_p3") {
  BlendedField b = blended_function_field(3, 1);
  auto F = std::dynamic_pointer_cast<const FunctionField>(b.k);
  Val s = F->generator(0), t = F->generator(1);

  SUBCASE("already a square") {
    auto r = extend_tits_p3(b, F->parse("s^2*t^4"));
    auto* sq = std::get_if<AlreadySquare>(&r);
    REQUIRE(sq != nullptr);
    CHECK(F->eq(sq->witness, F->parse("s*t^2")));
  }

  SUBCASE("degree-4 extension for delta = s") {
    auto r = extend_tits_p3(b, s);
    auto* ext = std::get_if<TitsExtension>(&r);
    REQUIRE(ext != nullptr);
    auto tower = std::dynamic_pointer_cast<const TowerField>(ext->tower.k);
    REQUIRE(tower);
    CHECK(tower->dim() == 4);
    Val r1 = tower->adjoined(0), r2 = tower->adjoined(1);
    // theta: sqrt(s) -> sqrt(t) -> s*sqrt(s)
    CHECK(tower->eq(ext->tower.theta(r1), r2));
    CHECK(tower->eq(ext->tower.theta(r2), tower->mul(tower->embed(s), r1)));
    CHECK(tower->eq(tower->mul(ext->sqrt_delta, ext->sqrt_delta), tower->embed(s)));
    // theta^2 = Frobenius on the adjoined generator: theta^2(r1) = r1^3
    CHECK(tower->eq(ext->tower.theta(ext->tower.theta(r1)), tower->pow(r1, 3)));

    // extended theta is multiplicative on all 16 products of basis elements
    std::vector<Val> basis;
    for (int m = 0; m < 4; ++m) {
      std::vector<Val> c(4, F->zero());
      c[m] = F->one();
      basis.push_back(tower->make(c));
    }
    for (auto& x : basis)
      for (auto& y : basis)
        CHECK(tower->eq(ext->tower.theta(tower->mul(x, y)),
                        tower->mul(ext->tower.theta(x), ext->tower.theta(y))));

    // theta^2 = Frobenius on random tower elements
    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
      Val x = tower->sample(rng);
      CHECK(tower->eq(ext->tower.theta(ext->tower.theta(x)), tower->pow(x, 3)));
    }
  }

  SUBCASE("no extension for delta = -1 over F_3 with theta = id") {
    auto F3 = FiniteField::make(3, 1);
    BlendedField b3 = tits_endomorphism(F3);
    auto r = extend_tits_p3(b3, F3->from_int(-1));
    auto* no = std::get_if<NoTitsExtension>(&r);
    REQUIRE(no != nullptr);
    // obstruction witness x satisfies delta = -x^(theta-1)
    Val x = no->obstruction;
    CHECK(F3->eq(F3->from_int(-1), F3->neg(F3->div(b3.theta(x), x))));
  }
}

TEST_CASE("no-solution checks at p=3") {
  for (int n : {1, 3, 5}) {
    auto F = FiniteField::make(3, n);
    BlendedField b = tits_endomorphism(F);
    auto rep = no_solution_checks_p3(b);
    CHECK(rep.ok());
    CHECK(rep.units_checked == F->size() - 1);
  }
  // sanity inversion: x^2 = 1 does have solutions
  auto F3 = FiniteField::make(3, 1);
  int sols = 0;
  for (uint64_t i = 1; i < 3; ++i)
    if (F3->eq(F3->pow(F3->element_at(i), 2), F3->one())) ++sols;
  CHECK(sols == 2);
}

TEST_CASE("Artin-Schreier maps") {
  auto F4 = FiniteField::make(2, 2);
  // wp values over F_4 = {0,1,w,w+1} are {0,0,1,1}
  std::set<uint64_t> img;
  for (uint64_t i = 0; i < 4; ++i) img.insert(F4->index_of(wp(F4->element_at(i))));
  CHECK(img == std::set<uint64_t>{0, 1});

  auto F2 = FiniteField::make(2, 1);
  MixedField v2 = visible_mixed_field(F2);
  auto [a, bb] = wp_tilde(F2->one(), F2->zero(), v2);
  CHECK(F2->eq(a, F2->one()));
  CHECK(F2->eq(bb, F2->one()));  // (x + y, x + y) on the visible prime field

  CHECK_THROWS_AS((void)wp(FiniteField::make(3, 1)->one()), error);
}

TEST_CASE("etale2 classification over visible finite fields") {
  for (int n : {1, 2, 3, 4}) {
    auto F = FiniteField::make(2, n);
    MixedField m = visible_mixed_field(F);
    auto cls = etale2_classify(m);
    CHECK(cls.reps.size() == 2);
    CHECK(cls.ord_reps.size() == 2);
    CHECK(cls.maps_mutually_inverse);
  }
  // representative canonical choice for (F_2, F_2): (0,0) and (1,0)
  auto F2 = FiniteField::make(2, 1);
  auto cls = etale2_classify(visible_mixed_field(F2));
  CHECK(F2->index_of(cls.reps[0].first) == 0);
  CHECK(F2->index_of(cls.reps[0].second) == 0);
  CHECK(F2->index_of(cls.reps[1].first) == 1);
  CHECK(F2->index_of(cls.reps[1].second) == 0);
}

TEST_CASE("etale2 witness identities over the function-field mixed field") {
  MixedField m = plane_mixed_field();
  CHECK(etale2_witness_identities(m, 100, 41));
}

TEST_CASE("tower field arithmetic") {
  auto F = FunctionField::make(2, {"s", "t"});
  Val delta = F->generator(1);  // t
  auto T = TowerField::make(F, {{TowerField::RelKind::artin_schreier, "w", delta}});
  Val w = T->adjoined(0);
  // w^2 = w + t
  CHECK(T->eq(T->mul(w, w), T->add(w, T->embed(delta))));
  Rng rng(31);
  for (int i = 0; i < 50; ++i) {
    Val x = T->sample(rng);
    if (x.is_zero()) continue;
    CHECK(T->eq(T->mul(x, T->inv(x)), T->one()));
    Val y = T->sample(rng), z = T->sample(rng);
    CHECK(T->eq(T->mul(x, T->add(y, z)), T->add(T->mul(x, y), T->mul(x, z))));
    CHECK(T->eq(T->mul(T->mul(x, y), z), T->mul(x, T->mul(y, z))));
  }
  // Galois conjugate w -> w + 1 is multiplicative
  for (int i = 0; i < 30; ++i) {
    Val x = T->sample(rng), y = T->sample(rng);
    CHECK(T->eq(T->as_conjugate(T->mul(x, y), 0),
                T->mul(T->as_conjugate(x, 0), T->as_conjugate(y, 0))));
  }
}

TEST_CASE("field description round trips") {
  auto F8 = FiniteField::make(2, 3);
  auto F8b = parse_field(F8->describe());
  CHECK(F8b->describe() == F8->describe());
  auto Fn = FunctionField::make(2, {"s", "t"});
  CHECK(parse_field(Fn->describe())->describe() == Fn->describe());
}
