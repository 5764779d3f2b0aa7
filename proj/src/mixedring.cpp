#include <algorithm>

#include "mixtwist/algebra.hpp"

namespace mixtwist {

// ---- relative factorizations -------------------------------------------------

std::optional<bool> kernel_trivial(const AlgHom& h, unsigned degree_cap) {
  // graph ideal over the codomain's base field; eliminate the codomain
  // variables, then test the w-only elements against the domain ideal
  const PresAlgebra& D = *h.dom;
  const PresAlgebra& C = *h.cod;
  int nx = C.nvars(), nw = D.nvars();
  FieldPtr K = C.K;
  auto push = [&](const MPoly& f) {
    if (!h.coeff) return f;
    return mp_map_coeffs(f, K, [&](const Val& c) { return (*h.coeff)(c); });
  };
  PresAlgebra J(K, [&] {
    std::vector<std::string> names = C.gens;
    for (auto& g : D.gens) names.push_back(g + "_w");
    return names;
  }(), {}, degree_cap);
  J.ord = TermOrd::eliminate_first(nx);
  auto widen_cod = [&](const MPoly& f) {
    MPoly r(K, nx + nw);
    for (auto& tm : f.t) {
      std::vector<unsigned> e = tm.e;
      e.resize(nx + nw, 0);
      r.t.push_back({std::move(e), tm.c});
    }
    return r;
  };
  for (auto& rel : C.rels) J.rels.push_back(widen_cod(rel));
  for (int j = 0; j < nw; ++j) {
    MPoly g = mp_variable(K, nx + nw, nx + j);
    J.rels.push_back(mp_sub(g, widen_cod(h.images[j]), J.ord));
  }
  // domain ideal, coefficient-pushed, in the w-variables
  PresAlgebra Dw(K, D.gens, {}, degree_cap);
  for (auto& rel : D.rels) Dw.rels.push_back(push(rel));
  try {
    for (auto& g : J.basis()) {
      bool wonly = true;
      for (auto& tm : g.t)
        for (int v = 0; v < nx; ++v)
          if (tm.e[v]) wonly = false;
      if (!wonly) continue;
      // restrict to the w-variables and reduce against the domain ideal
      MPoly gw(K, nw);
      for (auto& tm : g.t)
        gw.t.push_back({std::vector<unsigned>(tm.e.begin() + nx, tm.e.end()), tm.c});
      if (!Dw.is_zero_mod(gw)) return false;
    }
  } catch (const error& e) {
    if (e.code() == errc::degree_cap_exceeded) return std::nullopt;
    throw;
  }
  return true;
}

FactorizationVerdict relative_factorization_check(const AlgHom& pi, const AlgHom& pip) {
  const PresAlgebra& A = *pi.cod;   // coordinate ring of X
  const PresAlgebra& B = *pi.dom;   // coordinate ring of Xbar
  int p = A.K->characteristic();
  FactorizationVerdict v;
  // pi' o pi = F_{X/S}: dual composite A -> B -> A is the coordinate p-power
  v.composite_is_frobenius = true;
  for (int i = 0; i < A.nvars(); ++i) {
    MPoly img = pi.apply(pip.images[i]);
    MPoly diff = mp_sub(img, mp_pow(mp_variable(A.K, A.nvars(), i), p, A.ord), A.ord);
    if (!A.is_zero_mod(diff)) v.composite_is_frobenius = false;
  }
  auto kt = kernel_trivial(pi, std::max(A.degree_cap, B.degree_cap));
  if (!kt) fail(errc::kernel_cap_exceeded, "kernel elimination hit the degree cap");
  v.pi_epic = *kt;
  // the Lemma's conclusion, verified directly: B -> A -> B is the p-power
  v.dual_composite_ok = true;
  for (int j = 0; j < B.nvars(); ++j) {
    MPoly img = pip.apply(pi.images[j]);
    MPoly diff = mp_sub(img, mp_pow(mp_variable(B.K, B.nvars(), j), p, B.ord), B.ord);
    if (!B.is_zero_mod(diff)) v.dual_composite_ok = false;
  }
  return v;
}

MixedRing mix_from_factorization(const AlgHom& pi, const AlgHom& pip, const MixedField& m) {
  const PresAlgebra& A0 = *pi.cod;
  const PresAlgebra& B0 = *pi.dom;
  if (!same_field(*A0.K, *m.K)) fail(errc::bad_argument, "factorization base must be m.K");
  // Q = B over K; W = A base-changed to L through kappa
  PresAlgebra Q(m.K, B0.gens, B0.rels, B0.degree_cap);
  PresAlgebra W(m.L, A0.gens, {}, A0.degree_cap);
  for (auto& rel : A0.rels)
    W.rels.push_back(mp_map_coeffs(rel, m.L, [&](const Val& c) { return m.kappa(c); }));
  std::vector<MPoly> kap_imgs;
  for (int j = 0; j < Q.nvars(); ++j)
    kap_imgs.push_back(mp_map_coeffs(pi.images[j], m.L, [&](const Val& c) { return m.kappa(c); }));
  std::vector<MPoly> lam_imgs;
  for (int i = 0; i < W.nvars(); ++i) lam_imgs.push_back(pip.images[i]);
  AlgHom kap(Q, W, kap_imgs, m.kappa);
  AlgHom lam(W, Q, lam_imgs, m.lambda);
  return make_mixed_ring(Q, W, kap, lam, m);
}

MixedRing mixed_quadric(const MixedField& m, int n) {
  if (m.K->characteristic() != 2) fail(errc::wrong_characteristic, "mixed quadric needs p=2");
  if (n < 2) fail(errc::bad_argument, "rank must be at least 2");
  // Q = K[x0..xn]/(x0^2 - q), q the hyperbolic-plus-square form
  std::vector<std::string> xg = {"x0"};
  for (int i = 1; i <= n; ++i) xg.push_back("x" + std::to_string(i));
  PresAlgebra Q(m.K, xg);
  MPoly q(m.K, n + 1);
  for (int i = 1; i + 1 <= n; i += 2) {
    MPoly prod = mp_mul(mp_variable(m.K, n + 1, i), mp_variable(m.K, n + 1, i + 1), Q.ord);
    q = mp_add(q, prod, Q.ord);
  }
  if (n % 2 == 1) q = mp_add(q, mp_pow(mp_variable(m.K, n + 1, n), 2, Q.ord), Q.ord);
  Q.rels.push_back(mp_sub(mp_pow(mp_variable(m.K, n + 1, 0), 2, Q.ord), q, Q.ord));

  std::vector<std::string> yg;
  for (int i = 1; i <= n; ++i) yg.push_back("y" + std::to_string(i));
  PresAlgebra W(m.L, yg);

  // kap: x_i -> y_i^2 (i >= 1), x0 -> q^kappa(y); lam: y_i -> x_i
  std::vector<MPoly> kimgs;
  MPoly qk(m.L, n);
  for (int i = 1; i + 1 <= n; i += 2) {
    MPoly prod = mp_mul(mp_variable(m.L, n, i - 1), mp_variable(m.L, n, i), W.ord);
    qk = mp_add(qk, prod, W.ord);
  }
  if (n % 2 == 1) qk = mp_add(qk, mp_pow(mp_variable(m.L, n, n - 1), 2, W.ord), W.ord);
  kimgs.push_back(qk);
  for (int i = 1; i <= n; ++i) kimgs.push_back(mp_pow(mp_variable(m.L, n, i - 1), 2, W.ord));
  AlgHom kap(Q, W, kimgs, m.kappa);
  std::vector<MPoly> limgs;
  for (int i = 1; i <= n; ++i) limgs.push_back(mp_variable(m.K, n + 1, i));
  AlgHom lam(W, Q, limgs, m.lambda);
  return make_mixed_ring(Q, W, kap, lam, m);
}

// ---- partial dimensions ---------------------------------------------------------

static int rank_over_field(std::vector<std::vector<Val>> M, const FieldPtr& K) {
  int rows = (int)M.size();
  if (!rows) return 0;
  int cols = (int)M[0].size();
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int pr = -1;
    for (int r = rank; r < rows; ++r)
      if (!M[r][c].is_zero()) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[pr], M[rank]);
    Val inv = K->inv(M[rank][c]);
    for (int j = c; j < cols; ++j) M[rank][j] = M[rank][j] * inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || M[r][c].is_zero()) continue;
      Val f = M[r][c];
      for (int j = c; j < cols; ++j) M[r][j] = M[r][j] - f * M[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::pair<int, int> partial_dims(const MixedVectorSpace& V) {
  return {rank_over_field(V.kap_mat, V.m.L), rank_over_field(V.lam_mat, V.m.K)};
}

bool check_declared_pstructure(const MixedVectorSpace& V) {
  if (!V.declared_pstr) return true;
  // composite of semi-linear maps: (lam o kap)(x) = lam_mat * lambda(kap_mat) x
  size_t n1 = V.kap_mat.empty() ? 0 : V.kap_mat[0].size();
  size_t n2 = V.lam_mat.empty() ? 0 : V.lam_mat[0].size();
  if (V.lam_mat.size() != n1 && !V.lam_mat.empty()) return false;
  std::vector<std::vector<Val>> comp(n1, std::vector<Val>(n1, V.m.K->zero()));
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < n1; ++j)
      for (size_t k = 0; k < n2; ++k)
        comp[i][j] = comp[i][j] + V.lam_mat[i][k] * V.m.lambda(V.kap_mat[k][j]);
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < n1; ++j)
      if (comp[i][j] != (*V.declared_pstr)[i][j]) return false;
  return true;
}

// rank of a matrix of residue classes via non-vanishing minors
static int rank_by_minors(const std::vector<std::vector<MPoly>>& M, const PresAlgebra& A) {
  int rows = (int)M.size();
  if (!rows) return 0;
  int cols = (int)M[0].size();
  int best = 0;
  // determinant of the submatrix given by row/col index lists, by Laplace
  std::function<MPoly(std::vector<int>, std::vector<int>)> det =
      [&](std::vector<int> ri, std::vector<int> ci) -> MPoly {
    if (ri.size() == 1) return M[ri[0]][ci[0]];
    MPoly acc(A.K, A.nvars());
    for (size_t k = 0; k < ri.size(); ++k) {
      std::vector<int> ri2(ri.begin() + 1, ri.end());
      std::vector<int> ci2 = ci;
      ci2.erase(ci2.begin() + k);
      MPoly sub = det(ri2, ci2);
      MPoly term = mp_mul(M[ri[0]][ci[k]], sub, A.ord);
      acc = (k % 2 == 0) ? mp_add(acc, term, A.ord) : mp_sub(acc, term, A.ord);
    }
    return acc;
  };
  int maxr = std::min(rows, cols);
  for (int r = 1; r <= maxr; ++r) {
    bool found = false;
    std::vector<int> ri(r), ci(r);
    std::function<bool(int, int)> pick_rows = [&](int pos, int start) -> bool {
      if (pos == r) {
        std::function<bool(int, int)> pick_cols = [&](int cpos, int cstart) -> bool {
          if (cpos == r) return !A.is_zero_mod(det(ri, ci));
          for (int c = cstart; c < cols; ++c) {
            ci[cpos] = c;
            if (pick_cols(cpos + 1, c + 1)) return true;
          }
          return false;
        };
        return pick_cols(0, 0);
      }
      for (int i = start; i < rows; ++i) {
        ri[pos] = i;
        if (pick_rows(pos + 1, i + 1)) return true;
      }
      return false;
    };
    if (pick_rows(0, 0)) {
      best = r;
      found = true;
    }
    if (!found) break;
  }
  return best;
}

bool kap_jacobian_zero(const MixedRing& R) {
  for (auto& im : R.kap.images)
    for (int v = 0; v < R.B.nvars(); ++v)
      if (!R.B.is_zero_mod(mp_derivative(im, v, R.B.ord))) return false;
  return true;
}

std::pair<int, int> jacobian_partial_dims(const MixedRing& R) {
  std::vector<std::vector<MPoly>> jk(R.A.nvars(), std::vector<MPoly>(R.B.nvars()));
  for (int i = 0; i < R.A.nvars(); ++i)
    for (int j = 0; j < R.B.nvars(); ++j)
      jk[i][j] = R.B.normal_form(mp_derivative(R.kap.images[i], j, R.B.ord));
  std::vector<std::vector<MPoly>> jl(R.B.nvars(), std::vector<MPoly>(R.A.nvars()));
  for (int j = 0; j < R.B.nvars(); ++j)
    for (int i = 0; i < R.A.nvars(); ++i)
      jl[j][i] = R.A.normal_form(mp_derivative(R.lam.images[j], i, R.A.ord));
  return {rank_by_minors(jk, R.B), rank_by_minors(jl, R.A)};
}

// ---- visibility -------------------------------------------------------------------

namespace {

enum class Tri { yes, no, unknown };

// is every codomain generator in the image of h, searching preimages of
// degree <= cap?  Sound "no"; "yes" only when the coefficient map is an
// isomorphism onto its codomain (identity or finite-field map).
Tri surjective_tri(const AlgHom& h, unsigned cap) {
  const PresAlgebra& D = *h.dom;
  const PresAlgebra& C = *h.cod;
  bool coeff_onto = !h.coeff || C.K->size() != 0;
  // enumerate domain monomials of degree <= cap
  std::vector<std::vector<unsigned>> monos;
  std::vector<unsigned> cur(D.nvars(), 0);
  std::function<void(int, unsigned)> rec = [&](int v, unsigned left) {
    if (v == D.nvars()) {
      monos.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= left; ++e) {
      cur[v] = e;
      rec(v + 1, left - e);
    }
    cur[v] = 0;
  };
  rec(0, cap);
  // normal forms of the h-images of the monomials
  std::vector<MPoly> imgs;
  for (auto& e : monos) {
    MPoly fe(D.K, D.nvars());
    fe.t.push_back({e, D.K->one()});
    imgs.push_back(h.apply(fe));
  }
  for (int g = 0; g < C.nvars(); ++g) {
    // solve sum_m d_m * imgs[m] = x_g as a linear system over the codomain
    // field, unknowns indexed by monomials
    MPoly target = C.normal_form(mp_variable(C.K, C.nvars(), g));
    // collect all codomain monomials appearing
    std::vector<std::vector<unsigned>> rows;
    auto row_of = [&](const std::vector<unsigned>& e) {
      for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i] == e) return (int)i;
      rows.push_back(e);
      return (int)rows.size() - 1;
    };
    for (auto& f : imgs)
      for (auto& tm : f.t) row_of(tm.e);
    for (auto& tm : target.t) row_of(tm.e);
    int R = (int)rows.size(), Ccols = (int)imgs.size();
    std::vector<std::vector<Val>> M(R, std::vector<Val>(Ccols + 1, C.K->zero()));
    for (int c = 0; c < Ccols; ++c)
      for (auto& tm : imgs[c].t) M[row_of(tm.e)][c] = tm.c;
    for (auto& tm : target.t) M[row_of(tm.e)][Ccols] = tm.c;
    // gaussian elimination; consistent?
    int rank = 0;
    for (int c = 0; c < Ccols && rank < R; ++c) {
      int pr = -1;
      for (int r = rank; r < R; ++r)
        if (!M[r][c].is_zero()) {
          pr = r;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[pr], M[rank]);
      Val inv = C.K->inv(M[rank][c]);
      for (int j = c; j <= Ccols; ++j) M[rank][j] = M[rank][j] * inv;
      for (int r = 0; r < R; ++r) {
        if (r == rank || M[r][c].is_zero()) continue;
        Val f = M[r][c];
        for (int j = c; j <= Ccols; ++j) M[r][j] = M[r][j] - f * M[rank][j];
      }
      ++rank;
    }
    bool inconsistent = false;
    for (int r = 0; r < R; ++r) {
      bool allz = true;
      for (int c = 0; c < Ccols; ++c)
        if (!M[r][c].is_zero()) allz = false;
      if (allz && !M[r][Ccols].is_zero()) inconsistent = true;
    }
    if (inconsistent) return Tri::no;
    if (!coeff_onto) return Tri::unknown;
  }
  return coeff_onto ? Tri::yes : Tri::unknown;
}

Tri iso_tri(const AlgHom& h, unsigned cap) {
  Tri s = surjective_tri(h, cap);
  if (s == Tri::no) return Tri::no;
  auto kt = kernel_trivial(h, cap);
  if (!kt) return Tri::unknown;
  if (!*kt) return Tri::no;
  return s;
}

}  // namespace

Visibility visibility_test(const MixedRing& R, unsigned degree_cap) {
  Tri vis = iso_tri(R.lam, degree_cap);
  if (vis == Tri::yes) return Visibility::visible;
  Tri anti = iso_tri(R.kap, degree_cap);
  if (anti == Tri::yes) return Visibility::anti_visible;
  if (vis == Tri::no && anti == Tri::no) return Visibility::invisible;
  return Visibility::inconclusive;
}

// ---- Weil restriction ----------------------------------------------------------

Point WeilRestriction::assemble(const Point& small_pt) const {
  int d = (int)basis.size();
  int nv = (int)restricted.gens.size() / d;
  Point out;
  for (int i = 0; i < nv; ++i) {
    Val x = big->zero();
    for (int j = 0; j < d; ++j) {
      // lift the small coordinate to the big field (prime subfield)
      Val lifted = big->from_int((long long)small_pt[i * d + j].fq()[0]);
      x = x + lifted * basis[j];
    }
    out.push_back(x);
  }
  return out;
}

WeilRestriction weil_restrict(const PresAlgebra& A, const FiniteFieldPtr& big,
                              const FiniteFieldPtr& small) {
  if (small->degree() != 1 || small->characteristic() != big->characteristic())
    fail(errc::bad_argument, "restriction implemented along prime subfields");
  int d = big->degree();
  WeilRestriction W;
  W.big = big;
  W.small = small;
  for (int j = 0; j < d; ++j) W.basis.push_back(big->pow(big->generator(0), j));
  std::vector<std::string> zg;
  for (auto& g : A.gens)
    for (int j = 0; j < d; ++j) zg.push_back(g + "_" + std::to_string(j));
  PresAlgebra R(std::static_pointer_cast<const Field>(small), zg);
  // substitute x_i = sum_j z_{ij} b_j into each relation and expand in basis
  int nz = (int)zg.size();
  TermOrd o = R.ord;
  for (auto& rel : A.rels) {
    // compute rel(assembled) as an MPoly over big in the z variables
    MPoly acc(std::static_pointer_cast<const Field>(big), nz);
    for (auto& tm : rel.t) {
      MPoly term = mp_constant(std::static_pointer_cast<const Field>(big), nz, tm.c);
      for (size_t v = 0; v < tm.e.size(); ++v) {
        if (!tm.e[v]) continue;
        MPoly lin(std::static_pointer_cast<const Field>(big), nz);
        for (int j = 0; j < d; ++j) {
          MPoly zv = mp_variable(std::static_pointer_cast<const Field>(big), nz, (int)v * d + j);
          lin = mp_add(lin, mp_scale(zv, W.basis[j]), o);
        }
        term = mp_mul(term, mp_pow(lin, tm.e[v], o), o);
      }
      acc = mp_add(acc, term, o);
    }
    // basis components become relations over the small field
    for (int j = 0; j < d; ++j) {
      MPoly comp(std::static_pointer_cast<const Field>(small), nz);
      for (auto& tm : acc.t) {
        int digit = tm.c.fq()[j];
        if (digit) comp.t.push_back({tm.e, small->from_int(digit)});
      }
      if (!comp.is_zero()) R.rels.push_back(comp);
    }
  }
  W.restricted = R;
  return W;
}

bool weil_visible_pushforward_check(const MixedRing& R, const FiniteFieldPtr& big,
                                    const FiniteFieldPtr& small) {
  int p = small->characteristic();
  int d = big->degree();
  WeilRestriction WA = weil_restrict(R.A, big, small);
  WeilRestriction WB = weil_restrict(R.B, big, small);
  // small-level mixer polynomials: components of kap images evaluated on
  // assembled coordinates
  int nzB = (int)WB.restricted.gens.size();
  auto bigF = std::static_pointer_cast<const Field>(big);
  TermOrd o = TermOrd::grevlex();
  auto assemble_poly = [&](const MPoly& f) {
    // f lives over big in R.B's variables; substitute assembled z-forms
    MPoly acc(bigF, nzB);
    for (auto& tm : f.t) {
      MPoly term = mp_constant(bigF, nzB, tm.c);
      for (size_t v = 0; v < tm.e.size(); ++v) {
        if (!tm.e[v]) continue;
        MPoly lin(bigF, nzB);
        for (int j = 0; j < d; ++j)
          lin = mp_add(lin, mp_scale(mp_variable(bigF, nzB, (int)v * d + j), WB.basis[j]), o);
        term = mp_mul(term, mp_pow(lin, tm.e[v], o), o);
      }
      acc = mp_add(acc, term, o);
    }
    return acc;
  };
  std::vector<std::vector<MPoly>> kap_small;  // [i][component]
  for (auto& im : R.kap.images) {
    MPoly asm_poly = assemble_poly(im);
    std::vector<MPoly> comps;
    for (int j = 0; j < d; ++j) {
      MPoly comp(std::static_pointer_cast<const Field>(small), nzB);
      for (auto& tm : asm_poly.t) {
        int digit = tm.c.fq()[j];
        if (digit) comp.t.push_back({tm.e, small->from_int(digit)});
      }
      comps.push_back(comp);
    }
    kap_small.push_back(comps);
  }
  // restricted mixed points over m(small): pairs (u', v') with the
  // component-wise square v'(kap'(z)) = (u' assembled)^p decomposed
  std::vector<Point> us = points_of_algebra(WA.restricted);
  std::vector<Point> vs = points_of_algebra(WB.restricted);
  auto eval_small = [&](const MPoly& f, const Point& pt) {
    Val r = small->zero();
    for (auto& tm : f.t) {
      Val term = tm.c;
      for (size_t v = 0; v < tm.e.size(); ++v)
        if (tm.e[v]) term = term * small->pow(pt[v], tm.e[v]);
      r = r + term;
    }
    return r;
  };
  size_t restricted_count = 0;
  std::vector<std::pair<Point, Point>> restricted_pairs;
  for (auto& u : us)
    for (auto& v : vs) {
      bool ok = true;
      Point bigu = WA.assemble(u);
      for (int i = 0; i < R.A.nvars() && ok; ++i) {
        Val target = big->pow(bigu[i], p);  // kappa on a visible field is Frobenius
        for (int j = 0; j < d && ok; ++j) {
          Val lhs = eval_small(kap_small[i][j], v);
          Val rhs = small->from_int((long long)target.fq()[j]);
          if (lhs != rhs) ok = false;
        }
      }
      if (ok) {
        ++restricted_count;
        restricted_pairs.push_back({u, v});
      }
    }
  // big-level mixed points
  MixedPoints bigpts = points_mixed(R);
  if (!bigpts.routes_agree) return false;
  if (restricted_count != bigpts.pairs.size()) return false;
  // the assembly map is a bijection onto the big-level points
  for (auto& [u, v] : restricted_pairs) {
    Point bu = WA.assemble(u), bv = WB.assemble(v);
    bool found = false;
    for (auto& [pu, pv] : bigpts.pairs) {
      bool eq = true;
      for (size_t i = 0; i < bu.size(); ++i)
        if (bu[i] != pu[i]) eq = false;
      for (size_t i = 0; i < bv.size(); ++i)
        if (bv[i] != pv[i]) eq = false;
      if (eq) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace mixtwist
