#ifndef CQ_CURVED_HPP
#define CQ_CURVED_HPP

// Pointwise degree-4 curvature corrections on supplied curvature data: the
// operators gamma_3, gamma_4 and the symbol corrections Q_3, Q_4, the
// invariant divergences contracted against jets, the commutator identity
// operators, and the normality checker/projector.
//
// Everything here acts at a single point: symbols are xi-polynomials with
// rational coefficients, derivatives along the frame are supplied as jets,
// and the curvature components (kappa_0, kappa_1) are plain data.

#include <array>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cq/algebra.hpp"
#include "cq/linalg.hpp"
#include "cq/poly.hpp"
#include "cq/signature.hpp"
#include "cq/symbol.hpp"

namespace cq {

class CriticalDenominatorError : public std::runtime_error {
 public:
  CriticalDenominatorError(const Rational& delta_, int m)
      : std::runtime_error("critical denominator at delta=" + delta_.str() +
                           " (critical set of R^" + std::to_string(m) + ")"),
        delta(delta_) {}
  Rational delta;
};

/// Cartan curvature components at a point: kappa0[j][k] is the co(p,q)
/// value on the frame pair (e_j, e_k), kappa1[j][k] the g_1 value; both are
/// antisymmetric in (j,k).
struct CurvatureData {
  Signature sig;
  std::vector<std::vector<RMat>> kappa0;  // [j][k] -> m x m matrix
  std::vector<std::vector<RVec>> kappa1;  // [j][k] -> covector

  static CurvatureData zero(Signature sig) {
    const int m = sig.m();
    CurvatureData k{sig, {}, {}};
    k.kappa0.assign(m, std::vector<RMat>(m, rmat(m, m)));
    k.kappa1.assign(m, std::vector<RVec>(m, RVec(m)));
    return k;
  }

  bool is_zero() const {
    for (const auto& row : kappa0)
      for (const auto& a : row)
        if (!rmat_is_zero(a)) return false;
    for (const auto& row : kappa1)
      for (const auto& v : row)
        if (!rvec_is_zero(v)) return false;
    return true;
  }

  /// Bilinear evaluation kappa0(x, y) on two vectors.
  RMat kappa0_at(const RVec& x, const RVec& y) const {
    const int m = sig.m();
    RMat out = rmat(m, m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Rational c = x[j] * y[k];
        if (c.is_zero()) continue;
        for (int r = 0; r < m; ++r)
          for (int s = 0; s < m; ++s) out[r][s] += c * kappa0[j][k][r][s];
      }
    return out;
  }

  RVec kappa1_at(const RVec& x, const RVec& y) const {
    const int m = sig.m();
    RVec out(m);
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Rational c = x[j] * y[k];
        if (c.is_zero()) continue;
        for (int r = 0; r < m; ++r) out[r] += c * kappa1[j][k][r];
      }
    return out;
  }

  CurvatureData scaled(const Rational& c) const {
    CurvatureData out = *this;
    for (auto& row : out.kappa0)
      for (auto& a : row) a = rmat_scaled(a, c);
    for (auto& row : out.kappa1)
      for (auto& v : row)
        for (auto& x : v) x *= c;
    return out;
  }
};

struct NormalityViolation {
  std::string kind;  // antisymmetry0 | antisymmetry1 | co_membership | ricci_trace | endo_trace
  int j = 0, l = 0;
};

struct NormalityReport {
  bool ok = true;
  std::vector<NormalityViolation> violations;
};

/// Verifies antisymmetry, co(p,q)-valuedness and the vanishing of all
/// curvature contractions: the normality trace sum_i kappa0(e_i,e_l)[i][j]
/// and the endomorphism trace tr kappa0(e_j, e_l).
inline NormalityReport check_normality(const CurvatureData& kappa) {
  const int m = kappa.sig.m();
  NormalityReport rep;
  auto flag = [&rep](const char* kind, int j, int l) {
    rep.ok = false;
    rep.violations.push_back(NormalityViolation{kind, j, l});
  };
  for (int j = 0; j < m; ++j)
    for (int l = j; l < m; ++l) {
      RMat sum0 = rmat_add(kappa.kappa0[j][l], kappa.kappa0[l][j]);
      if (!rmat_is_zero(sum0)) flag("antisymmetry0", j, l);
      RVec s1 = kappa.kappa1[j][l];
      for (int c = 0; c < m; ++c) s1[c] += kappa.kappa1[l][j][c];
      if (!rvec_is_zero(s1)) flag("antisymmetry1", j, l);
    }
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      const RMat& a = kappa.kappa0[j][l];
      const Rational c = rmat_trace(a) / Rational(m);
      bool in_co = true;
      for (int r = 0; r < m && in_co; ++r)
        for (int cc = 0; cc < m; ++cc) {
          Rational a0_rc = a[r][cc] - (r == cc ? c : Rational());
          Rational a0_cr = a[cc][r] - (r == cc ? c : Rational());
          if (a0_cr * kappa.sig.jr(cc) + kappa.sig.jr(r) * a0_rc != Rational()) {
            in_co = false;
            break;
          }
        }
      if (!in_co) flag("co_membership", j, l);
      if (!rmat_trace(a).is_zero()) flag("endo_trace", j, l);
    }
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      Rational tr;
      for (int i = 0; i < m; ++i) tr += kappa.kappa0[i][l][i][j];
      if (!tr.is_zero()) flag("ricci_trace", j, l);
    }
  return rep;
}

/// Projects arbitrary curvature data onto the normality-passing set:
/// antisymmetrizes, projects values onto so(p,q) (which kills the
/// endomorphism trace), and removes the Ricci-type trace by subtracting a
/// particular solution of the contraction equations.
inline CurvatureData project_to_normal(const CurvatureData& raw) {
  const Signature sig = raw.sig;
  const int m = sig.m();
  CurvatureData out = CurvatureData::zero(sig);

  // Antisymmetrize and project each kappa0 value onto so(p,q): A -> (A - J tA J)/2.
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      RMat a = rmat_scaled(rmat_sub(raw.kappa0[j][k], raw.kappa0[k][j]), Rational(1, 2));
      RMat so = rmat(m, m);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          so[r][c] = (a[r][c] - sig.jr(r) * a[c][r] * sig.jr(c)) * Rational(1, 2);
      out.kappa0[j][k] = std::move(so);
      for (int c = 0; c < m; ++c)
        out.kappa1[j][k][c] =
            (raw.kappa1[j][k][c] - raw.kappa1[k][j][c]) * Rational(1, 2);
    }

  // so(p,q) basis: A_r = J (E_{ab} - E_{ba}), a < b.
  std::vector<RMat> so_basis;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      RMat g = rmat(m, m);
      g[a][b] = sig.jr(a);
      g[b][a] = -sig.jr(b);
      so_basis.push_back(std::move(g));
    }
  const int dso = static_cast<int>(so_basis.size());
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) pairs.emplace_back(j, k);
  const int cols = static_cast<int>(pairs.size()) * dso;
  if (cols == 0) return out;

  // Ricci contraction as a linear map of the (pair, so-coordinate) unknowns.
  RMat a = rmat(m * m, cols);
  RVec b(m * m);
  for (int jj = 0; jj < m; ++jj)
    for (int ll = 0; ll < m; ++ll) {
      const int row = jj * m + ll;
      Rational cur;
      for (int i = 0; i < m; ++i) cur += out.kappa0[i][ll][i][jj];
      b[row] = cur;
      for (std::size_t p = 0; p < pairs.size(); ++p)
        for (int r = 0; r < dso; ++r) {
          // Contribution of W on pair (j0,k0) (antisymmetric extension).
          const auto [j0, k0] = pairs[p];
          Rational contrib;
          for (int i = 0; i < m; ++i) {
            if (i == j0 && ll == k0) contrib += so_basis[r][i][jj];
            if (i == k0 && ll == j0) contrib -= so_basis[r][i][jj];
          }
          a[row][static_cast<int>(p) * dso + r] = contrib;
        }
    }
  const LinearSolve sol = solve_linear(a, b);
  if (!sol.consistent)
    throw std::logic_error("project_to_normal: contraction system inconsistent");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [j0, k0] = pairs[p];
    for (int r = 0; r < dso; ++r) {
      const Rational c = sol.solution[static_cast<int>(p) * dso + r];
      if (c.is_zero()) continue;
      out.kappa0[j0][k0] = rmat_sub(out.kappa0[j0][k0], rmat_scaled(so_basis[r], c));
      out.kappa0[k0][j0] = rmat_add(out.kappa0[k0][j0], rmat_scaled(so_basis[r], c));
    }
  }
  return out;
}

/// The g_1 Lie-derivative rules for the curvature as data transformations:
/// L_{h*} kappa_0 = 0 and (L_{h*} kappa_1)(x,y) = [kappa_0(x,y), h].
inline CurvatureData g1_curvature_derivative(const AlgebraElement& h,
                                             const CurvatureData& kappa) {
  if (!h.is_pure_g1())
    throw std::invalid_argument("g1_curvature_derivative: argument not in g_1");
  const Signature sig = kappa.sig;
  const int m = sig.m();
  CurvatureData out = CurvatureData::zero(sig);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      const AlgebraElement b =
          bracket(AlgebraElement::from_co(sig, kappa.kappa0[j][k]), h);
      if (!b.is_pure_g1())
        throw std::logic_error("g1_curvature_derivative: bracket left g_1");
      out.kappa1[j][k] = b.graded().xi;
    }
  return out;
}

/// Two-jet of a value along the frame directions; d2 is symmetrized.
template <typename T>
struct Jet {
  T value;
  std::vector<T> d1;
  std::vector<std::vector<T>> d2;
};

inline Jet<Rational> constant_scalar_jet(int m, const Rational& v) {
  return Jet<Rational>{v, RVec(m), RMat(m, RVec(m))};
}

inline Jet<Poly> constant_poly_jet(int m, const Poly& v) {
  return Jet<Poly>{v, std::vector<Poly>(m, Poly(m)),
                   std::vector<std::vector<Poly>>(m, std::vector<Poly>(m, Poly(m)))};
}

inline Jet<CurvatureData> constant_curvature_jet(const CurvatureData& v) {
  const int m = v.sig.m();
  return Jet<CurvatureData>{
      v, std::vector<CurvatureData>(m, CurvatureData::zero(v.sig)),
      std::vector<std::vector<CurvatureData>>(
          m, std::vector<CurvatureData>(m, CurvatureData::zero(v.sig)))};
}

/// div^omega contracted against a supplied jet: sum_j d_{xi_j}( d1_j T ).
inline Poly div_omega(const Signature& sig, const Jet<Poly>& t) {
  if (t.d1.empty()) throw std::invalid_argument("div_omega: jet is missing d1");
  Poly out(sig.m());
  for (int j = 0; j < sig.m(); ++j) out += t.d1[j].partial_xi(j);
  return out;
}

/// div^{omega^2}: sum_{j,k} d_{xi_j} d_{xi_k} ( d2_{jk} T ); only the
/// symmetric part of the second jet enters.
inline Poly div_omega2(const Signature& sig, const Jet<Poly>& t) {
  if (t.d2.empty()) throw std::invalid_argument("div_omega2: jet is missing d2");
  Poly out(sig.m());
  for (int j = 0; j < sig.m(); ++j)
    for (int k = 0; k < sig.m(); ++k) out += t.d2[j][k].partial_xi(j).partial_xi(k);
  return out;
}

/// Symmetric polarization of a quartic map R^m -> V:
///   M(h1..h4) = (1/4!) sum_{S nonempty} (-1)^{4-|S|} q(sum_{i in S} h_i).
template <typename F>
Poly polarize_quartic(int m, F&& quartic, const std::array<RVec, 4>& h) {
  Poly acc(m);
  for (int mask = 1; mask < 16; ++mask) {
    RVec arg(m);
    int bits = 0;
    for (int i = 0; i < 4; ++i) {
      if (!(mask & (1 << i))) continue;
      ++bits;
      for (int c = 0; c < m; ++c) arg[c] += h[i][c];
    }
    const Poly q = quartic(arg);
    acc += (4 - bits) % 2 == 0 ? q : -q;
  }
  return acc.scaled(Rational(1, 24));
}

namespace detail {

/// Applies the symmetric multilinear extension of a quartic map to a
/// pointwise degree-4 symbol (xi-polynomial), monomial by monomial: the
/// monomial basis plays the role of the symmetric factors.
template <typename F>
Poly extend_quartic(const Signature& sig, F&& quartic, const Poly& t4) {
  const int m = sig.m();
  Poly out(m);
  for (const auto& [mo, c] : t4.terms()) {
    if (exponent_total(mo.x) != 0 || mo.delta != 0)
      throw std::invalid_argument("curved operators act pointwise: coefficients must be scalars");
    std::array<RVec, 4> slots;
    slots.fill(RVec(m));
    int slot = 0;
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < mo.xi[i]; ++e) slots.at(slot++)[i] = 1;
    out += polarize_quartic(m, quartic, slots).scaled(c);
  }
  return out;
}

inline void require_pointwise_degree(const Poly& t, int kmax, const char* who) {
  if (t.xi_degree() > kmax)
    throw std::invalid_argument(std::string(who) + ": xi-degree exceeds 4");
}

}  // namespace detail

/// gamma_3(h) on X^4: |X|^2 kappa_0(h^flat, X) X, extended to general
/// degree-4 symbols by symmetric polarization and scalar-linearity; zero on
/// degrees <= 3. Output has xi-degree 1.
inline Poly gamma3(const Signature& sig, const RVec& h, const Poly& t,
                   const CurvatureData& kappa) {
  detail::require_pointwise_degree(t, 4, "gamma3");
  const RVec hflat = sig.flat(h);
  auto quartic = [&](const RVec& x) {
    const Rational n2 = sig.g0(x, x);
    const RVec v = rmat_vec(kappa.kappa0_at(hflat, x), x);
    Poly out(sig.m());
    for (int c = 0; c < sig.m(); ++c)
      out += Poly::xi(sig.m(), c).scaled(n2 * v[c]);
    return out;
  };
  return detail::extend_quartic(sig, quartic, t.xi_degree_part(4));
}

/// gamma_4(h) on X^4: -lambda m |X|^2 <kappa_1(h^flat, X), X>, extended as
/// gamma_3; zero on degrees <= 3. Output has xi-degree 0.
inline Poly gamma4(const Signature& sig, const RVec& h, const Poly& t,
                   const CurvatureData& kappa, const Rational& lambda) {
  detail::require_pointwise_degree(t, 4, "gamma4");
  const RVec hflat = sig.flat(h);
  const Rational factor = -lambda * Rational(sig.m());
  auto quartic = [&](const RVec& x) {
    const Rational val =
        factor * sig.g0(x, x) * sig.pair(kappa.kappa1_at(hflat, x), x);
    return Poly::constant(sig.m(), val);
  };
  return detail::extend_quartic(sig, quartic, t.xi_degree_part(4));
}

/// gamma'(h) = gamma(h) + gamma_3(h) + gamma_4(h) on pointwise symbols of
/// degree <= 4.
inline Poly gamma_prime(const Signature& sig, const RVec& h, const Poly& t,
                        const CurvatureData& kappa, const Rational& lambda) {
  detail::require_pointwise_degree(t, 4, "gamma_prime");
  const AlgebraElement he = AlgebraElement::from_covector(sig, h);
  Poly out = apply_gamma(gamma_data(he), t, Poly::constant(sig.m(), lambda));
  out += gamma3(sig, h, t, kappa);
  out += gamma4(sig, h, t, kappa, lambda);
  return out;
}

namespace detail {

/// Jet of u = sum_j t * kappa0(eta^{j flat}, X) X v e_j, the S^2-valued
/// integrand shared by Q_3 and Q_4.
inline Jet<Poly> q_integrand_jet(const Signature& sig, const Jet<Rational>& t,
                                 const Jet<CurvatureData>& kappa, const RVec& x,
                                 bool need_d2) {
  const int m = sig.m();
  auto value = [&](const CurvatureData& k) {
    Poly out(m);
    for (int j = 0; j < m; ++j) {
      RVec ejf(m);
      ejf[j] = sig.jr(j);  // (eta^j)^flat
      const RVec v = rmat_vec(k.kappa0_at(ejf, x), x);
      Poly lin(m);
      for (int c = 0; c < m; ++c) lin += Poly::xi(m, c).scaled(v[c]);
      out += lin * Poly::xi(m, j);
    }
    return out;
  };
  Jet<Poly> u = constant_poly_jet(m, value(kappa.value).scaled(t.value));
  for (int l = 0; l < m; ++l)
    u.d1[l] = value(kappa.value).scaled(t.d1[l]) + value(kappa.d1[l]).scaled(t.value);
  if (need_d2) {
    for (int l = 0; l < m; ++l)
      for (int n = 0; n < m; ++n)
        u.d2[l][n] = value(kappa.value).scaled(t.d2[l][n]) +
                     value(kappa.d1[n]).scaled(t.d1[l]) +
                     value(kappa.d1[l]).scaled(t.d1[n]) +
                     value(kappa.d2[l][n]).scaled(t.value);
  }
  return u;
}

}  // namespace detail

/// Q_3 on t X^4:
///   -|X|^2 [ t <kappa_1(eta^{j flat}, X), X> e_j
///            + 2/(m+2-m delta) div^omega( t kappa_0(eta^{j flat}, X) X v e_j ) ].
/// Polarization in X extends it off the diagonal. Throws at the critical
/// denominator delta = (m+2)/m.
inline Poly q3_correction(const Signature& sig, const Jet<Rational>& t,
                          const Jet<CurvatureData>& kappa, const RVec& x,
                          const Rational& delta) {
  const int m = sig.m();
  if (delta == Rational(m + 2, m)) throw CriticalDenominatorError(delta, m);
  const Rational n2 = sig.g0(x, x);
  Poly first(m);
  for (int j = 0; j < m; ++j) {
    RVec ejf(m);
    ejf[j] = sig.jr(j);
    first += Poly::xi(m, j).scaled(t.value * sig.pair(kappa.value.kappa1_at(ejf, x), x));
  }
  const Poly div = div_omega(sig, detail::q_integrand_jet(sig, t, kappa, x, false));
  const Rational coeff = Rational(2) / (Rational(m + 2) - Rational(m) * delta);
  return (first + div.scaled(coeff)).scaled(-n2);
}

inline Poly q3_polarized(const Signature& sig, const Jet<Rational>& t,
                         const Jet<CurvatureData>& kappa, const std::array<RVec, 4>& h,
                         const Rational& delta) {
  return polarize_quartic(
      sig.m(), [&](const RVec& x) { return q3_correction(sig, t, kappa, x, delta); }, h);
}

/// Q_4 on t X^4:
///   -m lambda / ((m+1-m delta)(m+2-m delta)) |X|^2
///     div^{omega^2}( t kappa_0(eta^{j flat}, X) X v e_j ).
/// Throws at delta = (m+1)/m and (m+2)/m.
inline Poly q4_correction(const Signature& sig, const Jet<Rational>& t,
                          const Jet<CurvatureData>& kappa, const RVec& x,
                          const Rational& delta, const Rational& lambda) {
  const int m = sig.m();
  if (delta == Rational(m + 1, m) || delta == Rational(m + 2, m))
    throw CriticalDenominatorError(delta, m);
  const Rational n2 = sig.g0(x, x);
  const Poly div2 = div_omega2(sig, detail::q_integrand_jet(sig, t, kappa, x, true));
  const Rational coeff =
      (Rational(-m) * lambda) / ((Rational(m + 1) - Rational(m) * delta) *
                                 (Rational(m + 2) - Rational(m) * delta));
  return div2.scaled(coeff * n2);
}

inline Poly q4_polarized(const Signature& sig, const Jet<Rational>& t,
                         const Jet<CurvatureData>& kappa, const std::array<RVec, 4>& h,
                         const Rational& delta, const Rational& lambda) {
  return polarize_quartic(
      sig.m(), [&](const RVec& x) { return q4_correction(sig, t, kappa, x, delta, lambda); },
      h);
}

/// Right-hand side of the first divergence commutator identity on a
/// degree-k pointwise symbol:
///   (m+2k-2-m delta) i(h) T - (k-1) (i(eta^j) i(e_j^sharp) T) v h^flat.
inline Poly div_commutator(const Signature& sig, const RVec& h, const Poly& t,
                           const Rational& delta) {
  const int m = sig.m();
  const int k = std::max(t.xi_degree(), 0);
  if (t != t.xi_degree_part(k))
    throw std::invalid_argument("div_commutator: symbol must be xi-homogeneous");
  Poly ih(m);
  for (int a = 0; a < m; ++a) ih += t.partial_xi(a).scaled(h[a]);
  Poly out = ih.scaled(Rational(m + 2 * k - 2) - Rational(m) * delta);
  if (k >= 2) {
    const Poly trace = sig.laplacian_xi(t);
    Poly hflat_lin(m);
    const RVec hf = sig.flat(h);
    for (int c = 0; c < m; ++c) hflat_lin += Poly::xi(m, c).scaled(hf[c]);
    out -= (hflat_lin * trace).scaled(Rational(k - 1));
  }
  return out;
}

/// Right-hand side of the second identity (degree-2 jets):
///   2(m+1-m delta) i(h) div^omega T - L_{omega^{-1}(h^flat)} (i(eta^j) i(e_j^sharp) T).
inline Poly div_commutator_sq(const Signature& sig, const RVec& h, const Jet<Poly>& t,
                              const Rational& delta) {
  const int m = sig.m();
  const Poly div = div_omega(sig, t);
  Poly ih(m);
  for (int a = 0; a < m; ++a) ih += div.partial_xi(a).scaled(h[a]);
  Poly out = ih.scaled((Rational(m + 1) - Rational(m) * delta) * 2);
  const RVec hf = sig.flat(h);
  for (int a = 0; a < m; ++a) out -= sig.laplacian_xi(t.d1[a]).scaled(hf[a]);
  return out;
}

}  // namespace cq

#endif  // CQ_CURVED_HPP
