#ifndef CQ_RANDOM_HPP
#define CQ_RANDOM_HPP

// Seeded generation of random polynomials, symbols, algebra elements and
// curvature data. Draws come straight from mt19937_64 (no distribution
// adaptors), so identical seeds give identical values on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "cq/algebra.hpp"
#include "cq/curved.hpp"
#include "cq/poly.hpp"
#include "cq/signature.hpp"
#include "cq/symbol.hpp"

namespace cq {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  int int_in(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(raw() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Rational rational(int max_abs_num = 9, int max_den = 3) {
    return Rational(int_in(-max_abs_num, max_abs_num), int_in(1, max_den));
  }

  Rational nonzero_rational(int max_abs_num = 9, int max_den = 3) {
    while (true) {
      Rational r = rational(max_abs_num, max_den);
      if (!r.is_zero()) return r;
    }
  }

 private:
  std::mt19937_64 gen_;
};

inline std::vector<int> random_exponents(Rng& rng, int m, int total) {
  std::vector<int> e(m, 0);
  for (int i = 0; i < total; ++i) ++e[rng.int_in(0, m - 1)];
  return e;
}

/// Random polynomial in x only, with a few terms of degree <= max_xdeg.
inline Poly random_x_poly(const Signature& sig, Rng& rng, int max_xdeg, int terms = 3) {
  const int m = sig.m();
  Poly p(m);
  for (int t = 0; t < terms; ++t) {
    Monomial mo{random_exponents(rng, m, rng.int_in(0, max_xdeg)),
                std::vector<int>(m, 0), 0};
    p.add_term(mo, rng.rational());
  }
  return p;
}

/// Random xi-homogeneous polynomial of degree k with x-poly coefficients.
inline Poly random_xi_homogeneous(const Signature& sig, Rng& rng, int k, int max_xdeg,
                                  int terms = 4) {
  const int m = sig.m();
  Poly p(m);
  for (int t = 0; t < terms; ++t) {
    Monomial mo{random_exponents(rng, m, rng.int_in(0, max_xdeg)),
                random_exponents(rng, m, k), 0};
    p.add_term(mo, rng.rational());
  }
  return p;
}

inline Symbol random_symbol(const Signature& sig, Rng& rng, int k, const Rational& delta,
                            int max_xdeg = 3) {
  return Symbol(sig, Poly::constant(sig.m(), delta),
                random_xi_homogeneous(sig, rng, k, max_xdeg));
}

/// Random mixed-degree symbol with parts in every degree <= kmax.
inline Symbol random_mixed_symbol(const Signature& sig, Rng& rng, int kmax,
                                  const Rational& delta, int max_xdeg = 3) {
  Poly p(sig.m());
  for (int k = 0; k <= kmax; ++k) p += random_xi_homogeneous(sig, rng, k, max_xdeg, 2);
  return Symbol(sig, Poly::constant(sig.m(), delta), p);
}

inline RVec random_rvec(const Signature& sig, Rng& rng) {
  RVec v(sig.m());
  for (auto& x : v) x = rng.rational();
  return v;
}

inline AlgebraElement random_g1(const Signature& sig, Rng& rng) {
  while (true) {
    const RVec xi = random_rvec(sig, rng);
    if (!rvec_is_zero(xi)) return AlgebraElement::from_covector(sig, xi);
  }
}

inline AlgebraElement random_element(const Signature& sig, Rng& rng) {
  const int m = sig.m();
  RMat b = rmat(m, m);
  const Rational scale = rng.rational();
  for (int i = 0; i < m; ++i) b[i][i] = scale;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const Rational w = rng.rational();
      b[i][j] += sig.jr(i) * w;
      b[j][i] -= sig.jr(j) * w;
    }
  return AlgebraElement::from_vector(sig, random_rvec(sig, rng)) +
         AlgebraElement::from_co(sig, b) +
         AlgebraElement::from_covector(sig, random_rvec(sig, rng));
}

/// Random antisymmetric curvature data with co(p,q)-valued kappa0 (not
/// normal in general; project_to_normal for the normal slice).
inline CurvatureData random_curvature(const Signature& sig, Rng& rng) {
  const int m = sig.m();
  CurvatureData k = CurvatureData::zero(sig);
  for (int j = 0; j < m; ++j)
    for (int l = j + 1; l < m; ++l) {
      RMat b = rmat(m, m);
      const Rational scale = rng.rational();
      for (int i = 0; i < m; ++i) b[i][i] = scale;
      for (int a = 0; a < m; ++a)
        for (int c = a + 1; c < m; ++c) {
          const Rational w = rng.rational();
          b[a][c] += sig.jr(a) * w;
          b[c][a] -= sig.jr(c) * w;
        }
      k.kappa0[j][l] = b;
      k.kappa0[l][j] = rmat_scaled(b, -1);
      const RVec v = random_rvec(sig, rng);
      k.kappa1[j][l] = v;
      for (int c = 0; c < m; ++c) k.kappa1[l][j][c] = -v[c];
    }
  return k;
}

inline Jet<Rational> random_scalar_jet(const Signature& sig, Rng& rng) {
  const int m = sig.m();
  Jet<Rational> j = constant_scalar_jet(m, rng.nonzero_rational());
  for (int a = 0; a < m; ++a) j.d1[a] = rng.rational();
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const Rational v = rng.rational();
      j.d2[a][b] = v;
      j.d2[b][a] = v;
    }
  return j;
}

inline Jet<CurvatureData> random_curvature_jet(const Signature& sig, Rng& rng) {
  const int m = sig.m();
  Jet<CurvatureData> j = constant_curvature_jet(random_curvature(sig, rng));
  for (int a = 0; a < m; ++a) j.d1[a] = random_curvature(sig, rng);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const CurvatureData v = random_curvature(sig, rng);
      j.d2[a][b] = v;
      j.d2[b][a] = v;
    }
  return j;
}

}  // namespace cq

#endif  // CQ_RANDOM_HPP
