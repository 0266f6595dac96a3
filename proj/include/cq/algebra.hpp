#ifndef CQ_ALGEBRA_HPP
#define CQ_ALGEBRA_HPP

// The conformal Lie algebra so(p+1,q+1) in its (m+2)x(m+2) matrix
// realization, with the graded decomposition
//   g = g_{-1} + g_0 + g_1  ~  R^m + co(p,q) + R^m*,
// brackets, the ad-trace Killing form and its dual bases, and the
// realization of algebra elements as polynomial vector fields on R^m.

#include <stdexcept>
#include <utility>
#include <vector>

#include "cq/linalg.hpp"
#include "cq/poly.hpp"
#include "cq/signature.hpp"

namespace cq {

/// Graded pieces of an algebra element: a vector v in g_{-1}, a co(p,q)
/// matrix in g_0 and a covector xi in g_1.
struct GradedParts {
  RVec v;
  RMat co;
  RVec xi;
};

class AlgebraElement {
 public:
  AlgebraElement(Signature sig, RMat matrix) : sig_(sig), m_(std::move(matrix)) {
    const int n = sig_.m() + 2;
    if (static_cast<int>(m_.size()) != n)
      throw std::invalid_argument("AlgebraElement: matrix must be (m+2)x(m+2)");
    for (const auto& row : m_)
      if (static_cast<int>(row.size()) != n)
        throw std::invalid_argument("AlgebraElement: matrix must be (m+2)x(m+2)");
    if (!rmat_is_zero(rmat_add(rmat_mul(rmat_transpose(m_), s_matrix(sig_)),
                               rmat_mul(s_matrix(sig_), m_))))
      throw std::invalid_argument("AlgebraElement: matrix is not S-antisymmetric");
  }

  static AlgebraElement zero(Signature sig) {
    return AlgebraElement(sig, rmat(sig.m() + 2, sig.m() + 2));
  }

  static AlgebraElement from_vector(Signature sig, const RVec& v) {
    const int m = sig.m();
    require_size(v, m, "from_vector");
    RMat a = rmat(m + 2, m + 2);
    const RVec vs = sig.sharp(v);
    for (int i = 0; i < m; ++i) {
      a[0][1 + i] = vs[i];  // v^sharp row block
      a[1 + i][m + 1] = v[i];
    }
    return AlgebraElement(sig, std::move(a));
  }

  /// Embeds B in co(p,q): B = A0 + c*Id with A0 in so(p,q); the matrix has
  /// middle block A0 and corner entries -a, a with a = -c.
  static AlgebraElement from_co(Signature sig, const RMat& b) {
    const int m = sig.m();
    if (static_cast<int>(b.size()) != m)
      throw std::invalid_argument("AlgebraElement::from_co: matrix must be m x m");
    Rational c = rmat_trace(b) / Rational(m);
    RMat a0 = b;
    for (int i = 0; i < m; ++i) a0[i][i] -= c;
    // so(p,q) check: tA0 J + J A0 = 0.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (a0[j][i] * sig.jr(j) + sig.jr(i) * a0[i][j] != Rational())
          throw std::invalid_argument("AlgebraElement::from_co: input not in co(p,q)");
    RMat a = rmat(m + 2, m + 2);
    a[0][0] = c;
    a[m + 1][m + 1] = -c;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a[1 + i][1 + j] = a0[i][j];
    return AlgebraElement(sig, std::move(a));
  }

  static AlgebraElement from_covector(Signature sig, const RVec& xi) {
    const int m = sig.m();
    require_size(xi, m, "from_covector");
    RMat a = rmat(m + 2, m + 2);
    const RVec xf = sig.flat(xi);
    for (int i = 0; i < m; ++i) {
      a[1 + i][0] = xf[i];  // xi^flat column block
      a[m + 1][1 + i] = xi[i];
    }
    return AlgebraElement(sig, std::move(a));
  }

  static AlgebraElement embed(Signature sig, const GradedParts& parts) {
    return from_vector(sig, parts.v) + from_co(sig, parts.co) +
           from_covector(sig, parts.xi);
  }

  GradedParts graded() const {
    const int m = sig_.m();
    GradedParts g;
    g.v.resize(m);
    g.xi.resize(m);
    g.co = rmat(m, m);
    const Rational a = m_[m + 1][m + 1];
    for (int i = 0; i < m; ++i) {
      g.v[i] = m_[1 + i][m + 1];
      g.xi[i] = m_[m + 1][1 + i];
      for (int j = 0; j < m; ++j) g.co[i][j] = m_[1 + i][1 + j];
      g.co[i][i] -= a;
    }
    return g;
  }

  const RMat& matrix() const { return m_; }
  const Signature& sig() const { return sig_; }
  bool is_zero() const { return rmat_is_zero(m_); }

  bool is_pure_g1() const {
    const GradedParts g = graded();
    return rvec_is_zero(g.v) && rmat_is_zero(g.co);
  }

  AlgebraElement operator+(const AlgebraElement& o) const {
    require_same(o);
    return AlgebraElement(sig_, rmat_add(m_, o.m_));
  }
  AlgebraElement operator-(const AlgebraElement& o) const {
    require_same(o);
    return AlgebraElement(sig_, rmat_sub(m_, o.m_));
  }
  AlgebraElement scaled(const Rational& c) const {
    return AlgebraElement(sig_, rmat_scaled(m_, c));
  }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.sig_ == b.sig_ && a.m_ == b.m_;
  }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) {
    return !(a == b);
  }

  static RMat s_matrix(const Signature& sig) {
    const int m = sig.m();
    RMat s = rmat(m + 2, m + 2);
    s[0][m + 1] = -1;
    s[m + 1][0] = -1;
    for (int i = 0; i < m; ++i) s[1 + i][1 + i] = sig.jr(i);
    return s;
  }

 private:
  static void require_size(const RVec& v, int m, const char* where) {
    if (static_cast<int>(v.size()) != m)
      throw std::invalid_argument(std::string("AlgebraElement::") + where +
                                  ": component count mismatch");
  }
  void require_same(const AlgebraElement& o) const {
    if (sig_ != o.sig_)
      throw std::invalid_argument("AlgebraElement: signature mismatch");
  }

  Signature sig_;
  RMat m_;
};

inline AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.sig() != y.sig())
    throw std::invalid_argument("bracket: signature mismatch");
  return AlgebraElement(x.sig(), rmat_sub(rmat_mul(x.matrix(), y.matrix()),
                                          rmat_mul(y.matrix(), x.matrix())));
}

/// Polynomial vector field on R^m; the conformal realization produces
/// components of x-degree <= 2.
class ConformalField {
 public:
  ConformalField(Signature sig, std::vector<Poly> components)
      : sig_(sig), comp_(std::move(components)) {
    if (static_cast<int>(comp_.size()) != sig_.m())
      throw std::invalid_argument("ConformalField: component count mismatch");
    for (const auto& c : comp_)
      if (c.depends_on_xi() || c.depends_on_delta())
        throw std::invalid_argument("ConformalField: components must be x-polynomials");
  }

  const Signature& sig() const { return sig_; }
  const Poly& component(int i) const { return comp_.at(i); }
  const std::vector<Poly>& components() const { return comp_; }

  Poly divergence() const {
    Poly d(sig_.m());
    for (int i = 0; i < sig_.m(); ++i) d += comp_[i].partial_x(i);
    return d;
  }

  bool is_zero() const {
    for (const auto& c : comp_)
      if (!c.is_zero()) return false;
    return true;
  }

  ConformalField operator+(const ConformalField& o) const {
    std::vector<Poly> c = comp_;
    for (int i = 0; i < sig_.m(); ++i) c[i] += o.comp_[i];
    return ConformalField(sig_, std::move(c));
  }

  friend bool operator==(const ConformalField& a, const ConformalField& b) {
    return a.sig_ == b.sig_ && a.comp_ == b.comp_;
  }

 private:
  Signature sig_;
  std::vector<Poly> comp_;
};

/// Commutator of vector fields, [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
inline ConformalField field_commutator(const ConformalField& x, const ConformalField& y) {
  const int m = x.sig().m();
  std::vector<Poly> c;
  c.reserve(m);
  for (int i = 0; i < m; ++i) {
    Poly ci(m);
    for (int j = 0; j < m; ++j) {
      ci += x.component(j) * y.component(i).partial_x(j);
      ci -= y.component(j) * x.component(i).partial_x(j);
    }
    c.push_back(std::move(ci));
  }
  return ConformalField(x.sig(), std::move(c));
}

/// The vector field X^h of the conformal realization: constant -v for
/// g_{-1}, linear -Bx for g_0, and the inversion field <h,x>x - |x|^2 h^flat/2
/// for g_1; mixed elements extend linearly.
inline ConformalField vector_field_of(const AlgebraElement& h) {
  const Signature sig = h.sig();
  const int m = sig.m();
  const GradedParts g = h.graded();
  std::vector<Poly> comp(m, Poly(m));
  for (int i = 0; i < m; ++i) {
    comp[i] += Poly::constant(m, -g.v[i]);
    for (int j = 0; j < m; ++j)
      comp[i] += Poly::x(m, j).scaled(-g.co[i][j]);
  }
  if (!rvec_is_zero(g.xi)) {
    Poly pairing(m);  // <xi, x>
    for (int j = 0; j < m; ++j) pairing += Poly::x(m, j).scaled(g.xi[j]);
    const Poly half_norm = sig.norm2_x().scaled(Rational(1, 2));
    const RVec hflat = sig.flat(g.xi);
    for (int i = 0; i < m; ++i) {
      comp[i] += pairing * Poly::x(m, i);
      comp[i] -= half_norm.scaled(hflat[i]);
    }
  }
  return ConformalField(sig, std::move(comp));
}

/// Fixed-basis context for so(p+1,q+1): basis, coordinates, ad matrices,
/// the ad-trace Killing form with its Gram matrix and inverse, and the
/// Killing-dual basis of g_1 against the standard g_{-1} basis.
class Algebra {
 public:
  explicit Algebra(Signature sig) : sig_(sig) {
    build_basis();
    build_killing();
  }

  const Signature& sig() const { return sig_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<AlgebraElement>& basis() const { return basis_; }
  const AlgebraElement& basis(int a) const { return basis_.at(a); }
  int basis_grade(int a) const { return grades_.at(a); }

  /// Coordinates in the fixed basis; inverse of the basis expansion.
  RVec coordinates(const AlgebraElement& e) const {
    const int m = sig_.m();
    const GradedParts g = e.graded();
    RVec c;
    c.reserve(dim());
    for (int i = 0; i < m; ++i) c.push_back(g.v[i]);
    // co part: B = A0 + c Id with A0 = J W, W antisymmetric.
    const Rational scale = rmat_trace(g.co) / Rational(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        // W_ij with A0 = J W: W = J A0.
        Rational a0 = g.co[i][j];
        c.push_back(sig_.jr(i) * a0);
      }
    c.push_back(scale);
    for (int i = 0; i < m; ++i) c.push_back(sig_.jr(i) * g.xi[i]);
    return c;
  }

  RMat ad_matrix(const AlgebraElement& e) const {
    RMat ad = rmat(dim(), dim());
    for (int b = 0; b < dim(); ++b) {
      const RVec col = coordinates(bracket(e, basis_[b]));
      for (int a = 0; a < dim(); ++a) ad[a][b] = col[a];
    }
    return ad;
  }

  /// Killing form as the trace of ad(X) ad(Y) over the fixed basis.
  Rational killing_form(const AlgebraElement& x, const AlgebraElement& y) const {
    return rmat_trace(rmat_mul(ad_matrix(x), ad_matrix(y)));
  }

  const RMat& killing_matrix() const { return killing_; }
  const RMat& killing_inverse() const { return killing_inv_; }

  /// eps^i in g_1 with killing_form(e_j, eps^i) = delta_j^i.
  const AlgebraElement& killing_dual_g1(int i) const { return g1_dual_.at(i); }

 private:
  void build_basis() {
    const int m = sig_.m();
    for (int i = 0; i < m; ++i) {
      RVec v(m);
      v[i] = 1;
      basis_.push_back(AlgebraElement::from_vector(sig_, v));
      grades_.push_back(-1);
    }
    // so(p,q) generators J(E_ij - E_ji), i < j lexicographically.
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        RMat b = rmat(m, m);
        b[i][j] = sig_.jr(i);
        b[j][i] = -sig_.jr(j);
        basis_.push_back(AlgebraElement::from_co(sig_, b));
        grades_.push_back(0);
      }
    basis_.push_back(AlgebraElement::from_co(sig_, rmat_identity(m)));
    grades_.push_back(0);
    // g_1 duals of e_i under J, i.e. (e_i)^sharp.
    for (int i = 0; i < m; ++i) {
      RVec xi(m);
      xi[i] = sig_.jr(i);
      basis_.push_back(AlgebraElement::from_covector(sig_, xi));
      grades_.push_back(1);
    }
  }

  void build_killing() {
    const int n = dim();
    std::vector<RMat> ads;
    ads.reserve(n);
    for (int a = 0; a < n; ++a) ads.push_back(ad_matrix(basis_[a]));
    killing_ = rmat(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Rational t;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) t += ads[a][i][j] * ads[b][j][i];
        killing_[a][b] = t;
        killing_[b][a] = t;
      }
    killing_inv_ = rmat_inverse(killing_);

    // Solve the m x m pairing system for the g_1 Killing duals.
    const int m = sig_.m();
    RMat pairing = rmat(m, m);  // pairing[j][l] = K(e_j, beta^l)
    for (int j = 0; j < m; ++j)
      for (int l = 0; l < m; ++l) {
        Rational t;
        const RMat& adl = ads[n - m + l];
        for (int i = 0; i < n; ++i)
          for (int r = 0; r < n; ++r) t += ads[j][i][r] * adl[r][i];
        pairing[j][l] = t;
      }
    const RMat coeff = rmat_inverse(pairing);
    for (int i = 0; i < m; ++i) {
      AlgebraElement eps = AlgebraElement::zero(sig_);
      for (int l = 0; l < m; ++l)
        eps = eps + basis_[n - m + l].scaled(coeff[l][i]);
      if (!eps.is_pure_g1())
        throw std::logic_error("Algebra: Killing dual left g_1");
      g1_dual_.push_back(std::move(eps));
    }
  }

  Signature sig_;
  std::vector<AlgebraElement> basis_;
  std::vector<int> grades_;
  RMat killing_;
  RMat killing_inv_;
  std::vector<AlgebraElement> g1_dual_;
};

}  // namespace cq

#endif  // CQ_ALGEBRA_HPP
