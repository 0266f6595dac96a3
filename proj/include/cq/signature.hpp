#ifndef CQ_SIGNATURE_HPP
#define CQ_SIGNATURE_HPP

// Pseudo-Euclidean signature (p,q) on R^m with the diagonal metric
// J = diag(I_p, -I_q); carries the musical isomorphisms and the squared
// norms |x|^2 and |xi|^2_J used throughout.

#include <stdexcept>

#include "cq/linalg.hpp"
#include "cq/poly.hpp"
#include "cq/rational.hpp"

namespace cq {

class Signature {
 public:
  Signature(int p, int q) : p_(p), q_(q) {
    if (p < 0 || q < 0 || p + q < 1)
      throw std::invalid_argument("Signature: need p,q >= 0 and m = p+q >= 1");
  }

  int p() const { return p_; }
  int q() const { return q_; }
  int m() const { return p_ + q_; }

  /// Diagonal metric entry J_ii (0-based index).
  int j(int i) const {
    if (i < 0 || i >= m()) throw std::out_of_range("Signature: index out of range");
    return i < p_ ? 1 : -1;
  }
  Rational jr(int i) const { return Rational(j(i)); }

  /// x -> x^sharp, component-wise (J is diagonal and involutive).
  RVec sharp(const RVec& v) const { return apply_j(v); }
  /// h -> h^flat = sharp^{-1}.
  RVec flat(const RVec& w) const { return apply_j(w); }

  /// Natural pairing <h, x> of a covector with a vector.
  Rational pair(const RVec& cov, const RVec& vec) const {
    Rational s;
    for (int i = 0; i < m(); ++i) s += cov[i] * vec[i];
    return s;
  }

  /// g0(a, b) = sum_i J_ii a_i b_i for two vectors (or two covectors).
  Rational g0(const RVec& a, const RVec& b) const {
    Rational s;
    for (int i = 0; i < m(); ++i) s += jr(i) * a[i] * b[i];
    return s;
  }

  Poly norm2_x() const {
    Poly r(m());
    for (int i = 0; i < m(); ++i) r += (Poly::x(m(), i) * Poly::x(m(), i)).scaled(jr(i));
    return r;
  }

  Poly norm2_xi() const {
    Poly r(m());
    for (int i = 0; i < m(); ++i) r += (Poly::xi(m(), i) * Poly::xi(m(), i)).scaled(jr(i));
    return r;
  }

  /// The xi-Laplacian Delta_J = sum J^{ab} d_{xi_a} d_{xi_b}.
  Poly laplacian_xi(const Poly& f) const {
    Poly r(m());
    for (int i = 0; i < m(); ++i) r += f.partial_xi(i).partial_xi(i).scaled(jr(i));
    return r;
  }

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }
  friend bool operator!=(const Signature& a, const Signature& b) { return !(a == b); }

 private:
  RVec apply_j(const RVec& v) const {
    if (static_cast<int>(v.size()) != m())
      throw std::invalid_argument("Signature: component count mismatch");
    RVec r(v.size());
    for (int i = 0; i < m(); ++i) r[i] = jr(i) * v[i];
    return r;
  }

  int p_, q_;
};

}  // namespace cq

#endif  // CQ_SIGNATURE_HPP
