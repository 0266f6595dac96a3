#ifndef CQ_SYMBOL_HPP
#define CQ_SYMBOL_HPP

// Weighted symbols and differential operators on flat R^m, the Lie
// derivative actions on densities and symbols, the standard-ordering
// quantization q_aff and its inverse, operator composition, the
// transferred action, and the degree-lowering map gamma.
//
// Density weights are carried as polynomials so that the shift delta can be
// kept symbolic where eigenvalues are computed; everywhere else they are
// constant polynomials.

#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cq/algebra.hpp"
#include "cq/poly.hpp"
#include "cq/signature.hpp"

namespace cq {

/// A symbol with density weight delta: a polynomial in xi (any degrees) with
/// polynomial-in-x coefficients.
class Symbol {
 public:
  Symbol(Signature sig, Poly delta, Poly poly)
      : sig_(sig), delta_(std::move(delta)), poly_(std::move(poly)) {
    if (poly_.dim() != sig_.m() || delta_.dim() != sig_.m())
      throw std::invalid_argument("Symbol: dimension mismatch");
    if (delta_.depends_on_xi() || delta_.depends_on_x())
      throw std::invalid_argument("Symbol: weight must be scalar in x and xi");
  }

  static Symbol zero(Signature sig, const Poly& delta) {
    return Symbol(sig, delta, Poly(sig.m()));
  }

  const Signature& sig() const { return sig_; }
  const Poly& delta() const { return delta_; }
  const Poly& poly() const { return poly_; }

  int degree() const { return poly_.xi_degree(); }
  bool is_zero() const { return poly_.is_zero(); }

  Symbol xi_part(int k) const { return Symbol(sig_, delta_, poly_.xi_degree_part(k)); }

  Symbol with_poly(Poly p) const { return Symbol(sig_, delta_, std::move(p)); }

  Symbol operator+(const Symbol& o) const {
    require_compatible(o);
    return Symbol(sig_, delta_, poly_ + o.poly_);
  }
  Symbol operator-(const Symbol& o) const {
    require_compatible(o);
    return Symbol(sig_, delta_, poly_ - o.poly_);
  }
  Symbol scaled(const Rational& c) const { return Symbol(sig_, delta_, poly_.scaled(c)); }

  friend bool operator==(const Symbol& a, const Symbol& b) {
    return a.sig_ == b.sig_ && a.delta_ == b.delta_ && a.poly_ == b.poly_;
  }
  friend bool operator!=(const Symbol& a, const Symbol& b) { return !(a == b); }

 private:
  void require_compatible(const Symbol& o) const {
    if (sig_ != o.sig_ || delta_ != o.delta_)
      throw std::invalid_argument("Symbol: signature/weight mismatch");
  }

  Signature sig_;
  Poly delta_;
  Poly poly_;
};

/// Ascending-by-leading order on derivative multi-indices (mirror of the
/// polynomial term order; leading derivatives first).
struct DerivOrder {
  bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
    const int ta = exponent_total(a), tb = exponent_total(b);
    if (ta != tb) return ta > tb;
    return a > b;
  }
};

/// A normal-ordered differential operator sum_alpha C_alpha(x) d^alpha
/// mapping source-weight densities to target-weight densities. Coefficients
/// sit to the left of all derivatives; the term map is canonical.
class DiffOp {
 public:
  using TermMap = std::map<std::vector<int>, Poly, DerivOrder>;

  DiffOp(Signature sig, Poly source_weight, Poly target_weight)
      : sig_(sig), lambda_(std::move(source_weight)), mu_(std::move(target_weight)) {
    if (lambda_.dim() != sig_.m() || mu_.dim() != sig_.m())
      throw std::invalid_argument("DiffOp: weight dimension mismatch");
  }

  const Signature& sig() const { return sig_; }
  const Poly& source_weight() const { return lambda_; }
  const Poly& target_weight() const { return mu_; }
  const TermMap& terms() const { return terms_; }

  void add_term(const std::vector<int>& alpha, const Poly& coeff) {
    if (static_cast<int>(alpha.size()) != sig_.m())
      throw std::invalid_argument("DiffOp: derivative index length mismatch");
    for (int e : alpha)
      if (e < 0) throw std::invalid_argument("DiffOp: negative derivative exponent");
    if (coeff.depends_on_xi())
      throw std::invalid_argument("DiffOp: coefficients must be xi-free");
    if (coeff.is_zero()) return;
    auto [it, inserted] = terms_.emplace(alpha, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  int order() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, exponent_total(a));
    return d;
  }

  bool is_zero() const { return terms_.empty(); }

  /// Applies the operator to a polynomial (the weight tags ride along).
  Poly apply(const Poly& f) const {
    Poly out(sig_.m());
    for (const auto& [alpha, coeff] : terms_) out += coeff * partial_x_multi(f, alpha);
    return out;
  }

  DiffOp operator+(const DiffOp& o) const {
    require_same_weights(o);
    DiffOp r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, c);
    return r;
  }
  DiffOp operator-(const DiffOp& o) const {
    require_same_weights(o);
    DiffOp r = *this;
    for (const auto& [a, c] : o.terms_) r.add_term(a, -c);
    return r;
  }
  DiffOp scaled(const Rational& c) const {
    DiffOp r(sig_, lambda_, mu_);
    for (const auto& [a, co] : terms_) r.add_term(a, co.scaled(c));
    return r;
  }

  friend bool operator==(const DiffOp& a, const DiffOp& b) {
    return a.sig_ == b.sig_ && a.lambda_ == b.lambda_ && a.mu_ == b.mu_ &&
           a.terms_ == b.terms_;
  }
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

 private:
  void require_same_weights(const DiffOp& o) const {
    if (sig_ != o.sig_ || lambda_ != o.lambda_ || mu_ != o.mu_)
      throw std::invalid_argument("DiffOp: weight mismatch");
  }

  Signature sig_;
  Poly lambda_;
  Poly mu_;
  TermMap terms_;
};

/// Normal-ordered composition d1 ∘ d2 via the Leibniz expansion; requires
/// target weight of d2 to equal source weight of d1.
inline DiffOp compose(const DiffOp& d1, const DiffOp& d2) {
  if (d1.sig() != d2.sig() || d1.source_weight() != d2.target_weight())
    throw std::invalid_argument("compose: weight mismatch");
  const int m = d1.sig().m();
  DiffOp out(d1.sig(), d2.source_weight(), d1.target_weight());
  for (const auto& [alpha, ca] : d1.terms()) {
    for (const auto& [beta, cb] : d2.terms()) {
      // d^alpha (cb d^beta) = sum_{gamma <= alpha} binom(alpha,gamma)
      //                         (d^{alpha-gamma} cb) d^{gamma+beta}
      std::vector<int> gamma(m, 0);
      while (true) {
        Rational binom = 1;
        std::vector<int> rest(m);
        for (int i = 0; i < m; ++i) {
          rest[i] = alpha[i] - gamma[i];
          // C(alpha_i, gamma_i)
          BigInt b = 1;
          for (int r = 0; r < gamma[i]; ++r) b = b * (alpha[i] - r) / (r + 1);
          binom *= Rational(b, BigInt(1));
        }
        Poly dcb = partial_x_multi(cb, rest);
        if (!dcb.is_zero()) {
          std::vector<int> idx(m);
          for (int i = 0; i < m; ++i) idx[i] = gamma[i] + beta[i];
          out.add_term(idx, (ca * dcb).scaled(binom));
        }
        // next gamma <= alpha in mixed-radix order
        int i = 0;
        for (; i < m; ++i) {
          if (gamma[i] < alpha[i]) {
            ++gamma[i];
            break;
          }
          gamma[i] = 0;
        }
        if (i == m) break;
      }
    }
  }
  return out;
}

/// Lie derivative on w-densities: f -> sum X^i d_i f + w (div X) f.
inline DiffOp lie_derivative_density(const ConformalField& x, const Poly& w) {
  const int m = x.sig().m();
  DiffOp d(x.sig(), w, w);
  for (int i = 0; i < m; ++i) {
    std::vector<int> idx(m, 0);
    idx[i] = 1;
    d.add_term(idx, x.component(i));
  }
  d.add_term(std::vector<int>(m, 0), w * x.divergence());
  return d;
}

/// Lie derivative on weighted symbols:
///   L_X T = sum X^i d_{x_i} T - sum (d_{x_j} X^i) xi_i d_{xi_j} T
///           + delta (div X) T.
inline Symbol lie_derivative_symbol(const ConformalField& x, const Symbol& t) {
  if (x.sig() != t.sig())
    throw std::invalid_argument("lie_derivative_symbol: signature mismatch");
  const int m = x.sig().m();
  Poly out(m);
  for (int i = 0; i < m; ++i) out += x.component(i) * t.poly().partial_x(i);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Poly dx = x.component(i).partial_x(j);
      if (dx.is_zero()) continue;
      out -= dx * Poly::xi(m, i) * t.poly().partial_xi(j);
    }
  out += t.delta() * x.divergence() * t.poly();
  return t.with_poly(std::move(out));
}

/// Standard ordering: replaces each xi-monomial by the matching coordinate
/// derivative, coefficients on the left; target weight is lambda + delta.
inline DiffOp q_aff(const Symbol& t, const Poly& lambda) {
  const int m = t.sig().m();
  DiffOp d(t.sig(), lambda, lambda + t.delta());
  for (const auto& [mo, c] : t.poly().terms()) {
    Monomial coeff_mono = mo;
    coeff_mono.xi.assign(m, 0);
    Poly coeff(m);
    coeff.add_term(coeff_mono, c);
    d.add_term(mo.xi, coeff);
  }
  return d;
}

/// Inverse of q_aff on canonical operators; the symbol weight is mu - lambda.
inline Symbol q_aff_inv(const DiffOp& d) {
  const int m = d.sig().m();
  Poly p(m);
  for (const auto& [alpha, coeff] : d.terms()) {
    Poly xi_mono = Poly::constant(m, 1);
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < alpha[i]; ++e) xi_mono = xi_mono * Poly::xi(m, i);
    p += coeff * xi_mono;
  }
  return Symbol(d.sig(), d.target_weight() - d.source_weight(), std::move(p));
}

/// Transferred action on symbols, conjugating the operator Lie derivative
/// through the standard ordering:
///   L~_{X^h} T = q_aff^{-1}( L^mu ∘ q_aff(T) - q_aff(T) ∘ L^lambda ).
inline Symbol transferred_action(const AlgebraElement& h, const Symbol& t,
                                 const Poly& lambda) {
  const ConformalField x = vector_field_of(h);
  const Poly mu = lambda + t.delta();
  const DiffOp op = q_aff(t, lambda);
  const DiffOp act = compose(lie_derivative_density(x, mu), op) -
                     compose(op, lie_derivative_density(x, lambda));
  return q_aff_inv(act);
}

/// Contraction tables for gamma(h), valid for one h in g_1. trace_part[a]
/// holds tr([e_a, h]) in the co(p,q) representation; pair_part[a][b] holds
/// the g_{-1} part of [e_a, [e_b, h]].
struct GammaData {
  Signature sig;
  RVec trace_part;
  std::vector<std::vector<RVec>> pair_part;
};

inline GammaData gamma_data(const AlgebraElement& h) {
  if (!h.is_pure_g1())
    throw std::invalid_argument("gamma: argument not in g_1");
  const Signature sig = h.sig();
  const int m = sig.m();
  GammaData d{sig, RVec(m), {}};
  d.pair_part.assign(m, std::vector<RVec>(m));
  std::vector<AlgebraElement> e;
  e.reserve(m);
  for (int i = 0; i < m; ++i) {
    RVec v(m);
    v[i] = 1;
    e.push_back(AlgebraElement::from_vector(sig, v));
  }
  std::vector<AlgebraElement> bh;  // [e_b, h] in g_0
  bh.reserve(m);
  for (int b = 0; b < m; ++b) bh.push_back(bracket(e[b], h));
  for (int a = 0; a < m; ++a) {
    d.trace_part[a] = rmat_trace(bh[a].graded().co);
    for (int b = 0; b < m; ++b)
      d.pair_part[a][b] = bracket(e[a], bh[b]).graded().v;
  }
  return d;
}

/// gamma(h) on a polynomial: slot sums of the decomposable-symbol formula,
/// with xi-derivatives carrying the multiplicity bookkeeping:
///   -lambda sum_a tr([e_a,h]) d_{xi_a}
///   + 1/2 sum_{a,b} <[e_a,[e_b,h]], xi> d_{xi_a} d_{xi_b}.
inline Poly apply_gamma(const GammaData& d, const Poly& p, const Poly& lambda) {
  const int m = d.sig.m();
  Poly out(m);
  for (int a = 0; a < m; ++a) {
    const Poly da = p.partial_xi(a);
    if (da.is_zero()) continue;
    out -= lambda.scaled(d.trace_part[a]) * da;
    for (int b = 0; b < m; ++b) {
      const Poly dab = da.partial_xi(b);
      if (dab.is_zero()) continue;
      Poly lin(m);
      for (int c = 0; c < m; ++c) lin += Poly::xi(m, c).scaled(d.pair_part[a][b][c]);
      out += (lin * dab).scaled(Rational(1, 2));
    }
  }
  return out;
}

/// gamma(h) T for h in g_1; lowers the xi-degree by one and is zero-order
/// in x. Equals transferred_action - lie_derivative_symbol (tested).
inline Symbol gamma(const AlgebraElement& h, const Symbol& t, const Poly& lambda) {
  return t.with_poly(apply_gamma(gamma_data(h), t.poly(), lambda));
}

}  // namespace cq

#endif  // CQ_SYMBOL_HPP
