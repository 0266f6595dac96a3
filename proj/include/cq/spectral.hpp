#ifndef CQ_SPECTRAL_HPP
#define CQ_SPECTRAL_HPP

// Harmonic (trace) decomposition of symbols into S_(k,s) components, the
// Casimir operator of the symbol representation, its eigenvalues as exact
// polynomials in the shift delta, the degree-lowering operator N, and
// critical-shift detection.

#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cq/algebra.hpp"
#include "cq/poly.hpp"
#include "cq/signature.hpp"
#include "cq/symbol.hpp"

namespace cq {

/// Sign of N relative to 2 sum_i gamma(eps^i) L_{X^{e_i}}, pinned by the
/// requirement that C + N commute with the transferred action of every
/// basis element (see the sign-pinning test; the opposite sign fails).
inline constexpr int kPinnedNSign = +1;

/// One isotypic piece of a degree-k symbol: part = |xi|^{2s} * harmonic with
/// the harmonic factor annihilated by the xi-Laplacian.
struct IsotypicComponent {
  int k = 0;
  int s = 0;
  Symbol part;
  Symbol harmonic;
};

/// Splits a xi-homogeneous degree-k symbol into its S_(k,s) components,
/// s = 0..k/2, pointwise in x (coefficients ride along). Solves the
/// triangular trace system top-down using
///   Delta_J(|xi|^{2s} H_d) = 2s (m + 2d + 2s - 2) |xi|^{2(s-1)} H_d.
inline std::vector<IsotypicComponent> harmonic_decompose(const Symbol& t, int k) {
  const Signature sig = t.sig();
  if (t.poly() != t.poly().xi_degree_part(k))
    throw std::invalid_argument("harmonic_decompose: symbol not homogeneous of the stated degree");
  const int smax = k / 2;
  std::vector<IsotypicComponent> comps;
  comps.reserve(smax + 1);
  const Poly r2 = sig.norm2_xi();
  Poly rest = t.poly();
  for (int s = smax; s >= 0; --s) {
    Poly lap = rest;
    for (int j = 0; j < s; ++j) lap = sig.laplacian_xi(lap);
    Rational c = 1;
    const int d = k - 2 * s;
    for (int sp = s; sp >= 1; --sp) c *= Rational(2 * sp) * Rational(sig.m() + 2 * d + 2 * sp - 2);
    const Poly h = lap.scaled(1 / c);
    Poly part = h;
    for (int j = 0; j < s; ++j) part = part * r2;
    rest -= part;
    comps.push_back(IsotypicComponent{k, s, t.with_poly(part), t.with_poly(h)});
  }
  if (!rest.is_zero())
    throw std::logic_error("harmonic_decompose: trace system left a remainder");
  std::vector<IsotypicComponent> out(comps.rbegin(), comps.rend());
  return out;
}

/// An exact critical shift: a rational root of alpha_{l,t} - alpha_{k,s}
/// over the tree-like index set, or an exact quadratic-root descriptor when
/// a root is irrational.
struct CriticalValue {
  std::optional<Rational> delta;
  std::string descriptor;
  int k = 0, s = 0, l = 0, t = 0;
};

/// Per-signature context: the algebra, its basis vector fields, the inverse
/// Killing matrix, gamma tables for the Killing-dual g_1 basis, and the
/// eigenvalue cache. Everything is immutable after construction except the
/// eigenvalue cache, which fills on first use; for concurrent use, warm it
/// once with eigenvalue_table(kmax).
class Spectral {
 public:
  explicit Spectral(Signature sig) : sig_(sig), alg_(sig) {
    for (int a = 0; a < alg_.dim(); ++a)
      fields_.push_back(vector_field_of(alg_.basis(a)));
    for (int i = 0; i < sig.m(); ++i)
      eps_gamma_.push_back(gamma_data(alg_.killing_dual_g1(i)));
  }

  const Signature& sig() const { return sig_; }
  const Algebra& algebra() const { return alg_; }
  const ConformalField& basis_field(int a) const { return fields_.at(a); }

  /// Casimir of the symbol representation,
  ///   C(T) = sum_{a,b} K^{ab} L_{X^{u_a}} L_{X^{u_b}} T;
  /// degree-preserving, acts as alpha_{k,s} on each S_(k,s).
  Symbol casimir(const Symbol& t) const {
    const int n = alg_.dim();
    std::vector<Symbol> w;
    w.reserve(n);
    for (int b = 0; b < n; ++b) w.push_back(lie_derivative_symbol(fields_[b], t));
    Symbol out = Symbol::zero(sig_, t.delta());
    const RMat& kinv = alg_.killing_inverse();
    for (int a = 0; a < n; ++a) {
      Poly va(sig_.m());
      for (int b = 0; b < n; ++b)
        if (!kinv[a][b].is_zero()) va += w[b].poly().scaled(kinv[a][b]);
      out = out + lie_derivative_symbol(fields_[a], t.with_poly(va));
    }
    return out;
  }

  /// alpha_{k,s} as an exact polynomial in delta, computed by applying the
  /// Casimir (with delta formal) to a constant-coefficient element of
  /// S_(k,s) and extracting the scalar; verifies proportionality and that
  /// the observed delta-degree is at most two.
  Poly casimir_eigenvalue(int k, int s) const {
    const auto key = std::make_pair(k, s);
    const auto it = alpha_.find(key);
    if (it != alpha_.end()) return it->second;
    const Symbol rep = isotypic_representative(k, s, 0);
    const Poly alpha = eigenvalue_on(rep);
    alpha_.emplace(key, alpha);
    return alpha;
  }

  /// Extracts the scalar alpha with casimir(rep) = alpha * rep; throws if
  /// the output is not an exact multiple (an implementation bug, not a
  /// domain error).
  Poly eigenvalue_on(const Symbol& rep) const {
    if (rep.is_zero()) throw std::invalid_argument("eigenvalue_on: zero representative");
    const Symbol out = casimir(rep);
    const auto& [mono, c] = *rep.poly().terms().begin();
    Poly alpha(sig_.m());
    for (const auto& [mo, co] : out.poly().terms()) {
      if (mo.x != mono.x || mo.xi != mono.xi) continue;
      Monomial dm{std::vector<int>(sig_.m(), 0), std::vector<int>(sig_.m(), 0), mo.delta};
      alpha.add_term(dm, co / c);
    }
    if (out.poly() != (alpha * rep.poly()))
      throw std::logic_error("casimir_eigenvalue: output not proportional to the representative");
    if (alpha.delta_degree() > 2)
      throw std::logic_error("casimir_eigenvalue: delta-degree exceeds 2");
    return alpha;
  }

  /// A constant-coefficient element of S_(k,s) with a formal delta weight.
  /// variant selects different harmonic seeds (for representative-
  /// independence checks).
  Symbol isotypic_representative(int k, int s, int variant) const {
    const int m = sig_.m();
    const int d = k - 2 * s;
    Poly seed = Poly::constant(m, 1);
    if (d > 0) {
      Poly lin = Poly::xi(m, variant % m);
      if (variant >= m) lin += Poly::xi(m, (variant + 1) % m);
      for (int e = 0; e < d; ++e) seed = seed * lin;
    }
    const Symbol hom(sig_, Poly::delta_var(m), seed);
    Poly h = d > 0 ? harmonic_decompose(hom, d).front().part.poly() : seed;
    if (h.is_zero())
      throw std::invalid_argument("isotypic_representative: empty S_(k,s) for this signature");
    for (int e = 0; e < s; ++e) h = h * sig_.norm2_xi();
    return Symbol(sig_, Poly::delta_var(m), h);
  }

  std::map<std::pair<int, int>, Poly> eigenvalue_table(int kmax) const {
    std::map<std::pair<int, int>, Poly> table;
    for (int k = 0; k <= kmax; ++k)
      for (int s = 0; 2 * s <= k; ++s) table.emplace(std::make_pair(k, s), casimir_eigenvalue(k, s));
    return table;
  }

  /// N(T) = sign * 2 sum_i gamma(eps^i) L_{X^{e_i}} T; lowers the xi-degree
  /// by one and is first order in x.
  Symbol n_operator(const Symbol& t, const Poly& lambda, int sign = kPinnedNSign) const {
    Symbol out = Symbol::zero(sig_, t.delta());
    for (int i = 0; i < sig_.m(); ++i) {
      const Symbol lt = lie_derivative_symbol(fields_[i], t);
      out = out + t.with_poly(apply_gamma(eps_gamma_[i], lt.poly(), lambda));
    }
    return out.scaled(Rational(2 * sign));
  }

  /// All critical shifts of S_(k,s): exact roots of
  /// alpha_{l,t}(delta) - alpha_{k,s}(delta) over the tree-like index set
  /// {(l,t) : 0 <= s-t <= k-l, l < k}. Rational roots are re-verified by
  /// substitution; irrational roots are reported as descriptors.
  std::vector<CriticalValue> critical_deltas(int k, int s) const {
    std::vector<CriticalValue> out;
    const Poly aks = casimir_eigenvalue(k, s);
    for (int l = k - 1; l >= 0; --l)
      for (int t = 0; 2 * t <= l; ++t) {
        if (s - t < 0 || s - t > k - l) continue;
        const Poly diff = casimir_eigenvalue(l, t) - aks;
        for (CriticalValue cv : roots_in_delta(diff)) {
          cv.k = k;
          cv.s = s;
          cv.l = l;
          cv.t = t;
          if (cv.delta && !diff.subst_delta(*cv.delta).is_zero())
            throw std::logic_error("critical_deltas: root fails re-substitution");
          out.push_back(std::move(cv));
        }
      }
    return out;
  }

  /// First witnessing pair for which delta is critical, if any.
  std::optional<CriticalValue> find_critical(const Rational& delta, int k, int s) const {
    for (const CriticalValue& cv : critical_deltas(k, s))
      if (cv.delta && *cv.delta == delta) return cv;
    return std::nullopt;
  }

 private:
  std::vector<CriticalValue> roots_in_delta(const Poly& diff) const {
    std::vector<CriticalValue> out;
    if (diff.is_zero())
      throw std::logic_error("critical_deltas: identically equal eigenvalues");
    RVec c = diff.delta_coefficients();
    while (c.size() < 3) c.push_back(Rational());
    if (c[2].is_zero()) {
      if (c[1].is_zero()) return out;  // nonzero constant: no roots
      out.push_back(make_root(-c[0] / c[1]));
      return out;
    }
    const Rational disc = c[1] * c[1] - 4 * c[2] * c[0];
    if (disc.sign() < 0) return out;
    Rational root;
    if (rational_sqrt(disc, &root)) {
      out.push_back(make_root((-c[1] + root) / (2 * c[2])));
      if (!root.is_zero()) out.push_back(make_root((-c[1] - root) / (2 * c[2])));
    } else {
      for (int sign : {+1, -1}) {
        CriticalValue cv;
        std::ostringstream os;
        os << "(" << (-c[1]).str() << (sign > 0 ? " + " : " - ") << "sqrt(" << disc.str()
           << ")) / " << (2 * c[2]).str();
        cv.descriptor = os.str();
        out.push_back(std::move(cv));
      }
    }
    return out;
  }

  static CriticalValue make_root(const Rational& r) {
    CriticalValue cv;
    cv.delta = r;
    cv.descriptor = r.str();
    return cv;
  }

  Signature sig_;
  Algebra alg_;
  std::vector<ConformalField> fields_;
  std::vector<GammaData> eps_gamma_;
  mutable std::map<std::pair<int, int>, Poly> alpha_;
};

}  // namespace cq

#endif  // CQ_SPECTRAL_HPP
