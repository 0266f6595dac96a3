#ifndef CQ_QUANTIZER_HPP
#define CQ_QUANTIZER_HPP

// The recursive construction of the equivariant lift T_k..T_0, the flat
// quantization map, and the equivariance verifier.

#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cq/spectral.hpp"
#include "cq/symbol.hpp"

namespace cq {

class CriticalValueError : public std::runtime_error {
 public:
  CriticalValueError(const Rational& delta_, int k_, int s_, int l_, int t_)
      : std::runtime_error(message(delta_, k_, s_, l_, t_)),
        delta(delta_), k(k_), s(s_), l(l_), t(t_) {}

  Rational delta;
  int k, s, l, t;

 private:
  static std::string message(const Rational& d, int k, int s, int l, int t) {
    std::ostringstream os;
    os << "critical value delta=" << d.str() << " from (k,s)=(" << k << "," << s
       << ") -> (l,t)=(" << l << "," << t << ")";
    return os.str();
  }
};

class DegreeCapError : public std::runtime_error {
 public:
  DegreeCapError(int degree_, int cap_)
      : std::runtime_error(message(degree_, cap_)), degree(degree_), cap(cap_) {}
  int degree, cap;

 private:
  static std::string message(int d, int c) {
    std::ostringstream os;
    os << "symbol degree " << d << " exceeds the verified cap " << c
       << " (pass allow_high_degree to proceed)";
    return os.str();
  }
};

/// A quantization problem: weights lambda, mu (so delta = mu - lambda) and a
/// top symbol of bounded degree. The degree cap is a configuration flag.
struct Problem {
  Signature sig;
  Rational lambda;
  Rational mu;
  Symbol top;
  int degree_cap = 4;
  bool allow_high_degree = false;

  Problem(Signature sig_, Rational lambda_, Rational mu_, Symbol top_)
      : sig(sig_), lambda(std::move(lambda_)), mu(std::move(mu_)), top(std::move(top_)) {
    if (top.sig() != sig) throw std::invalid_argument("Problem: signature mismatch");
    if (top.delta() != Poly::constant(sig.m(), delta()))
      throw std::invalid_argument("Problem: symbol weight must equal mu - lambda");
  }

  Rational delta() const { return mu - lambda; }
};

inline Problem make_problem(Signature sig, const Rational& lambda, const Rational& mu,
                            const Poly& symbol_poly) {
  return Problem(sig, lambda, mu,
                 Symbol(sig, Poly::constant(sig.m(), mu - lambda), symbol_poly));
}

/// At a critical shift the resonant divisions are impossible; Strict raises,
/// DropResonant zeroes the resonant components instead (used only for
/// affine-sector verification, where any natural lift is equivariant).
enum class ResonancePolicy { kStrict, kDropResonant };

/// The lift T_hat = T_k + ... + T_0, graded by xi-degree, with the (k,s)
/// decomposition that produced it.
struct Lift {
  Signature sig;
  std::vector<Symbol> components;  // index = xi-degree
  std::vector<std::pair<int, int>> provenance;

  Symbol flatten() const {
    Symbol out = components.at(0);
    for (std::size_t l = 1; l < components.size(); ++l) out = out + components[l];
    return out;
  }
};

class Quantizer {
 public:
  explicit Quantizer(Signature sig) : spec_(sig) {}

  const Spectral& spectral() const { return spec_; }
  const Signature& sig() const { return spec_.sig(); }

  /// Degree-cap and criticality checks: delta must not be critical for any
  /// (k,s) carrying a nonzero component of the top symbol.
  void validate(const Problem& p, ResonancePolicy policy = ResonancePolicy::kStrict) const {
    const int kmax = p.top.degree();
    if (kmax > p.degree_cap && !p.allow_high_degree)
      throw DegreeCapError(kmax, p.degree_cap);
    if (policy == ResonancePolicy::kDropResonant) return;
    for (int k = 0; k <= kmax; ++k) {
      const Symbol part = p.top.xi_part(k);
      if (part.is_zero()) continue;
      for (const IsotypicComponent& comp : harmonic_decompose(part, k)) {
        if (comp.part.is_zero()) continue;
        if (const auto cv = spec_.find_critical(p.delta(), k, comp.s))
          throw CriticalValueError(p.delta(), cv->k, cv->s, cv->l, cv->t);
      }
    }
  }

  /// Builds the lift per (k,s) isotypic component: downward from the top,
  /// each level solves the degreewise eigenvalue equation
  ///   C T_l + N(T_{l+1}) = alpha_{k,s} T_l,
  /// i.e. T_l = sum_t R_(l,t) / (alpha_{k,s} - alpha_{l,t}) with
  /// R = N(T_{l+1}). Components of R outside the tree-like subspace are a
  /// construction violation and are reported, not assumed away.
  Lift lift(const Problem& p, ResonancePolicy policy = ResonancePolicy::kStrict) const {
    validate(p, policy);
    const int kmax = std::max(p.top.degree(), 0);
    const Poly lambda = Poly::constant(sig().m(), p.lambda);
    const Rational delta = p.delta();
    Lift out{sig(), std::vector<Symbol>(kmax + 1, Symbol::zero(sig(), p.top.delta())), {}};
    for (int k = 0; k <= kmax; ++k) {
      const Symbol part = p.top.xi_part(k);
      if (part.is_zero()) continue;
      for (const IsotypicComponent& comp : harmonic_decompose(part, k)) {
        if (comp.part.is_zero()) continue;
        out.provenance.emplace_back(k, comp.s);
        const Rational alpha_top =
            spec_.casimir_eigenvalue(k, comp.s).subst_delta(delta).constant_value();
        Symbol level = comp.part;
        out.components[k] = out.components[k] + level;
        for (int l = k - 1; l >= 0; --l) {
          const Symbol r = spec_.n_operator(level, lambda);
          Symbol next = Symbol::zero(sig(), p.top.delta());
          if (!r.is_zero()) {
            for (const IsotypicComponent& rc : harmonic_decompose(r, l)) {
              if (rc.part.is_zero()) continue;
              if (comp.s - rc.s < 0 || comp.s - rc.s > k - l) {
                std::ostringstream os;
                os << "lift: N image left the tree-like subspace at (l,t)=(" << l << ","
                   << rc.s << ") from (k,s)=(" << k << "," << comp.s << ")";
                throw std::logic_error(os.str());
              }
              const Rational denom =
                  alpha_top -
                  spec_.casimir_eigenvalue(l, rc.s).subst_delta(delta).constant_value();
              if (denom.is_zero()) {
                if (policy == ResonancePolicy::kDropResonant) continue;
                throw CriticalValueError(delta, k, comp.s, l, rc.s);
              }
              next = next + rc.part.scaled(1 / denom);
            }
          }
          out.components[l] = out.components[l] + next;
          level = next;
        }
      }
    }
    return out;
  }

  /// q_aff applied to the full lift; the principal symbol equals the input.
  DiffOp quantize(const Problem& p, ResonancePolicy policy = ResonancePolicy::kStrict) const {
    return q_aff(lift(p, policy).flatten(), Poly::constant(sig().m(), p.lambda));
  }

  /// Equivariance residual for one algebra element:
  ///   q_aff_inv( L~_{X^h}( quantize(T) ) ) - flatten( lift( L_{X^h} T ) );
  /// zero iff the quantization commutes with the action of h.
  Symbol verify_equivariance(const Problem& p, const AlgebraElement& h,
                             ResonancePolicy policy = ResonancePolicy::kStrict) const {
    return equivariance_residual(p, quantize(p, policy), h, policy);
  }

  /// Same, with the quantized operator precomputed (for loops over a basis).
  Symbol equivariance_residual(const Problem& p, const DiffOp& quantized,
                               const AlgebraElement& h,
                               ResonancePolicy policy = ResonancePolicy::kStrict) const {
    const int m = sig().m();
    const ConformalField x = vector_field_of(h);
    const Poly lam = Poly::constant(m, p.lambda);
    const Poly mu = Poly::constant(m, p.mu);
    const DiffOp acted = compose(lie_derivative_density(x, mu), quantized) -
                         compose(quantized, lie_derivative_density(x, lam));
    const Symbol side1 = q_aff_inv(acted);
    const Problem moved(p.sig, p.lambda, p.mu, lie_derivative_symbol(x, p.top));
    Problem moved_cfg = moved;
    moved_cfg.degree_cap = p.degree_cap;
    moved_cfg.allow_high_degree = p.allow_high_degree;
    const Symbol side2 = lift(moved_cfg, policy).flatten();
    return side1 - side2;
  }

 private:
  Spectral spec_;
};

}  // namespace cq

#endif  // CQ_QUANTIZER_HPP
