#ifndef CQ_POLY_HPP
#define CQ_POLY_HPP

// Multivariate polynomials over exact rationals in three disjoint variable
// groups: base-point variables x_1..x_m, fibre variables xi_1..xi_m, and one
// formal weight variable delta (used when eigenvalues are computed as
// polynomials in the shift). Terms are kept canonical: no zero coefficients,
// a fixed deterministic order, equality is term-map equality.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cq/linalg.hpp"
#include "cq/rational.hpp"

namespace cq {

struct Monomial {
  std::vector<int> x;
  std::vector<int> xi;
  int delta = 0;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.delta == b.delta && a.x == b.x && a.xi == b.xi;
  }
};

inline int exponent_total(const std::vector<int>& e) {
  int t = 0;
  for (int v : e) t += v;
  return t;
}

/// Graded lexicographic term order on (xi group, x group, delta), leading
/// terms first. This is the serialization order of every file format.
struct TermOrder {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int axi = exponent_total(a.xi), bxi = exponent_total(b.xi);
    if (axi != bxi) return axi > bxi;
    if (a.xi != b.xi) return a.xi > b.xi;
    const int ax = exponent_total(a.x), bx = exponent_total(b.x);
    if (ax != bx) return ax > bx;
    if (a.x != b.x) return a.x > b.x;
    return a.delta > b.delta;
  }
};

class Poly {
 public:
  using TermMap = std::map<Monomial, Rational, TermOrder>;

  explicit Poly(int m) : m_(check_dim(m)) {}

  static Poly constant(int m, const Rational& c) {
    Poly p(m);
    p.add_term(Monomial{std::vector<int>(m, 0), std::vector<int>(m, 0), 0}, c);
    return p;
  }
  static Poly x(int m, int i) {
    Poly p(m);
    Monomial mo{std::vector<int>(m, 0), std::vector<int>(m, 0), 0};
    mo.x.at(i) = 1;
    p.add_term(mo, 1);
    return p;
  }
  static Poly xi(int m, int i) {
    Poly p(m);
    Monomial mo{std::vector<int>(m, 0), std::vector<int>(m, 0), 0};
    mo.xi.at(i) = 1;
    p.add_term(mo, 1);
    return p;
  }
  static Poly delta_var(int m) {
    Poly p(m);
    p.add_term(Monomial{std::vector<int>(m, 0), std::vector<int>(m, 0), 1}, 1);
    return p;
  }

  int dim() const { return m_; }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  Rational coeff(const Monomial& mo) const {
    const auto it = terms_.find(mo);
    return it == terms_.end() ? Rational() : it->second;
  }

  void add_term(const Monomial& mo, const Rational& c) {
    if (static_cast<int>(mo.x.size()) != m_ || static_cast<int>(mo.xi.size()) != m_)
      throw std::invalid_argument("Poly: monomial dimension mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(mo, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    require_same_dim(o);
    for (const auto& [mo, c] : o.terms_) add_term(mo, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    require_same_dim(o);
    for (const auto& [mo, c] : o.terms_) add_term(mo, -c);
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  Poly operator-() const { return scaled(-1); }

  Poly scaled(const Rational& c) const {
    Poly r(m_);
    if (c.is_zero()) return r;
    for (const auto& [mo, v] : terms_) r.terms_.emplace(mo, v * c);
    return r;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.require_same_dim(b);
    Poly r(a.m_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial mo = ma;
        for (int i = 0; i < a.m_; ++i) {
          mo.x[i] += mb.x[i];
          mo.xi[i] += mb.xi[i];
        }
        mo.delta += mb.delta;
        r.add_term(mo, ca * cb);
      }
    return r;
  }

  Poly partial_x(int i) const { return partial_impl(i, /*xi_group=*/false); }
  Poly partial_xi(int i) const { return partial_impl(i, /*xi_group=*/true); }

  /// Terms whose xi-multi-index has total degree exactly k.
  Poly xi_degree_part(int k) const {
    Poly r(m_);
    for (const auto& [mo, c] : terms_)
      if (exponent_total(mo.xi) == k) r.terms_.emplace(mo, c);
    return r;
  }

  int xi_degree() const { return group_degree(/*xi_group=*/true); }
  int x_degree() const { return group_degree(/*xi_group=*/false); }
  int delta_degree() const {
    int d = -1;
    for (const auto& [mo, c] : terms_)
      if (mo.delta > d) d = mo.delta;
    return d;
  }

  bool depends_on_xi() const { return xi_degree() > 0; }
  bool depends_on_x() const { return x_degree() > 0; }
  bool depends_on_delta() const { return delta_degree() > 0; }

  Poly subst_delta(const Rational& value) const {
    Poly r(m_);
    for (const auto& [mo, c] : terms_) {
      Rational f = c;
      for (int e = 0; e < mo.delta; ++e) f *= value;
      Monomial m2 = mo;
      m2.delta = 0;
      r.add_term(m2, f);
    }
    return r;
  }

  /// Substitutes rational values for the x variables (xi and delta remain).
  Poly eval_x(const RVec& point) const {
    if (static_cast<int>(point.size()) != m_)
      throw std::invalid_argument("Poly::eval_x: point dimension mismatch");
    Poly r(m_);
    for (const auto& [mo, c] : terms_) {
      Rational f = c;
      for (int i = 0; i < m_; ++i)
        for (int e = 0; e < mo.x[i]; ++e) f *= point[i];
      Monomial m2 = mo;
      m2.x.assign(m_, 0);
      r.add_term(m2, f);
    }
    return r;
  }

  /// Value of a constant polynomial (zero for the zero polynomial).
  Rational constant_value() const {
    if (terms_.empty()) return Rational();
    if (terms_.size() != 1) throw std::invalid_argument("Poly::constant_value: not constant");
    const auto& [mo, c] = *terms_.begin();
    if (exponent_total(mo.x) || exponent_total(mo.xi) || mo.delta)
      throw std::invalid_argument("Poly::constant_value: not constant");
    return c;
  }

  /// Coefficients as a univariate polynomial in delta (degree-indexed).
  /// Requires the x and xi groups to be absent.
  RVec delta_coefficients() const {
    RVec out(static_cast<std::size_t>(delta_degree() + 1));
    for (const auto& [mo, c] : terms_) {
      if (exponent_total(mo.x) != 0 || exponent_total(mo.xi) != 0)
        throw std::invalid_argument("Poly::delta_coefficients: not a pure delta polynomial");
      out[mo.delta] = c;
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.m_ == b.m_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Canonical textual form: `coeff * x^(a1,..,am) * xi^(b1,..,bm)` terms
  /// joined by " + " in the deterministic term order; a trailing
  /// " * delta^e" appears only for e > 0. The zero polynomial prints "0".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mo, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << c.str() << " * x^(" << exponents_str(mo.x) << ") * xi^("
         << exponents_str(mo.xi) << ")";
      if (mo.delta > 0) os << " * delta^" << mo.delta;
    }
    return os.str();
  }

  /// Parses the canonical textual form produced by str().
  static Poly parse(int m, const std::string& text) {
    Poly p(m);
    if (text == "0") return p;
    std::size_t pos = 0;
    while (true) {
      const std::size_t next = text.find(" + ", pos);
      const std::string term =
          text.substr(pos, next == std::string::npos ? next : next - pos);
      p.add_term_from_text(term);
      if (next == std::string::npos) break;
      pos = next + 3;
    }
    return p;
  }

 private:
  static int check_dim(int m) {
    if (m < 1) throw std::invalid_argument("Poly: dimension must be >= 1");
    return m;
  }

  void require_same_dim(const Poly& o) const {
    if (m_ != o.m_) throw std::invalid_argument("Poly: dimension mismatch");
  }

  Poly partial_impl(int i, bool xi_group) const {
    if (i < 0 || i >= m_) throw std::out_of_range("Poly: variable index out of range");
    Poly r(m_);
    for (const auto& [mo, c] : terms_) {
      const int e = xi_group ? mo.xi[i] : mo.x[i];
      if (e == 0) continue;
      Monomial m2 = mo;
      if (xi_group)
        --m2.xi[i];
      else
        --m2.x[i];
      r.add_term(m2, c * Rational(e));
    }
    return r;
  }

  int group_degree(bool xi_group) const {
    int d = -1;
    for (const auto& [mo, c] : terms_) {
      const int t = exponent_total(xi_group ? mo.xi : mo.x);
      if (t > d) d = t;
    }
    return d;
  }

  static std::string exponents_str(const std::vector<int>& e) {
    std::ostringstream os;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) os << ",";
      os << e[i];
    }
    return os.str();
  }

  void add_term_from_text(const std::string& term) {
    const std::string x_tag = " * x^(";
    const std::string xi_tag = " * xi^(";
    const std::string delta_tag = " * delta^";
    const std::size_t xpos = term.find(x_tag);
    if (xpos == std::string::npos) throw std::invalid_argument("Poly::parse: missing x factor");
    const std::size_t xend = term.find(')', xpos);
    const std::size_t xipos = term.find(xi_tag, xend);
    if (xend == std::string::npos || xipos == std::string::npos)
      throw std::invalid_argument("Poly::parse: missing xi factor");
    const std::size_t xiend = term.find(')', xipos);
    if (xiend == std::string::npos) throw std::invalid_argument("Poly::parse: unterminated term");
    Monomial mo;
    mo.x = parse_exponents(term.substr(xpos + x_tag.size(), xend - xpos - x_tag.size()));
    mo.xi = parse_exponents(term.substr(xipos + xi_tag.size(), xiend - xipos - xi_tag.size()));
    const std::size_t dpos = term.find(delta_tag, xiend);
    if (dpos != std::string::npos) {
      mo.delta = parse_small_int(term.substr(dpos + delta_tag.size()));
      if (mo.delta <= 0) throw std::invalid_argument("Poly::parse: bad delta exponent");
    }
    if (static_cast<int>(mo.x.size()) != m_ || static_cast<int>(mo.xi.size()) != m_)
      throw std::invalid_argument("Poly::parse: exponent vector length mismatch");
    add_term(mo, Rational::parse(term.substr(0, xpos)));
  }

  static int parse_small_int(const std::string& s) {
    try {
      return std::stoi(s);
    } catch (const std::exception&) {
      throw std::invalid_argument("Poly::parse: bad integer '" + s + "'");
    }
  }

  static std::vector<int> parse_exponents(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
      const std::size_t comma = s.find(',', pos);
      const std::string piece =
          s.substr(pos, comma == std::string::npos ? comma : comma - pos);
      if (piece.empty()) throw std::invalid_argument("Poly::parse: empty exponent");
      const int v = parse_small_int(piece);
      if (v < 0) throw std::invalid_argument("Poly::parse: negative exponent");
      out.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  int m_;
  TermMap terms_;
};

/// Iterated partial x-derivative along a multi-index.
inline Poly partial_x_multi(Poly p, const std::vector<int>& alpha) {
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int r = 0; r < alpha[i]; ++r) p = p.partial_x(static_cast<int>(i));
  return p;
}

}  // namespace cq

#endif  // CQ_POLY_HPP
