#ifndef CQ_IO_HPP
#define CQ_IO_HPP

// JSON file formats: problem files, operator files and curvature files.
// Exact rationals are serialized as strings ("n" or "n/d"), never as
// floating point; term order follows the canonical polynomial order, so
// re-serializing a parsed file is byte-identical.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cq/curved.hpp"
#include "cq/poly.hpp"
#include "cq/quantizer.hpp"
#include "cq/signature.hpp"
#include "cq/symbol.hpp"

namespace cq {

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

using Json = nlohmann::ordered_json;

namespace detail {

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline Rational rational_field(const Json& j, const char* key) {
  try {
    return Rational::parse(j.at(key).get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::vector<int> int_vector(const Json& j, int expect, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != expect)
    throw ParseError(std::string(what) + ": expected an array of length " +
                     std::to_string(expect));
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 1000)
      throw ParseError(std::string(what) + ": exponents must be small nonnegative integers");
    out.push_back(v.get<int>());
  }
  return out;
}

inline Signature signature_fields(const Json& j) {
  try {
    const int m = j.at("m").get<int>();
    const int p = j.at("p").get<int>();
    const int q = j.at("q").get<int>();
    if (p < 0 || q < 0 || p + q != m)
      throw ParseError("signature: require p,q >= 0 and p + q = m");
    return Signature(p, q);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("signature fields: ") + e.what());
  }
}

}  // namespace detail

struct ProblemFile {
  Signature sig;
  Rational lambda;
  Rational mu;
  Poly symbol;
};

inline ProblemFile parse_problem_json(const std::string& text) {
  const Json j = detail::parse_json(text);
  const Signature sig = detail::signature_fields(j);
  const int m = sig.m();
  ProblemFile pf{sig, detail::rational_field(j, "lambda"), detail::rational_field(j, "mu"),
                 Poly(m)};
  if (!j.contains("symbol") || !j.at("symbol").is_array())
    throw ParseError("problem: missing 'symbol' array");
  for (const auto& term : j.at("symbol")) {
    const Rational c = detail::rational_field(term, "coeff");
    if (c.is_zero()) throw ParseError("problem: zero coefficient in symbol term");
    Monomial mo;
    mo.x = detail::int_vector(term.at("x_exponents"), m, "x_exponents");
    mo.xi = detail::int_vector(term.at("xi_exponents"), m, "xi_exponents");
    pf.symbol.add_term(mo, c);
  }
  return pf;
}

inline std::string problem_to_json(const ProblemFile& pf) {
  Json j;
  j["m"] = pf.sig.m();
  j["p"] = pf.sig.p();
  j["q"] = pf.sig.q();
  j["lambda"] = pf.lambda.str();
  j["mu"] = pf.mu.str();
  j["symbol"] = Json::array();
  for (const auto& [mo, c] : pf.symbol.terms()) {
    Json term;
    term["coeff"] = c.str();
    term["x_exponents"] = mo.x;
    term["xi_exponents"] = mo.xi;
    j["symbol"].push_back(term);
  }
  return j.dump(2) + "\n";
}

inline std::string operator_to_json(const DiffOp& d) {
  Json j;
  j["m"] = d.sig().m();
  j["p"] = d.sig().p();
  j["q"] = d.sig().q();
  j["lambda"] = d.source_weight().constant_value().str();
  j["mu"] = d.target_weight().constant_value().str();
  j["terms"] = Json::array();
  for (const auto& [alpha, coeff] : d.terms()) {
    Json term;
    term["coeff_poly"] = coeff.str();
    term["derivative_exponents"] = alpha;
    j["terms"].push_back(term);
  }
  return j.dump(2) + "\n";
}

inline DiffOp parse_operator_json(const std::string& text) {
  const Json j = detail::parse_json(text);
  const Signature sig = detail::signature_fields(j);
  const int m = sig.m();
  DiffOp d(sig, Poly::constant(m, detail::rational_field(j, "lambda")),
           Poly::constant(m, detail::rational_field(j, "mu")));
  if (!j.contains("terms") || !j.at("terms").is_array())
    throw ParseError("operator: missing 'terms' array");
  for (const auto& term : j.at("terms")) {
    try {
      d.add_term(detail::int_vector(term.at("derivative_exponents"), m, "derivative_exponents"),
                 Poly::parse(m, term.at("coeff_poly").get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("operator term: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("operator term: ") + e.what());
    }
  }
  return d;
}

/// Curvature file: kappa0 as nested arrays [j][k][i][l] and kappa1 as
/// [j][k][l], all entries exact rationals as strings.
inline CurvatureData parse_curvature_json(const std::string& text) {
  const Json j = detail::parse_json(text);
  const Signature sig = detail::signature_fields(j);
  const int m = sig.m();
  CurvatureData kappa = CurvatureData::zero(sig);
  auto rational_at = [](const Json& v) {
    if (!v.is_string()) throw ParseError("curvature: entries must be rational strings");
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("curvature entry: ") + e.what());
    }
  };
  try {
    const Json& k0 = j.at("kappa0");
    const Json& k1 = j.at("kappa1");
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c)
            kappa.kappa0[a][b][r][c] = rational_at(k0.at(a).at(b).at(r).at(c));
        for (int c = 0; c < m; ++c) kappa.kappa1[a][b][c] = rational_at(k1.at(a).at(b).at(c));
      }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curvature arrays: ") + e.what());
  }
  return kappa;
}

inline std::string curvature_to_json(const CurvatureData& kappa) {
  const int m = kappa.sig.m();
  Json j;
  j["m"] = m;
  j["p"] = kappa.sig.p();
  j["q"] = kappa.sig.q();
  Json k0 = Json::array();
  Json k1 = Json::array();
  for (int a = 0; a < m; ++a) {
    Json row0 = Json::array();
    Json row1 = Json::array();
    for (int b = 0; b < m; ++b) {
      Json mat = Json::array();
      for (int r = 0; r < m; ++r) {
        Json mrow = Json::array();
        for (int c = 0; c < m; ++c) mrow.push_back(kappa.kappa0[a][b][r][c].str());
        mat.push_back(mrow);
      }
      row0.push_back(mat);
      Json cov = Json::array();
      for (int c = 0; c < m; ++c) cov.push_back(kappa.kappa1[a][b][c].str());
      row1.push_back(cov);
    }
    k0.push_back(row0);
    k1.push_back(row1);
  }
  j["kappa0"] = k0;
  j["kappa1"] = k1;
  return j.dump(2) + "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace cq

#endif  // CQ_IO_HPP
