// confq: command-line front end. Subcommands: quantize, verify, criticals,
// curved-check. All files are UTF-8 JSON with exact rationals as strings.
//
// Exit codes: 0 success, 1 check failure, 2 parse error, 3 critical shift,
// 4 degree above the verified cap without --allow-high-degree.

#include <algorithm>
#include <array>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "cq/cq.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitCritical = 3;
constexpr int kExitDegree = 4;

cq::Signature parse_signature_flag(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw cq::ParseError("--signature expects 'p,q'");
  try {
    return cq::Signature(std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1)));
  } catch (const std::exception&) {
    throw cq::ParseError("--signature expects 'p,q' with nonnegative integers");
  }
}

struct ProblemFlags {
  std::string path;
  std::string signature;
  std::string lambda;
  std::string mu;
  bool allow_high_degree = false;
};

cq::Problem load_problem(const ProblemFlags& f) {
  cq::ProblemFile pf = cq::parse_problem_json(cq::read_file(f.path));
  if (!f.signature.empty()) {
    const cq::Signature sig = parse_signature_flag(f.signature);
    if (sig.m() != pf.sig.m())
      throw cq::ParseError("--signature override must keep m = p + q fixed");
    pf.sig = sig;
  }
  if (!f.lambda.empty()) pf.lambda = cq::Rational::parse(f.lambda);
  if (!f.mu.empty()) pf.mu = cq::Rational::parse(f.mu);
  cq::Problem p = cq::make_problem(pf.sig, pf.lambda, pf.mu, pf.symbol);
  p.allow_high_degree = f.allow_high_degree;
  return p;
}

int cmd_quantize(const ProblemFlags& flags, const std::string& out_path, bool curved_guards) {
  const cq::Problem p = load_problem(flags);
  if (curved_guards && p.top.degree() >= 4) {
    const int m = p.sig.m();
    for (int num : {m + 1, m + 2})
      if (p.delta() == cq::Rational(num, m))
        throw cq::CriticalDenominatorError(p.delta(), m);
  }
  cq::Quantizer q(p.sig);
  const cq::DiffOp op = q.quantize(p);
  const std::string text = cq::operator_to_json(op);
  if (out_path.empty())
    std::cout << text;
  else
    cq::write_file(out_path, text);
  return kExitOk;
}

std::vector<int> parse_grade_list(const std::string& s) {
  std::vector<int> grades;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string piece = s.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (piece != "-1" && piece != "0" && piece != "1")
      throw cq::ParseError("--grade expects a comma list drawn from -1,0,1");
    grades.push_back(std::stoi(piece));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return grades;
}

int cmd_verify(const ProblemFlags& flags, const std::string& grade_list, bool fuzz) {
  const cq::Problem p = load_problem(flags);
  std::vector<int> grades = {-1, 0, 1};
  if (!grade_list.empty()) grades = parse_grade_list(grade_list);
  const bool affine_only =
      std::find(grades.begin(), grades.end(), 1) == grades.end();
  const cq::ResonancePolicy policy =
      affine_only ? cq::ResonancePolicy::kDropResonant : cq::ResonancePolicy::kStrict;

  cq::Quantizer q(p.sig);
  cq::Lift lift = q.lift(p, policy);
  if (fuzz) {
    // Negative control: perturb the lift so some residual must be nonzero.
    lift.components[0] = lift.components[0] +
        cq::Symbol(p.sig, lift.components[0].delta(), cq::Poly::x(p.sig.m(), 0));
    std::cout << "fuzz: lift corrupted by x_0\n";
  }
  const cq::DiffOp op = cq::q_aff(lift.flatten(), cq::Poly::constant(p.sig.m(), p.lambda));

  const cq::Algebra& alg = q.spectral().algebra();
  int checked = 0, nonzero = 0;
  for (int a = 0; a < alg.dim(); ++a) {
    const int grade = alg.basis_grade(a);
    if (std::find(grades.begin(), grades.end(), grade) == grades.end()) continue;
    const cq::Symbol res = q.equivariance_residual(p, op, alg.basis(a), policy);
    ++checked;
    if (res.is_zero()) {
      std::cout << "generator " << a << " grade=" << grade << ": residual=0\n";
    } else {
      ++nonzero;
      std::cout << "generator " << a << " grade=" << grade
                << ": residual NONZERO: " << res.poly().str() << "\n";
    }
  }
  std::cout << "generators checked: " << checked << "; nonzero residuals: " << nonzero
            << "\n";
  std::cout << (nonzero == 0 ? "EQUIVARIANT" : "NOT EQUIVARIANT") << "\n";
  return nonzero == 0 ? kExitOk : kExitCheckFailed;
}

int cmd_criticals(const std::string& signature, int kmax) {
  const cq::Signature sig = parse_signature_flag(signature);
  cq::Spectral spec(sig);
  // (delta or descriptor) -> earliest witness by (k,s,l,t).
  std::vector<cq::CriticalValue> all;
  for (int k = 0; k <= kmax; ++k)
    for (int s = 0; 2 * s <= k; ++s)
      for (const auto& cv : spec.critical_deltas(k, s)) all.push_back(cv);
  std::sort(all.begin(), all.end(), [](const cq::CriticalValue& a, const cq::CriticalValue& b) {
    if (a.delta.has_value() != b.delta.has_value()) return a.delta.has_value();
    if (a.delta && b.delta && *a.delta != *b.delta) return *a.delta < *b.delta;
    if (a.descriptor != b.descriptor) return a.descriptor < b.descriptor;
    return std::tie(a.k, a.s, a.l, a.t) < std::tie(b.k, b.s, b.l, b.t);
  });
  std::string last;
  for (const auto& cv : all) {
    if (cv.descriptor == last) continue;  // one line per distinct delta
    last = cv.descriptor;
    std::cout << "delta=" << cv.descriptor << " from (" << cv.k << "," << cv.s << ")->("
              << cv.l << "," << cv.t << ")\n";
  }
  return kExitOk;
}

bool report(const char* name, bool ok) {
  std::cout << (ok ? "pass" : "FAIL") << ": " << name << "\n";
  return ok;
}

int cmd_curved_check(const std::string& path, const std::string& lambda_s,
                     const std::string& mu_s, std::uint64_t seed) {
  const cq::CurvatureData kappa = cq::parse_curvature_json(cq::read_file(path));
  const cq::Signature sig = kappa.sig;
  const int m = sig.m();
  const cq::Rational lambda = cq::Rational::parse(lambda_s);
  const cq::Rational mu = mu_s.empty() ? lambda : cq::Rational::parse(mu_s);
  const cq::Rational delta = mu - lambda;
  cq::Rng rng(seed);
  bool ok = true;

  const cq::NormalityReport norm = cq::check_normality(kappa);
  ok &= report("input curvature is normal", norm.ok);
  for (const auto& v : norm.violations)
    std::cout << "  violation " << v.kind << " at (j,l)=(" << v.j << "," << v.l << ")\n";

  {  // Degeneration: zero curvature and zero jets give identically zero corrections.
    const cq::CurvatureData zero = cq::CurvatureData::zero(sig);
    const auto zjet = cq::constant_curvature_jet(zero);
    bool all_zero = true;
    for (int trial = 0; trial < 10; ++trial) {
      const cq::RVec h = cq::random_rvec(sig, rng);
      const cq::RVec x = cq::random_rvec(sig, rng);
      cq::Poly x4 = cq::Poly::constant(m, 1);
      cq::Poly xl(m);
      for (int c = 0; c < m; ++c) xl += cq::Poly::xi(m, c).scaled(x[c]);
      for (int e = 0; e < 4; ++e) x4 = x4 * xl;
      const auto tjet = cq::random_scalar_jet(sig, rng);
      all_zero &= cq::gamma3(sig, h, x4, zero).is_zero();
      all_zero &= cq::gamma4(sig, h, x4, zero, lambda).is_zero();
      all_zero &= cq::q3_correction(sig, tjet, zjet, x, delta).is_zero();
      all_zero &= cq::q4_correction(sig, tjet, zjet, x, delta, lambda).is_zero();
    }
    ok &= report("zero curvature degenerates to zero corrections", all_zero);
  }

  {  // Polarization: diagonal consistency on seeded (h, X) against the input
     // curvature and random curvature data.
    bool consistent = true;
    for (int trial = 0; trial < 10; ++trial) {
      const cq::CurvatureData k2 = trial == 0 ? kappa : cq::random_curvature(sig, rng);
      const cq::RVec h = cq::random_rvec(sig, rng);
      const cq::RVec x = cq::random_rvec(sig, rng);
      cq::Poly x4 = cq::Poly::constant(m, 1);
      cq::Poly xl(m);
      for (int c = 0; c < m; ++c) xl += cq::Poly::xi(m, c).scaled(x[c]);
      for (int e = 0; e < 4; ++e) x4 = x4 * xl;
      const std::array<cq::RVec, 4> diag = {x, x, x, x};
      consistent &= cq::gamma3(sig, h, x4, k2) ==
                    cq::polarize_quartic(m, [&](const cq::RVec& y) {
                      cq::Poly y4 = cq::Poly::constant(m, 1);
                      cq::Poly yl(m);
                      for (int c = 0; c < m; ++c) yl += cq::Poly::xi(m, c).scaled(y[c]);
                      for (int e = 0; e < 4; ++e) y4 = y4 * yl;
                      return cq::gamma3(sig, h, y4, k2);
                    }, diag);
      const auto tjet = cq::random_scalar_jet(sig, rng);
      const auto kjet = cq::constant_curvature_jet(k2);
      consistent &= cq::q3_polarized(sig, tjet, kjet, diag, delta) ==
                    cq::q3_correction(sig, tjet, kjet, x, delta);
    }
    ok &= report("polarization agrees on the diagonal", consistent);
  }

  {  // Denominator guards.
    bool guarded = true;
    const auto tjet = cq::random_scalar_jet(sig, rng);
    const auto kjet = cq::constant_curvature_jet(kappa);
    const cq::RVec x = cq::random_rvec(sig, rng);
    try {
      cq::q3_correction(sig, tjet, kjet, x, cq::Rational(m + 2, m));
      guarded = false;
    } catch (const cq::CriticalDenominatorError&) {}
    for (int num : {m + 1, m + 2}) {
      try {
        cq::q4_correction(sig, tjet, kjet, x, cq::Rational(num, m), lambda);
        guarded = false;
      } catch (const cq::CriticalDenominatorError&) {}
    }
    ok &= report("denominator guards trigger at (m+1)/m and (m+2)/m", guarded);
  }

  std::cout << (ok ? "CURVED CHECKS PASSED" : "CURVED CHECKS FAILED") << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact conformally equivariant quantization on flat R^m"};
  app.require_subcommand(1);

  ProblemFlags qflags;
  std::string out_path;
  bool curved_guards = false;
  CLI::App* quantize = app.add_subcommand("quantize", "quantize a symbol file");
  quantize->add_option("input", qflags.path, "problem JSON file")->required();
  quantize->add_option("-o,--output", out_path, "operator JSON output path (default stdout)");
  quantize->add_option("--signature", qflags.signature, "override signature p,q");
  quantize->add_option("--lambda", qflags.lambda, "override lambda n/d");
  quantize->add_option("--mu", qflags.mu, "override mu n/d");
  quantize->add_flag("--allow-high-degree", qflags.allow_high_degree,
                     "quantize beyond the verified degree cap");
  quantize->add_flag("--curved-check", curved_guards,
                     "also enforce the degree-4 curved-correction denominators");

  ProblemFlags vflags;
  std::string grade_list;
  bool fuzz = false;
  CLI::App* verify = app.add_subcommand("verify", "verify equivariance over the algebra basis");
  verify->add_option("input", vflags.path, "problem JSON file")->required();
  verify->add_option("--signature", vflags.signature, "override signature p,q");
  verify->add_option("--lambda", vflags.lambda, "override lambda n/d");
  verify->add_option("--mu", vflags.mu, "override mu n/d");
  verify->add_option("--grade", grade_list, "restrict generators to these grades, e.g. -1,0");
  verify->add_flag("--allow-high-degree", vflags.allow_high_degree,
                   "verify beyond the verified degree cap");
  verify->add_flag("--fuzz", fuzz, "corrupt the lift first (negative control)");

  std::string csig = "2,0";
  int kmax = 4;
  CLI::App* criticals = app.add_subcommand("criticals", "list critical shift values");
  criticals->add_option("--signature", csig, "signature p,q");
  criticals->add_option("--kmax", kmax, "maximum symbol degree")->check(CLI::NonNegativeNumber);

  std::string curv_path, clambda = "1/2", cmu;
  std::uint64_t seed = 0;
  CLI::App* curved = app.add_subcommand("curved-check", "run curvature-data check suites");
  curved->add_option("input", curv_path, "curvature JSON file")->required();
  curved->add_option("--lambda", clambda, "lambda n/d for the correction formulas");
  curved->add_option("--mu", cmu, "mu n/d (default: lambda, so delta = 0)");
  curved->add_option("--seed", seed, "seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (quantize->parsed()) return cmd_quantize(qflags, out_path, curved_guards);
    if (verify->parsed()) return cmd_verify(vflags, grade_list, fuzz);
    if (criticals->parsed()) return cmd_criticals(csig, kmax);
    if (curved->parsed()) return cmd_curved_check(curv_path, clambda, cmu, seed);
  } catch (const cq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const cq::CriticalValueError& e) {
    std::cerr << e.what() << "\n";
    return kExitCritical;
  } catch (const cq::CriticalDenominatorError& e) {
    std::cerr << e.what() << "\n";
    return kExitCritical;
  } catch (const cq::DegreeCapError& e) {
    std::cerr << e.what() << "\n";
    return kExitDegree;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
