// Integration tests for the confq binary: exit codes, report formats,
// determinism, byte-identical round trips.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "cq/cq.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

RunResult run_confq(const std::string& args, int tag) {
  const std::string out_path = "cli_out_" + std::to_string(tag) + ".txt";
  const std::string err_path = "cli_err_" + std::to_string(tag) + ".txt";
  const std::string cmd =
      std::string(CONFQ_BIN) + " " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = status;
#else
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

const char* kXi1Problem = R"({
  "m": 2, "p": 2, "q": 0,
  "lambda": "1/2", "mu": "1/2",
  "symbol": [ {"coeff": "1", "x_exponents": [0, 0], "xi_exponents": [1, 0]} ]
})";

}  // namespace

TEST_CASE("quantize: xi_1 with lambda = mu yields the plain derivative") {
  write("prob_xi1.json", kXi1Problem);
  const RunResult r = run_confq("quantize prob_xi1.json", 1);
  REQUIRE(r.exit_code == 0);
  const cq::DiffOp op = cq::parse_operator_json(r.out);
  cq::DiffOp expect(cq::Signature(2, 0), cq::Poly::constant(2, cq::Rational(1, 2)),
                    cq::Poly::constant(2, cq::Rational(1, 2)));
  expect.add_term({1, 0}, cq::Poly::constant(2, 1));
  CHECK(op == expect);
  std::remove("prob_xi1.json");
}

TEST_CASE("quantize: malformed JSON exits 2") {
  write("prob_bad.json", "{ not json");
  CHECK(run_confq("quantize prob_bad.json", 2).exit_code == 2);
  // Missing file is a parse error too.
  CHECK(run_confq("quantize no_such_file.json", 3).exit_code == 2);
  // Zero coefficients violate the problem-file invariant.
  write("prob_zero.json", R"({"m":2,"p":2,"q":0,"lambda":"0","mu":"0",
    "symbol":[{"coeff":"0","x_exponents":[0,0],"xi_exponents":[1,0]}]})");
  CHECK(run_confq("quantize prob_zero.json", 4).exit_code == 2);
  std::remove("prob_bad.json");
  std::remove("prob_zero.json");
}

TEST_CASE("quantize: critical shift exits 3 with a witness") {
  // delta = 1 is critical for degree-1 symbols.
  write("prob_crit.json", R"({"m":2,"p":2,"q":0,"lambda":"1/2","mu":"3/2",
    "symbol":[{"coeff":"1","x_exponents":[1,0],"xi_exponents":[1,0]}]})");
  const RunResult r = run_confq("quantize prob_crit.json", 5);
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("delta=1") != std::string::npos);
  CHECK(r.err.find("(1,0)") != std::string::npos);
  std::remove("prob_crit.json");
}

TEST_CASE("quantize: degree cap exits 4 unless lifted") {
  write("prob_deg5.json", R"({"m":2,"p":2,"q":0,"lambda":"1/2","mu":"7/10",
    "symbol":[{"coeff":"1","x_exponents":[0,0],"xi_exponents":[5,0]}]})");
  CHECK(run_confq("quantize prob_deg5.json", 6).exit_code == 4);
  CHECK(run_confq("quantize prob_deg5.json --allow-high-degree", 7).exit_code == 0);
  std::remove("prob_deg5.json");
}

TEST_CASE("quantize: curved-check guards name the critical denominator") {
  // Degree 4 with delta = (m+2)/m = 2.
  write("prob_deg4.json", R"({"m":2,"p":2,"q":0,"lambda":"0","mu":"2",
    "symbol":[{"coeff":"1","x_exponents":[0,0],"xi_exponents":[2,2]}]})");
  const RunResult r = run_confq("quantize prob_deg4.json --curved-check", 8);
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("delta=2") != std::string::npos);
  std::remove("prob_deg4.json");
}

TEST_CASE("operator files re-serialize byte-identically") {
  write("prob_rt.json", R"({"m":2,"p":2,"q":0,"lambda":"1/3","mu":"1/2",
    "symbol":[{"coeff":"2/3","x_exponents":[1,0],"xi_exponents":[1,1]},
              {"coeff":"-1","x_exponents":[0,2],"xi_exponents":[2,0]}]})");
  const RunResult r = run_confq("quantize prob_rt.json -o op_rt.json", 9);
  REQUIRE(r.exit_code == 0);
  const std::string bytes = slurp("op_rt.json");
  CHECK(cq::operator_to_json(cq::parse_operator_json(bytes)) == bytes);
  std::remove("prob_rt.json");
  std::remove("op_rt.json");
}

TEST_CASE("verify: clean report on a non-critical problem") {
  write("prob_v.json", R"({"m":2,"p":2,"q":0,"lambda":"1/2","mu":"7/10",
    "symbol":[{"coeff":"1","x_exponents":[2,1],"xi_exponents":[2,1]},
              {"coeff":"1/2","x_exponents":[1,0],"xi_exponents":[0,2]}]})");
  const RunResult r = run_confq("verify prob_v.json", 10);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("nonzero residuals: 0") != std::string::npos);
  CHECK(r.out.find("EQUIVARIANT") != std::string::npos);
  std::remove("prob_v.json");
}

TEST_CASE("verify: affine grades pass even at a critical shift") {
  write("prob_vc.json", R"({"m":2,"p":2,"q":0,"lambda":"1/2","mu":"3/2",
    "symbol":[{"coeff":"1","x_exponents":[1,0],"xi_exponents":[1,0]}]})");
  CHECK(run_confq("verify prob_vc.json", 11).exit_code == 3);
  const RunResult r = run_confq("verify prob_vc.json --grade -1,0", 12);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("EQUIVARIANT") != std::string::npos);
  std::remove("prob_vc.json");
}

TEST_CASE("verify: the fuzz negative control is detected") {
  write("prob_f.json", R"({"m":2,"p":2,"q":0,"lambda":"1/2","mu":"7/10",
    "symbol":[{"coeff":"1","x_exponents":[1,1],"xi_exponents":[1,0]}]})");
  const RunResult r = run_confq("verify prob_f.json --fuzz", 13);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("NONZERO") != std::string::npos);
  CHECK(r.out.find("NOT EQUIVARIANT") != std::string::npos);
  std::remove("prob_f.json");
}

TEST_CASE("criticals: table contents and determinism") {
  const RunResult r = run_confq("criticals --signature 2,0 --kmax 4", 14);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("delta=3/2 from") != std::string::npos);
  CHECK(r.out.find("delta=2 from") != std::string::npos);
  // kmax = 0: no lower degrees, empty table.
  CHECK(run_confq("criticals --signature 2,0 --kmax 0", 15).out.empty());
  // Byte-identical across runs.
  const RunResult r2 = run_confq("criticals --signature 2,0 --kmax 4", 16);
  CHECK(r.out == r2.out);
}

TEST_CASE("curved-check: zero curvature passes, non-normal input is reported") {
  const cq::Signature sig(2, 0);
  write("curv_zero.json", cq::curvature_to_json(cq::CurvatureData::zero(sig)));
  const RunResult r = run_confq("curved-check curv_zero.json --seed 7", 17);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("CURVED CHECKS PASSED") != std::string::npos);
  // Determinism under a fixed seed.
  const RunResult r2 = run_confq("curved-check curv_zero.json --seed 7", 18);
  CHECK(r.out == r2.out);

  cq::CurvatureData bad = cq::CurvatureData::zero(sig);
  bad.kappa0[0][1] = cq::rmat_identity(2);
  bad.kappa0[1][0] = cq::rmat_scaled(cq::rmat_identity(2), -1);
  write("curv_bad.json", cq::curvature_to_json(bad));
  const RunResult rb = run_confq("curved-check curv_bad.json", 19);
  CHECK(rb.exit_code == 1);
  CHECK(rb.out.find("violation") != std::string::npos);
  CHECK(rb.out.find("(j,l)=(") != std::string::npos);
  std::remove("curv_zero.json");
  std::remove("curv_bad.json");
}

TEST_CASE("curved-check: a normality-projected random curvature passes") {
  // m = 4 leaves room for nonzero kappa_0 after the trace projection.
  const cq::Signature sig(2, 2);
  cq::Rng rng(91);
  const cq::CurvatureData kappa = cq::project_to_normal(cq::random_curvature(sig, rng));
  write("curv_norm.json", cq::curvature_to_json(kappa));
  const RunResult r = run_confq("curved-check curv_norm.json --seed 3", 23);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("CURVED CHECKS PASSED") != std::string::npos);
  std::remove("curv_norm.json");
}

TEST_CASE("flag overrides replace the file's weights and signature") {
  write("prob_ov.json", kXi1Problem);
  // Move to lambda=1/3, mu=1/2: the degree-1 correction c = 2/5 appears
  // once the symbol has a divergence; here it stays a plain derivative but
  // the recorded weights change.
  const RunResult r = run_confq("quantize prob_ov.json --lambda 1/3 --mu 1/2", 20);
  REQUIRE(r.exit_code == 0);
  const cq::DiffOp op = cq::parse_operator_json(r.out);
  CHECK(op.source_weight() == cq::Poly::constant(2, cq::Rational(1, 3)));
  CHECK(op.target_weight() == cq::Poly::constant(2, cq::Rational(1, 2)));
  // Signature override keeps m fixed; a mismatched m is a parse error.
  CHECK(run_confq("quantize prob_ov.json --signature 1,1", 21).exit_code == 0);
  CHECK(run_confq("quantize prob_ov.json --signature 2,1", 22).exit_code == 2);
  std::remove("prob_ov.json");
}

TEST_CASE("curvature files re-serialize byte-identically") {
  cq::Rng rng(77);
  const cq::Signature sig(2, 1);
  const std::string bytes = cq::curvature_to_json(cq::random_curvature(sig, rng));
  CHECK(cq::curvature_to_json(cq::parse_curvature_json(bytes)) == bytes);
}

TEST_CASE("problem files round-trip through the library writer") {
  const std::string text = R"({
  "m": 2,
  "p": 1,
  "q": 1,
  "lambda": "1/3",
  "mu": "1/2",
  "symbol": [
    {
      "coeff": "2/3",
      "x_exponents": [1, 0],
      "xi_exponents": [1, 1]
    }
  ]
})";
  const cq::ProblemFile pf = cq::parse_problem_json(text);
  const std::string rewritten = cq::problem_to_json(pf);
  CHECK(cq::problem_to_json(cq::parse_problem_json(rewritten)) == rewritten);
}
