#include <doctest.h>

#include <sstream>

#include "radial/cli.hpp"

using namespace radial;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(RunConfig cfg) {
  std::ostringstream out, err;
  const int code = dispatch(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig base(const std::string& command, const std::string& psi, int dim) {
  RunConfig c;
  c.command = command;
  c.psi_text = psi;
  c.dim = dim;
  return c;
}

}  // namespace

TEST_CASE("classify: cubic profile report") {
  const Run r = run(base("classify", "y - y^2 + y^3", 2));
  CHECK(r.code == 0);
  CHECK(r.out.find("\"extremal\"") != std::string::npos);
  CHECK(r.out.find("\"member\": true") != std::string::npos);
  CHECK(r.out.find("\"C\": 1") != std::string::npos);
  CHECK(r.out.find("\"D\": -1") != std::string::npos);
  // the profile is neither einstein nor a soliton
  CHECK(r.out.find("\"lambda_ke\": 0") != std::string::npos);
  CHECK(r.out.find("\"kcsck\"") != std::string::npos);
  CHECK(r.out.find("\"notes\"") != std::string::npos);
}

TEST_CASE("scan-hsc: cubic profile bracket") {
  RunConfig c = base("scan-hsc", "y - y^2 + y^3", 2);
  c.y_range = {0.05, 1.0};
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("0.33333333") != std::string::npos);
  CHECK(r.out.find("0.25925925") != std::string::npos);
}

TEST_CASE("potential: flat profile CSV") {
  RunConfig c = base("potential", "y", 2);
  c.y0 = 1.0;
  c.t0 = 0.0;
  c.t_range = {-2.0, 2.0};
  const Run r = run(c);
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("t,r,y,f,f_prime\n", 0) == 0);
  // every row satisfies f = r - 1 to 1e-9
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    double t, rr, y, f, fp;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &rr, &y, &f, &fp) == 5);
    CHECK(std::abs(f - (rr - 1.0)) < 1e-9);
    CHECK(fp * rr == y);
    ++rows;
  }
  CHECK(rows >= 257);
}

TEST_CASE("rho: csv tabulation") {
  RunConfig c = base("rho", "y - 0.5*y^2", 2);
  c.samples = 16;
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.rfind("y,rho_1,rho_2\n", 0) == 0);
  RunConfig c1 = c;
  c1.k = 1;
  CHECK(run(c1).out.rfind("y,rho_1\n", 0) == 0);
}

TEST_CASE("curvature: axis sample with direction") {
  RunConfig c = base("curvature", "y - y^2 + y^3", 2);
  c.z_text = "1:0,0:0";
  c.y_at = 0.5;
  c.xi_text = "1:0,0:0";
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"riemann_axis\"") != std::string::npos);
  CHECK(r.out.find("\"hsc\": 0.140625") != std::string::npos);  // 9/64
}

TEST_CASE("verify: profile mode and randomized mode") {
  {
    const Run r = run(base("verify", "y - 0.5*y^2", 2));
    CHECK(r.code == 0);
    CHECK(r.out.find("\"confirmed\"") != std::string::npos);
    CHECK(r.out.find("VIOLATED") == std::string::npos);
  }
  {
    RunConfig c = base("verify", "", 0);
    c.random_draws = 5;
    c.seed = 3;
    const Run r = run(c);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"total_violations\": 0") != std::string::npos);
  }
}

TEST_CASE("oracle: default sites on a quadratic profile") {
  RunConfig c = base("oracle", "y - 0.4*y^2", 2);
  const Run r = run(c);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("deterministic output: identical configs give identical bytes") {
  for (const char* cmd : {"classify", "scan-hsc", "rho"}) {
    RunConfig c = base(cmd, "y - y^2 + y^3", 2);
    c.y_range = {0.05, 1.0};
    c.samples = 32;
    const Run a = run(c);
    const Run b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
  RunConfig c = base("verify", "", 0);
  c.random_draws = 4;
  c.seed = 77;
  CHECK(run(c).out == run(c).out);
}

TEST_CASE("error handling and exit codes") {
  {
    const Run r = run(base("classify", "y +* 3", 2));  // syntax error
    CHECK(r.code == 2);
    CHECK(r.err.find("grammar") != std::string::npos);
  }
  {
    const Run r = run(base("classify", "y", 0));  // missing dim
    CHECK(r.code == 2);
  }
  {
    const Run r = run(base("bogus", "y", 2));
    CHECK(r.code == 2);
  }
  {
    RunConfig c = base("scan-hsc", "y", 2);  // flat: no sign change
    c.y_range = {0.1, 2.0};
    c.strict = true;
    CHECK(run(c).code == 1);
    c.strict = false;
    CHECK(run(c).code == 0);
  }
}

TEST_CASE("render formats: text and csv variants") {
  RunConfig c = base("classify", "y - 0.5*y^2", 2);
  c.format = "text";
  const Run t = run(c);
  CHECK(t.code == 0);
  CHECK(t.out.find("extremal: member") != std::string::npos);
  c.format = "csv";
  const Run v = run(c);
  CHECK(v.out.rfind("key,value\n", 0) == 0);
}

TEST_CASE("json serialization details") {
  // keys sorted lexicographically, floats with 17 significant digits
  Json j = Json::object();
  j.set("zeta", 1.0 / 3.0).set("alpha", true).set("mid", Json::array());
  const std::string s = j.dump();
  CHECK(s.find("\"alpha\"") < s.find("\"mid\""));
  CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(format_sig17(std::numeric_limits<double>::infinity()) == "inf");
}
