// C API smoke tests (link against the shared library only).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>

#include "billiard/billiard.h"
#include "doctest.h"

TEST_CASE("domain lifecycle and accessors") {
  bil_domain* d = nullptr;
  REQUIRE(bil_domain_ellipse(1.0, 1.0, &d) == BIL_OK);
  double len = 0.0, area = 0.0, cx = 1.0, cy = 1.0;
  CHECK(bil_domain_length(d, &len) == BIL_OK);
  CHECK(len == doctest::Approx(2 * 3.14159265358979323846).epsilon(1e-12));
  CHECK(bil_domain_area(d, &area) == BIL_OK);
  CHECK(area == doctest::Approx(3.14159265358979323846).epsilon(1e-12));
  CHECK(bil_domain_centroid(d, &cx, &cy) == BIL_OK);
  CHECK(std::abs(cx) < 1e-12);
  char* spec = nullptr;
  CHECK(bil_domain_spec_json(d, &spec) == BIL_OK);
  CHECK(std::string(spec).find("ellipse") != std::string::npos);
  bil_domain* d2 = nullptr;
  CHECK(bil_domain_from_json(spec, &d2) == BIL_OK);
  bil_string_free(spec);
  bil_domain_free(d2);
  bil_domain_free(d);
}

TEST_CASE("errors set a status and a message") {
  bil_domain* d = nullptr;
  bil_status st = bil_domain_ellipse(-1.0, 1.0, &d);
  CHECK(st != BIL_OK);
  CHECK(std::strlen(bil_last_error()) > 0);
  CHECK(bil_domain_from_json("{\"kind\":\"nope\"}", &d) == BIL_SPEC_ERROR);
  CHECK(bil_domain_from_file("/nonexistent/file.json", &d) != BIL_OK);
}

TEST_CASE("orbit trace CSV has the documented columns") {
  bil_domain* d = nullptr;
  REQUIRE(bil_domain_ellipse(1.0, 1.0, &d) == BIL_OK);
  char* csv = nullptr;
  REQUIRE(bil_orbit_trace_csv(d, 0.0, 3.14159265358979323846 / 3, 5, &csv) ==
          BIL_OK);
  std::string s(csv);
  CHECK(s.rfind("k,s_k,theta_k,x_k,alpha_k,point_x,point_y\n", 0) == 0);
  // 1 header + 6 rows (k = 0..5)
  size_t lines = 0;
  for (char c : s)
    if (c == '\n') ++lines;
  CHECK(lines == 7);
  bil_string_free(csv);
  // tangential state maps to the dedicated status
  CHECK(bil_orbit_trace_csv(d, 0.0, 1e-12, 3, &csv) == BIL_TANGENTIAL_STATE);
  bil_domain_free(d);
}

TEST_CASE("loop function CSV and periodic JSON") {
  bil_domain* d = nullptr;
  REQUIRE(bil_domain_ellipse(1.0, 1.0, &d) == BIL_OK);
  char* csv = nullptr;
  REQUIRE(bil_loop_function_csv(d, 7, 16, &csv) == BIL_OK);
  CHECK(std::string(csv).rfind("q,psi,omega1,omega2,domega1_dqprime\n", 0) ==
        0);
  bil_string_free(csv);
  char* js = nullptr;
  REQUIRE(bil_periodic_json(d, 7, 32, &js) == BIL_OK);
  std::string rep(js);
  CHECK(rep.find("\"caustic\": true") != std::string::npos);
  CHECK(rep.find("\"t_j\"") != std::string::npos);
  bil_string_free(js);
  bil_domain_free(d);
}

TEST_CASE("invariant JSON and singularity profile CSV") {
  bil_domain* d = nullptr;
  REQUIRE(bil_domain_ellipse(1.0, 1.0, &d) == BIL_OK);
  char* js = nullptr;
  REQUIRE(bil_invariant_json(d, 10, 0, 0, 1, 32, 0, &js) == BIL_OK);
  CHECK(std::string(js).find("\"c_j\"") != std::string::npos);
  bil_string_free(js);
  char* csv = nullptr;
  REQUIRE(bil_singularity_profile_csv(d, 10, 0, 0, 1, 32, 0, 1e-3, 0.5, 11,
                                      &csv) == BIL_OK);
  std::string s(csv);
  CHECK(s.rfind("t,value\n", 0) == 0);
  bil_string_free(csv);
  // origin outside the domain
  CHECK(bil_invariant_json(d, 10, 5.0, 0.0, 0, 32, 0, &js) ==
        BIL_ORIGIN_OUTSIDE);
  bil_domain_free(d);
}

TEST_CASE("ellipse oracle JSON") {
  char* js = nullptr;
  REQUIRE(bil_ellipse_oracle_json(2.0, 1.0, 20, 128, &js) == BIL_OK);
  std::string s(js);
  CHECK(s.find("c_j_paper_radical") != std::string::npos);
  CHECK(s.find("c_j_sin_squared_radical") != std::string::npos);
  CHECK(s.find("zeta") != std::string::npos);
  bil_string_free(js);
  CHECK(bil_ellipse_oracle_json(1.0, 2.0, 20, 128, &js) != BIL_OK);
}

TEST_CASE("trace options defaults") {
  bil_trace_opts o;
  bil_trace_opts_default(&o);
  CHECK(o.m == 0.5);
  CHECK(o.n_lambda == 12);
  CHECK(o.lambda_min == 50.0);
  CHECK(o.lambda_max == 400.0);
  CHECK(o.grid_n == 0);
}
