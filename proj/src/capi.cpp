#include "billiard/billiard.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "billiard_map.hpp"
#include "domain.hpp"
#include "ellipse_oracle.hpp"
#include "errors.hpp"
#include "invariants.hpp"
#include "orbits.hpp"
#include "threading.hpp"
#include "trace_check.hpp"
#include "verify.hpp"

namespace {

thread_local std::string g_last_error = "no error";

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// 17 significant digits: round-trip exact for IEEE doubles.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Fn>
bil_status guarded(Fn&& fn) {
  try {
    fn();
    return BIL_OK;
  } catch (const bil::BilError& e) {
    g_last_error = e.what();
    return static_cast<bil_status>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BIL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BIL_INTERNAL;
  }
}

const bil::Domain& unwrap(const bil_domain* d) {
  if (!d) bil::fail(bil::ErrCode::BadArgument, "null domain handle");
  return *reinterpret_cast<const bil::Domain*>(d);
}

bil::Vec2 resolve_origin(const bil::Domain& d, double ox, double oy,
                         int use_centroid) {
  if (use_centroid) return d.centroid();
  bil::Vec2 o{ox, oy};
  if (!d.contains(o))
    bil::fail(bil::ErrCode::OriginOutside, "origin is not an interior point");
  return o;
}

}  // namespace

extern "C" {

const char* bil_last_error(void) { return g_last_error.c_str(); }

void bil_string_free(char* s) { std::free(s); }

void bil_set_threads(int n) { bil::set_thread_count(n); }

bil_status bil_domain_ellipse(double a, double b, bil_domain** out) {
  return guarded([&] {
    if (!out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    auto* d = new bil::Domain(bil::Domain::ellipse(a, b));
    *out = reinterpret_cast<bil_domain*>(d);
  });
}

bil_status bil_domain_from_json(const char* json_text, bil_domain** out) {
  return guarded([&] {
    if (!out || !json_text)
      bil::fail(bil::ErrCode::BadArgument, "null argument");
    auto* d = new bil::Domain(bil::Domain::from_json_text(json_text));
    *out = reinterpret_cast<bil_domain*>(d);
  });
}

bil_status bil_domain_from_file(const char* path, bil_domain** out) {
  return guarded([&] {
    if (!out || !path) bil::fail(bil::ErrCode::BadArgument, "null argument");
    auto* d = new bil::Domain(bil::Domain::from_json_file(path));
    *out = reinterpret_cast<bil_domain*>(d);
  });
}

void bil_domain_free(bil_domain* d) {
  delete reinterpret_cast<bil::Domain*>(d);
}

bil_status bil_domain_spec_json(const bil_domain* d, char** json_out) {
  return guarded([&] {
    if (!json_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    *json_out = dup_string(unwrap(d).spec_json());
  });
}

bil_status bil_domain_length(const bil_domain* d, double* out) {
  return guarded([&] {
    if (!out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    *out = unwrap(d).length();
  });
}

bil_status bil_domain_area(const bil_domain* d, double* out) {
  return guarded([&] {
    if (!out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    *out = unwrap(d).area();
  });
}

bil_status bil_domain_centroid(const bil_domain* d, double* x, double* y) {
  return guarded([&] {
    if (!x || !y) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    bil::Vec2 c = unwrap(d).centroid();
    *x = c.x;
    *y = c.y;
  });
}

bil_status bil_orbit_trace_csv(const bil_domain* d, double s0, double theta0,
                               int n, char** csv_out) {
  return guarded([&] {
    if (!csv_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    if (n < 0) bil::fail(bil::ErrCode::BadArgument, "n must be >= 0");
    const bil::Domain& dom = unwrap(d);
    std::ostringstream os;
    os << "k,s_k,theta_k,x_k,alpha_k,point_x,point_y\n";
    bil::PhasePoint p{s0, theta0};
    for (int k = 0; k <= n; ++k) {
      bil::LazutkinPoint lp = bil::to_lazutkin(dom, p);
      bil::Vec2 pt = dom.point(p.s);
      os << k << ',' << fmt17(p.s) << ',' << fmt17(p.theta) << ','
         << fmt17(lp.x) << ',' << fmt17(lp.alpha) << ',' << fmt17(pt.x) << ','
         << fmt17(pt.y) << '\n';
      if (k < n) p = bil::billiard_map(dom, p);
    }
    *csv_out = dup_string(os.str());
  });
}

bil_status bil_loop_function_csv(const bil_domain* d, int j, int grid_n,
                                 char** csv_out) {
  return guarded([&] {
    if (!csv_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    auto table = bil::loop_function(unwrap(d), j, grid_n, true);
    std::ostringstream os;
    os << "q,psi,omega1,omega2,domega1_dqprime\n";
    for (const auto& r : table)
      os << fmt17(r.q) << ',' << fmt17(r.psi) << ',' << fmt17(r.omega1) << ','
         << fmt17(r.omega2) << ',' << fmt17(r.domega1_dqprime) << '\n';
    *csv_out = dup_string(os.str());
  });
}

bil_status bil_periodic_json(const bil_domain* d, int j, int nseeds,
                             char** json_out) {
  return guarded([&] {
    if (!json_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    const bil::Domain& dom = unwrap(d);
    bil::PeriodicReport rep = bil::find_periodic(dom, j, nseeds);
    std::ostringstream os;
    os << "{\n"
       << "  \"j\": " << j << ",\n"
       << "  \"t_j\": " << fmt17(rep.t_j) << ",\n"
       << "  \"T_j\": " << fmt17(rep.T_j) << ",\n"
       << "  \"caustic\": " << (rep.caustic ? "true" : "false") << ",\n"
       << "  \"count\": " << rep.orbits.size() << ",\n"
       << "  \"orbits\": [";
    for (size_t i = 0; i < rep.orbits.size(); ++i) {
      const auto& o = rep.orbits[i];
      os << (i ? ",\n    " : "\n    ") << "{\"q\": "
         << fmt17(rep.critical_q[i]) << ", \"length\": " << fmt17(o.length)
         << ", \"omega1\": " << fmt17(o.omega1)
         << ", \"omega2\": " << fmt17(o.omega2) << "}";
    }
    os << "\n  ]\n}\n";
    *json_out = dup_string(os.str());
  });
}

bil_status bil_invariant_json(const bil_domain* d, int j, double origin_x,
                              double origin_y, int use_centroid, int quad_n,
                              int force, char** json_out) {
  return guarded([&] {
    if (!json_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    const bil::Domain& dom = unwrap(d);
    bil::Vec2 origin = resolve_origin(dom, origin_x, origin_y, use_centroid);
    bil::InvariantReport rep =
        bil::wave_invariant(dom, j, origin, quad_n, force != 0);
    *json_out = dup_string(rep.json());
  });
}

bil_status bil_singularity_profile_csv(const bil_domain* d, int j,
                                       double origin_x, double origin_y,
                                       int use_centroid, int quad_n, int force,
                                       double eps, double half_width,
                                       int n_points, char** csv_out) {
  return guarded([&] {
    if (!csv_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    if (n_points < 2 || !(half_width > 0))
      bil::fail(bil::ErrCode::BadArgument,
                "need n_points >= 2 and half_width > 0");
    const bil::Domain& dom = unwrap(d);
    bil::Vec2 origin = resolve_origin(dom, origin_x, origin_y, use_centroid);
    bil::InvariantReport rep =
        bil::wave_invariant(dom, j, origin, quad_n, force != 0);
    double L = rep.t_j;
    std::vector<double> grid(n_points);
    for (int i = 0; i < n_points; ++i)
      grid[i] = L - half_width + 2.0 * half_width * i / (n_points - 1);
    std::vector<double> vals =
        bil::singularity_profile(rep.c_j, L, grid, eps);
    std::ostringstream os;
    os << "t,value\n";
    for (int i = 0; i < n_points; ++i)
      os << fmt17(grid[i]) << ',' << fmt17(vals[i]) << '\n';
    *csv_out = dup_string(os.str());
  });
}

bil_status bil_ellipse_oracle_json(double a, double b, int j, int quad_n,
                                   char** json_out) {
  return guarded([&] {
    if (!json_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    bil::OracleReport rep = bil::oracle_report(a, b, j, quad_n);
    *json_out = dup_string(rep.json());
  });
}

void bil_trace_opts_default(bil_trace_opts* opts) {
  if (!opts) return;
  *opts = bil_trace_opts{};
  opts->m = 0.5;
  opts->n_lambda = 12;
  opts->lambda_min = 50.0;
  opts->lambda_max = 400.0;
}

bil_status bil_trace_check(const bil_domain* d, int j,
                           const bil_trace_opts* opts, char** json_out,
                           char** csv_out) {
  return guarded([&] {
    if (!json_out) bil::fail(bil::ErrCode::BadArgument, "null out pointer");
    bil::TraceCheckOptions o;
    if (opts) {
      if (opts->m > 0 || opts->m < 0) o.m = opts->m;
      if (opts->n_lambda > 0) o.n_lambda = opts->n_lambda;
      if (opts->lambda_min > 0) o.lambda_min = opts->lambda_min;
      if (opts->lambda_max > 0) o.lambda_max = opts->lambda_max;
      o.grid_n = opts->grid_n;
      o.roll = opts->roll;
      o.flat = opts->flat;
      o.eta_span = opts->eta_span;
      o.n_eta = opts->n_eta;
    }
    bil::TraceCheckReport rep = bil::run_trace_check(unwrap(d), j, o);
    *json_out = dup_string(rep.json());
    if (csv_out) *csv_out = dup_string(rep.csv());
  });
}

bil_status bil_verify(const char* suite, int* all_pass, char** table_out) {
  return guarded([&] {
    if (!suite || !all_pass || !table_out)
      bil::fail(bil::ErrCode::BadArgument, "null argument");
    auto results = bil::run_verify(suite);
    *all_pass = bil::all_passed(results) ? 1 : 0;
    *table_out = dup_string(bil::format_verify_table(results));
  });
}

}  // extern "C"
