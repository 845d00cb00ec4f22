// billiard: command-line front end over the C API (libbilliard).
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "billiard/billiard.h"
#include "json.hpp"

namespace {

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { bil_string_free(s); }
};

struct DomainGuard {
  bil_domain* d = nullptr;
  ~DomainGuard() { bil_domain_free(d); }
};

[[noreturn]] void die(bil_status st, const std::string& where) {
  std::cerr << "error (" << where << ", status " << st
            << "): " << bil_last_error() << "\n";
  std::exit(1);
}

void check(bil_status st, const std::string& where) {
  if (st != BIL_OK) die(st, where);
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error (cli): cannot open output file " << out_path << "\n";
    std::exit(1);
  }
  f << text;
}

// Optional metadata block on JSON reports; omitted under --reproducible so
// identical configs produce byte-identical output.
std::string finalize_json(const std::string& json_text,
                          const std::string& command, bool reproducible) {
  nlohmann::json o = nlohmann::json::parse(json_text);
  if (!reproducible) {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    o["metadata"] = {{"command", command}, {"generated_at", buf}};
  }
  return o.dump(2) + "\n";
}

bil_domain* load_domain(const std::string& path) {
  bil_domain* d = nullptr;
  check(bil_domain_from_file(path.c_str(), &d), "geometry");
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex billiard dynamics and wave invariants"};
  app.require_subcommand(1);
  app.fallthrough(true);

  int threads = 0;
  bool reproducible = false;
  app.add_option("--threads", threads,
                 "Worker threads (default: BILLIARD_THREADS env, then all "
                 "cores)");
  app.add_flag("--reproducible", reproducible,
               "Omit the timestamped metadata block from JSON reports");

  std::string domain_path, out_path;
  int j = 0;

  // orbit
  auto* orbit = app.add_subcommand("orbit", "Trace a billiard orbit (CSV)");
  double s0 = 0.0, theta0 = 0.0;
  int nbounce = 10;
  orbit->add_option("--domain", domain_path, "Domain spec JSON file")
      ->required();
  orbit->add_option("--s0", s0, "Initial arclength");
  orbit->add_option("--theta", theta0, "Initial angle in (0,pi)")->required();
  orbit->add_option("--n", nbounce, "Number of bounces");
  orbit->add_option("--out", out_path, "Output path (default stdout)");

  // loop-fn
  auto* loopfn =
      app.add_subcommand("loop-fn", "Loop function table Psi_j (CSV)");
  int grid_n = 256;
  loopfn->add_option("--domain", domain_path, "Domain spec JSON file")
      ->required();
  loopfn->add_option("--j", j, "Number of reflections")->required();
  loopfn->add_option("--grid", grid_n, "Grid points");
  loopfn->add_option("--out", out_path, "Output path (default stdout)");

  // periodic
  auto* periodic =
      app.add_subcommand("periodic", "Periodic orbits, [t_j, T_j] (JSON)");
  int nseeds = 64;
  periodic->add_option("--domain", domain_path, "Domain spec JSON file")
      ->required();
  periodic->add_option("--j", j, "Number of reflections")->required();
  periodic->add_option("--seeds", nseeds, "Search seeds");
  periodic->add_option("--out", out_path, "Output path (default stdout)");

  // invariant
  auto* invariant =
      app.add_subcommand("invariant", "Wave invariant c_j (JSON)");
  int quad_n = 256;
  std::vector<double> origin;
  bool force = false;
  double prof_eps = 1e-3, prof_half = 0.0;
  int prof_points = 201;
  std::string profile_out;
  invariant->add_option("--domain", domain_path, "Domain spec JSON file")
      ->required();
  invariant->add_option("--j", j, "Number of reflections")->required();
  invariant->add_option("--quad", quad_n, "Quadrature grid points");
  invariant
      ->add_option("--origin", origin,
                   "Origin x y for X(q) (default: area centroid)")
      ->expected(2);
  invariant->add_flag("--force", force,
                      "Evaluate even if the loop function is non-constant");
  invariant->add_option("--profile-out", profile_out,
                        "Also write the singularity profile CSV here");
  invariant->add_option("--profile-eps", prof_eps,
                        "Profile regularization epsilon");
  invariant->add_option("--profile-half-width", prof_half,
                        "Profile half-width around L_j (default L_j/100)");
  invariant->add_option("--profile-points", prof_points,
                        "Profile sample count");
  invariant->add_option("--out", out_path, "Output path (default stdout)");

  // ellipse-oracle
  auto* oracle = app.add_subcommand(
      "ellipse-oracle", "Elliptic-integral oracle for an ellipse (JSON)");
  double ell_a = 2.0, ell_b = 1.0;
  bool sin_squared = false;
  oracle->add_option("--a", ell_a, "Semi-major axis")->required();
  oracle->add_option("--b", ell_b, "Semi-minor axis")->required();
  oracle->add_option("--j", j, "Number of reflections")->required();
  oracle->add_option("--quad", quad_n, "Quadrature grid points");
  oracle->add_flag(
      "--assume-sin-squared", sin_squared,
      "Select the sin^2 phi radicand reading for the reported c_j");
  oracle->add_option("--out", out_path, "Output path (default stdout)");

  // trace-check
  auto* trace = app.add_subcommand(
      "trace-check", "Stationary-phase order check near L_j (JSON)");
  bil_trace_opts topts;
  bil_trace_opts_default(&topts);
  std::string trace_csv;
  trace->add_option("--domain", domain_path, "Domain spec JSON file")
      ->required();
  trace->add_option("--j", j, "Number of reflections")->required();
  trace->add_option("--m", topts.m, "Symbol order under test");
  trace->add_option("--n-lambda", topts.n_lambda, "Lambda grid points");
  trace->add_option("--lambda-min", topts.lambda_min,
                    "Degenerate-regime lambda minimum");
  trace->add_option("--lambda-max", topts.lambda_max,
                    "Degenerate-regime lambda maximum");
  trace->add_option("--grid", topts.grid_n, "Loop-function grid (0 = auto)");
  trace->add_option("--roll", topts.roll, "Window roll-off (0 = auto)");
  trace->add_option("--flat", topts.flat, "Window flat top (0 = auto)");
  trace->add_option("--eta-span", topts.eta_span,
                    "Eta integration half-span (0 = auto)");
  trace->add_option("--n-eta", topts.n_eta, "Eta nodes (0 = auto)");
  trace->add_option("--csv", trace_csv, "Also write lambda,re,im,abs CSV");
  trace->add_option("--out", out_path, "Output path (default stdout)");

  // verify
  auto* verify =
      app.add_subcommand("verify", "Run acceptance suites (PASS/FAIL table)");
  std::string suite = "all";
  verify->add_option("--suite", suite,
                     "Suite name, \"circle\", or \"all\" (default)");
  verify->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (threads > 0) bil_set_threads(threads);

  if (*orbit) {
    DomainGuard d{load_domain(domain_path)};
    StringGuard csv;
    check(bil_orbit_trace_csv(d.d, s0, theta0, nbounce, &csv.s), "billiard");
    write_output(out_path, csv.s);
  } else if (*loopfn) {
    DomainGuard d{load_domain(domain_path)};
    StringGuard csv;
    check(bil_loop_function_csv(d.d, j, grid_n, &csv.s), "orbits");
    write_output(out_path, csv.s);
  } else if (*periodic) {
    DomainGuard d{load_domain(domain_path)};
    StringGuard js;
    check(bil_periodic_json(d.d, j, nseeds, &js.s), "orbits");
    write_output(out_path, finalize_json(js.s, "periodic", reproducible));
  } else if (*invariant) {
    DomainGuard d{load_domain(domain_path)};
    double ox = 0.0, oy = 0.0;
    int use_centroid = origin.empty() ? 1 : 0;
    if (!origin.empty()) {
      ox = origin[0];
      oy = origin[1];
    }
    StringGuard js;
    check(bil_invariant_json(d.d, j, ox, oy, use_centroid, quad_n,
                             force ? 1 : 0, &js.s),
          "invariants");
    write_output(out_path, finalize_json(js.s, "invariant", reproducible));
    if (!profile_out.empty()) {
      double half = prof_half;
      if (!(half > 0)) {
        nlohmann::json rep = nlohmann::json::parse(std::string(js.s));
        half = rep["t_j"].get<double>() / 100.0;
      }
      StringGuard csv;
      check(bil_singularity_profile_csv(d.d, j, ox, oy, use_centroid, quad_n,
                                        force ? 1 : 0, prof_eps, half,
                                        prof_points, &csv.s),
            "invariants");
      write_output(profile_out, csv.s);
    }
  } else if (*oracle) {
    StringGuard js;
    check(bil_ellipse_oracle_json(ell_a, ell_b, j, quad_n, &js.s),
          "ellipse_oracle");
    nlohmann::json rep = nlohmann::json::parse(std::string(js.s));
    rep["radicand_selected"] = sin_squared ? "sin_squared" : "paper";
    rep["c_j_selected"] = sin_squared
                              ? rep["c_j_sin_squared_radical"].get<double>()
                              : rep["c_j_paper_radical"].get<double>();
    write_output(out_path,
                 finalize_json(rep.dump(), "ellipse-oracle", reproducible));
  } else if (*trace) {
    DomainGuard d{load_domain(domain_path)};
    StringGuard js, csv;
    check(bil_trace_check(d.d, j, &topts, &js.s,
                          trace_csv.empty() ? nullptr : &csv.s),
          "trace_check");
    write_output(out_path, finalize_json(js.s, "trace-check", reproducible));
    if (!trace_csv.empty()) write_output(trace_csv, csv.s);
  } else if (*verify) {
    StringGuard table;
    int all_pass = 0;
    check(bil_verify(suite.c_str(), &all_pass, &table.s), "verify");
    write_output(out_path, table.s);
    return all_pass ? 0 : 1;
  }
  return 0;
}
