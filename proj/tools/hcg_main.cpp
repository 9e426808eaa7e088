#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hcg/barrier.hpp"
#include "hcg/errors.hpp"
#include "hcg/radial.hpp"
#include "hcg/reports.hpp"
#include "hcg/scalar_bounds.hpp"
#include "hcg/solver.hpp"
#include "hcg/verify.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "hcg 0.1.0";

// Exit codes: 0 success, 1 solve or check failure, 2 usage/config error.
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hcg::ConfigError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw hcg::ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

hcg::DomainShape shape_from_json(const json& j) {
  const std::string type = j.value("type", "disk");
  if (type == "disk") {
    return hcg::make_disk(j.value("radius", 1.0));
  }
  if (type == "ellipse") {
    return hcg::make_ellipse(j.value("a", 1.0), j.value("b", 0.7));
  }
  if (type == "stadium") {
    return hcg::make_stadium(j.value("L", 0.5), j.value("r", 0.5));
  }
  throw hcg::ConfigError("unknown domain type '" + type + "'");
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw hcg::ConfigError("cannot create directory " + dir);
}

// Host- and time-dependent details live in their own file so the main
// reports stay byte-stable for a fixed seed.
void write_run_meta(const std::string& dir, const json& extra) {
  json meta = extra;
  meta["version"] = kVersion;
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["timestamp"] = buf;
  hcg::write_json(dir + "/run_meta.json", meta);
}

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              bool quiet) {
  json cfg = config_path.empty() ? json::object() : load_config(config_path);
  const hcg::DomainShape shape =
      shape_from_json(cfg.value("domain", json{{"type", "disk"}}));
  const double h = cfg.value("h", 1.0 / 32);
  const double sigma = cfg.value("sigma", 0.5);
  const std::string family_text = cfg.value("family", "mean");
  std::vector<double> eps_schedule;
  if (cfg.contains("eps")) {
    if (cfg["eps"].is_array()) {
      eps_schedule = cfg["eps"].get<std::vector<double>>();
    } else {
      eps_schedule.push_back(cfg["eps"].get<double>());
    }
  }
  std::string dir = out_dir.empty() ? cfg.value("out", "run") : out_dir;
  ensure_dir(dir);

  const hcg::CurvatureFamily fam = hcg::parse_family(family_text, 2);
  const hcg::GridDomain dom = hcg::GridDomain::build(shape, h);
  if (!quiet) {
    std::printf("domain %s, h = %g, %d nodes, family %s, sigma = %g\n",
                shape.name.c_str(), h, dom.num_nodes(), fam.label.c_str(),
                sigma);
    if (dom.min_boundary_curvature() < 0) {
      std::printf("warning: boundary fails mean-convexity (min curvature %g)\n",
                  dom.min_boundary_curvature());
    }
    if (sigma <= hcg::sigma0()) {
      std::printf(
          "warning: sigma = %g is at or below the threshold %.6f; uniform "
          "curvature bounds are not certified in this regime\n",
          sigma, hcg::sigma0());
    }
  }

  const std::vector<hcg::SolveResult> stages =
      hcg::continue_in_eps(dom, fam, sigma, eps_schedule);

  bool all_ok = true;
  json summary = json::array();
  for (size_t j = 0; j < stages.size(); ++j) {
    const hcg::SolveResult& st = stages[j];
    const std::string tag = "stage" + std::to_string(j);
    json rep = hcg::continuation_report_json(st.report);
    bool ok = st.report.status == hcg::RunStatus::Converged;
    if (ok) {
      const json est = hcg::solve_estimates_json(dom, st.field, fam, sigma);
      rep["estimates"] = est;
      ok = est["pass"].get<bool>();
      hcg::write_field_csv(dir + "/field_" + tag + ".csv", dom, st.field);
    }
    hcg::write_json(dir + "/report_" + tag + ".json", rep);
    summary.push_back(json{{"stage", static_cast<int>(j)},
                           {"eps", st.report.eps},
                           {"status", ok ? "ok" : "failed"}});
    all_ok = all_ok && ok;
    if (!quiet) {
      std::printf("stage %zu: eps = %g -> %s\n", j, st.report.eps,
                  ok ? "ok" : "FAILED");
    }
  }
  hcg::write_json(dir + "/summary.json",
                  json{{"stages", summary}, {"pass", all_ok}});
  write_run_meta(dir, json{{"command", "solve"}});
  return all_ok ? kExitOk : kExitFailed;
}

int cmd_radial(double sigma, double eps, double r_b, const std::string& family,
               int n, int mesh, const std::string& out_dir, bool quiet) {
  const hcg::CurvatureFamily fam = hcg::parse_family(family, n);
  hcg::RadialOptions opts;
  opts.mesh_size = mesh;
  const hcg::RadialProfile prof = hcg::solve_radial(fam, sigma, eps, r_b, opts);
  const hcg::DomainShape disk = hcg::make_disk(r_b);
  const json rep = hcg::radial_report_json(prof, disk);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    hcg::write_radial_csv(out_dir + "/radial.csv", prof);
    hcg::write_json(out_dir + "/radial_report.json", rep);
    write_run_meta(out_dir, json{{"command", "radial"}});
  }
  if (!quiet) std::printf("%s\n", rep.dump(2).c_str());
  const bool ok = prof.converged && rep["angle"]["pass"].get<bool>();
  return ok ? kExitOk : kExitFailed;
}

int cmd_verify(std::uint64_t seed, int samples, const std::string& out_dir,
               bool quiet) {
  const hcg::VerifyReport rep = hcg::run_property_suite(seed, samples);
  const json j = hcg::verify_report_json(rep);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    hcg::write_json(out_dir + "/verify_report.json", j);
    write_run_meta(out_dir, json{{"command", "verify"},
                                 {"seed", seed},
                                 {"samples", samples}});
  }
  if (!quiet) {
    for (const hcg::PropertyResult& r : rep.checks) {
      std::printf("%-22s %-14s n=%d  samples=%-6d worst=%-13.4g %s\n",
                  r.name.c_str(), r.family.empty() ? "-" : r.family.c_str(),
                  r.n, r.samples, r.worst_slack, r.pass() ? "pass" : "FAIL");
    }
    std::printf("overall: %s\n", rep.all_pass() ? "pass" : "FAIL");
  }
  return rep.all_pass() ? kExitOk : kExitFailed;
}

int cmd_sigma0(const std::string& out_path, bool quiet) {
  const double s0 = hcg::sigma0();
  const json j{{"sigma0", s0},
               {"phi_at_0", hcg::phi(0.0)},
               {"phi_at_1", hcg::phi(1.0)},
               {"phi_at_sigma0", hcg::phi(s0)}};
  if (!out_path.empty()) hcg::write_json(out_path, j);
  if (!quiet) std::printf("%s\n", j.dump(2).c_str());
  return kExitOk;
}

int cmd_barriers(double sigma, double eps, double r1, double r2, bool quiet) {
  const hcg::SphereRadii radii = hcg::sphere_radii(sigma, eps, r1, r2);
  const hcg::AngleBounds env = hcg::angle_bounds(sigma, eps, r1, r2);
  const json j{{"sigma", sigma},
               {"eps", eps},
               {"r1", r1},
               {"r2", std::isfinite(r2) ? json(r2) : json()},
               {"R1", radii.R1},
               {"R2", std::isfinite(radii.R2) ? json(radii.R2) : json()},
               {"angle_lower", env.lower},
               {"angle_upper", env.upper}};
  if (!quiet) std::printf("%s\n", j.dump(2).c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant hyperbolic curvature graphs over planar domains"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "suppress progress output");

  auto* solve = app.add_subcommand("solve", "continuation solve on a grid");
  solve->fallthrough();
  std::string config_path, out_dir;
  solve->add_option("--config", config_path, "JSON run configuration");
  solve->add_option("--out", out_dir, "output directory");

  auto* radial = app.add_subcommand("radial", "rotationally symmetric solve");
  radial->fallthrough();
  double r_sigma = 0.5, r_eps = 0.01, r_rb = 1.0;
  std::string r_family = "mean", r_out;
  int r_n = 2, r_mesh = 2048;
  radial->add_option("--sigma", r_sigma, "target curvature in (0,1)");
  radial->add_option("--eps", r_eps, "boundary height");
  radial->add_option("--rb", r_rb, "disk radius");
  radial->add_option("--family", r_family, "curvature function");
  radial->add_option("--n", r_n, "number of principal curvatures");
  radial->add_option("--mesh", r_mesh, "mesh intervals");
  radial->add_option("--out", r_out, "output directory");

  auto* verify = app.add_subcommand("verify", "randomized property suite");
  verify->fallthrough();
  std::uint64_t v_seed = 12345;
  int v_samples = 10000;
  std::string v_out;
  verify->add_option("--seed", v_seed, "RNG seed");
  verify->add_option("--samples", v_samples, "samples per check");
  verify->add_option("--out", v_out, "output directory");

  auto* sigma0 = app.add_subcommand("sigma0", "print the threshold constant");
  sigma0->fallthrough();
  std::string s_out;
  sigma0->add_option("--out", s_out, "write JSON to this path");

  auto* barriers = app.add_subcommand("barriers", "sphere radii and envelope");
  barriers->fallthrough();
  double b_sigma = 0.5, b_eps = 0.01, b_r1 = 1.0;
  double b_r2 = std::numeric_limits<double>::infinity();
  barriers->add_option("--sigma", b_sigma, "target curvature in (0,1)");
  barriers->add_option("--eps", b_eps, "boundary height");
  barriers->add_option("--r1", b_r1, "interior rolling-disk radius");
  barriers->add_option("--r2", b_r2, "exterior rolling-disk radius");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_dir, quiet);
    if (radial->parsed()) {
      return cmd_radial(r_sigma, r_eps, r_rb, r_family, r_n, r_mesh, r_out,
                        quiet);
    }
    if (verify->parsed()) return cmd_verify(v_seed, v_samples, v_out, quiet);
    if (sigma0->parsed()) return cmd_sigma0(s_out, quiet);
    if (barriers->parsed()) {
      return cmd_barriers(b_sigma, b_eps, b_r1, b_r2, quiet);
    }
  } catch (const hcg::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const hcg::FamilyParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const hcg::PreconditionViolated& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailed;
  }
  return kExitUsage;
}
