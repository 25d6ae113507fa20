/**
 * \file sbptool.cpp
 * \brief Batch driver: operator construction, verification, and the periodic
 *        advection studies, with JSON/CSV outputs and run manifests.
 */
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sbp/studies.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string golden_dir_default() {
  if (const char* env = std::getenv("SBP_GOLDEN_DIR")) return env;
  return "data";
}

sbp::CubatureRule get_rule(int p, int d, const std::string& golden_dir) {
  const std::string path =
      golden_dir + "/cubature/" + sbp::cubature_filename(p, d);
  try {
    return sbp::load_cubature(path);
  } catch (const std::exception&) {
    std::cerr << "note: no golden rule at " << path << ", solving afresh\n";
    return sbp::solve_cubature(p, d);
  }
}

struct ManifestWriter {
  std::string subcommand;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write() const {
    if (outputs.empty()) return;
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["parameters"] = parameters;
    j["outputs"] = outputs;
    j["tool_version"] = kToolVersion;
    j["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::ofstream f(outputs.front() + ".manifest.json");
    f << j.dump(2) << "\n";
  }
};

std::vector<int> parse_mesh_range(const std::string& spec) {
  // forms: "8", "4,8,16", "4:32:x2" (multiplicative), "4:32:+4" (additive)
  std::vector<int> out;
  const auto c1 = spec.find(':');
  if (c1 == std::string::npos) {
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
  }
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw CLI::ValidationError("--n", "range must be start:stop:step");
  const int start = std::stoi(spec.substr(0, c1));
  const int stop = std::stoi(spec.substr(c1 + 1, c2 - c1 - 1));
  std::string step = spec.substr(c2 + 1);
  bool mult = false;
  if (!step.empty() && (step[0] == 'x' || step[0] == '*')) {
    mult = true;
    step = step.substr(1);
  } else if (step.rfind("\xc3\x97", 0) == 0) {  // UTF-8 multiplication sign
    mult = true;
    step = step.substr(2);
  } else if (!step.empty() && step[0] == '+') {
    step = step.substr(1);
  }
  const int inc = std::stoi(step);
  if (inc <= (mult ? 1 : 0))
    throw CLI::ValidationError("--n", "step must advance the range");
  for (int n = start; n <= stop; n = mult ? n * inc : n + inc) out.push_back(n);
  if (out.empty()) throw CLI::ValidationError("--n", "empty mesh range");
  return out;
}

int run_verify(int p, int d, const std::string& golden_dir, bool quiet = false) {
  const auto rule = get_rule(p, d, golden_dir);
  const auto ops = sbp::build_element_operators(rule);
  const auto rep = sbp::verify_sbp(ops);
  const double bilinear = sbp::bilinear_accuracy_check(ops);
  const double cub = sbp::verify_cubature(rule, 2 * p - 1);
  struct Check {
    const char* name;
    double value;
    double tol;
  };
  const Check checks[] = {
      {"accuracy", rep.max_accuracy(), 1e-10},
      {"antisymmetry", rep.antisymmetry, 1e-12},
      {"e_symmetry", rep.e_symmetry, 1e-12},
      {"surface_moment", rep.surface_moment, 1e-10},
      {"compatibility", rep.compatibility, 1e-10},
      {"bilinear", bilinear, 1e-10},
      {"cubature_exactness", cub, 1e-12},
  };
  int failures = 0;
  if (!quiet)
    std::printf("operator p=%d d=%d (n=%d nodes, tau=%d, min weight %.3e)\n", p,
                d, ops.size(), rep.tau, rep.min_norm_weight);
  for (const auto& c : checks) {
    const bool ok = c.value <= c.tol;
    if (!ok) ++failures;
    if (!quiet || !ok)
      std::printf("  %-20s %.3e  (tol %.0e) %s\n", c.name, c.value, c.tol,
                  ok ? "ok" : "FAIL");
  }
  if (rep.min_norm_weight <= 0.0) {
    ++failures;
    std::printf("  %-20s %.3e  FAIL\n", "min_norm_weight", rep.min_norm_weight);
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diagonal-norm SBP operators on simplices"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string golden_dir = golden_dir_default();
  app.add_option("--golden-dir", golden_dir,
                 "directory holding golden cubature files (env SBP_GOLDEN_DIR)");

  int p = 2, dim = 2, N = 32;
  double sigma = 1.0, cfl = -1.0, T = -1.0;
  std::string scheme = "csbp", out, nrange = "4:32:x2";
  bool all = false;

  auto add_pd = [&](CLI::App* cmd, bool with_dim) {
    cmd->add_option("--p", p, "operator degree")->check(CLI::Range(1, 4));
    if (with_dim)
      cmd->add_option("--dim", dim, "spatial dimension")->check(CLI::IsMember({2, 3}));
  };

  auto* cub = app.add_subcommand("cubature", "solve and store a cubature rule");
  add_pd(cub, true);
  cub->add_option("--out", out, "output JSON path (default golden dir)");

  auto* bops = app.add_subcommand("build-ops", "construct operators and write JSON");
  add_pd(bops, true);
  bops->add_option("--out", out, "output JSON path")->required();

  auto* ver = app.add_subcommand("verify", "verify SBP properties");
  add_pd(ver, true);
  ver->add_flag("--all", all, "verify p=1..4 for both dimensions");

  auto* conv = app.add_subcommand("converge", "grid-refinement study");
  add_pd(conv, false);
  conv->add_option("--scheme", scheme, "csbp|dsbp")
      ->check(CLI::IsMember({"csbp", "dsbp"}));
  conv->add_option("--n", nrange, "mesh sizes, e.g. 4:32:x2 or 4,8,16");
  conv->add_option("--cfl", cfl, "CFL number (default 0.9 CFL_max)");
  conv->add_option("--sigma", sigma, "SAT penalty");
  conv->add_option("--out", out, "CSV output path")->required();

  auto* spec = app.add_subcommand("spectrum", "eigenvalues of the assembled operator");
  add_pd(spec, false);
  spec->add_option("--scheme", scheme, "csbp|se")
      ->check(CLI::IsMember({"csbp", "se"}));
  spec->add_option("--n", N, "mesh size")->check(CLI::Range(2, 16));
  spec->add_option("--out", out, "CSV output path")->required();

  auto* ener = app.add_subcommand("energy", "energy history over [0, T]");
  add_pd(ener, false);
  ener->add_option("--scheme", scheme, "csbp|dsbp|se")
      ->check(CLI::IsMember({"csbp", "dsbp", "se"}));
  ener->add_option("--n", N, "mesh size")->check(CLI::Range(2, 64));
  ener->add_option("--cfl", cfl, "CFL number (default 0.01)");
  ener->add_option("--t", T, "final time (default 2)");
  ener->add_option("--sigma", sigma, "SAT penalty");
  ener->add_option("--out", out, "CSV output path")->required();

  auto* cflcmd = app.add_subcommand("cfl", "maximally stable CFL search");
  add_pd(cflcmd, false);
  cflcmd->add_option("--scheme", scheme, "csbp|dsbp")
      ->check(CLI::IsMember({"csbp", "dsbp"}));
  cflcmd->add_option("--n", N, "mesh size (study protocol: 32)");
  cflcmd->add_option("--sigma", sigma, "SAT penalty");
  cflcmd->add_option("--out", out, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ManifestWriter manifest;
  manifest.parameters["p"] = p;
  manifest.parameters["dim"] = dim;
  manifest.parameters["sigma"] = sigma;

  try {
    if (cub->parsed()) {
      manifest.subcommand = "cubature";
      const auto rule = sbp::solve_cubature(p, dim);
      if (out.empty()) {
        std::filesystem::create_directories(golden_dir + "/cubature");
        out = golden_dir + "/cubature/" + sbp::cubature_filename(p, dim);
      }
      sbp::save_cubature(rule, out);
      manifest.outputs.push_back(out);
      std::printf("cubature p=%d d=%d: %d nodes, residual %.3e, branch %s -> %s\n",
                  p, dim, rule.node_count(), rule.residual, rule.branch.c_str(),
                  out.c_str());
      manifest.write();
      return 0;
    }

    if (bops->parsed()) {
      manifest.subcommand = "build-ops";
      const auto rule = get_rule(p, dim, golden_dir);
      const auto ops = sbp::build_element_operators(rule);
      sbp::save_operators(ops, out);
      manifest.outputs.push_back(out);
      std::printf("operators p=%d d=%d (%d nodes) -> %s\n", p, dim, ops.size(),
                  out.c_str());
      manifest.write();
      const auto rep = sbp::verify_sbp(ops);
      return rep.max_accuracy() <= 1e-10 ? 0 : 1;
    }

    if (ver->parsed()) {
      manifest.subcommand = "verify";
      int failures = 0;
      if (all) {
        for (int d : {2, 3})
          for (int pp = 1; pp <= 4; ++pp) failures += run_verify(pp, d, golden_dir);
      } else {
        failures = run_verify(p, dim, golden_dir);
      }
      if (failures) std::printf("%d verification check(s) failed\n", failures);
      return failures ? 1 : 0;
    }

    const auto rule = get_rule(p, 2, golden_dir);
    const sbp::Scheme sch = sbp::scheme_from_name(scheme);

    if (conv->parsed()) {
      manifest.subcommand = "converge";
      const auto Ns = parse_mesh_range(nrange);
      if (cfl <= 0.0) cfl = 0.9 * sbp::default_cfl_max(sch, p);
      manifest.parameters["scheme"] = scheme;
      manifest.parameters["cfl"] = cfl;
      manifest.parameters["n"] = Ns;
      const auto points = sbp::run_convergence(rule, sch, Ns, cfl, sigma);
      std::ofstream f(out);
      f << "scheme,p,N,h,normalized_error\n";
      f.precision(17);
      for (const auto& pt : points)
        f << scheme << ',' << p << ',' << pt.N << ',' << pt.h << ','
          << pt.error << '\n';
      manifest.outputs.push_back(out);
      manifest.write();
      const double slope = sbp::fitted_slope(points, std::min<int>(3, points.size()));
      std::printf("converge %s p=%d: fitted slope %.3f -> %s\n", scheme.c_str(), p,
                  slope, out.c_str());
      return 0;
    }

    if (spec->parsed()) {
      manifest.subcommand = "spectrum";
      manifest.parameters["scheme"] = scheme;
      manifest.parameters["N"] = N;
      const auto g = sbp::build_global_for_scheme(rule, sch, N);
      const sbp::CVec ev = sbp::operator_spectrum(g);
      std::ofstream f(out);
      f << "re,im\n";
      f.precision(17);
      for (int i = 0; i < ev.size(); ++i)
        f << ev[i].real() << ',' << ev[i].imag() << '\n';
      manifest.outputs.push_back(out);
      manifest.write();
      double max_re = 0.0, max_abs = 0.0;
      for (int i = 0; i < ev.size(); ++i) {
        max_re = std::max(max_re, std::abs(ev[i].real()));
        max_abs = std::max(max_abs, std::abs(ev[i]));
      }
      std::printf("spectrum %s p=%d N=%d: %ld eigenvalues, max|Re| = %.3e "
                  "(max|lambda| = %.3e) -> %s\n",
                  scheme.c_str(), p, N, static_cast<long>(ev.size()), max_re,
                  max_abs, out.c_str());
      return 0;
    }

    if (ener->parsed()) {
      manifest.subcommand = "energy";
      if (cfl <= 0.0) cfl = 0.01;
      if (T <= 0.0) T = 2.0;
      manifest.parameters["scheme"] = scheme;
      manifest.parameters["cfl"] = cfl;
      manifest.parameters["T"] = T;
      manifest.parameters["N"] = N;
      const auto history = sbp::run_energy_history(rule, sch, N, cfl, T, sigma);
      std::ofstream f(out);
      f << "t,delta_E\n";
      f.precision(17);
      for (const auto& s : history) f << s.t << ',' << s.delta_e << '\n';
      manifest.outputs.push_back(out);
      manifest.write();
      std::printf("energy %s p=%d N=%d: delta_E(T=%g) = %.6e -> %s\n",
                  scheme.c_str(), p, N, T, history.back().delta_e, out.c_str());
      return 0;
    }

    if (cflcmd->parsed()) {
      manifest.subcommand = "cfl";
      manifest.parameters["scheme"] = scheme;
      manifest.parameters["N"] = N;
      const auto res = sbp::run_cfl_search(rule, sch, N, sigma);
      std::ofstream f(out);
      f << "scheme,p,cfl_max\n";
      f.precision(17);
      f << scheme << ',' << p << ',' << res.cfl_max << '\n';
      manifest.outputs.push_back(out);
      manifest.write();
      std::printf("cfl %s p=%d N=%d: CFL_max = %.4f%s -> %s\n", scheme.c_str(), p,
                  N, res.cfl_max, res.bracketed ? "" : " (bracket edge)",
                  out.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
