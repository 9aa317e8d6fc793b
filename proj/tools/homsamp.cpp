// homsamp: command-line front end for the sampling library.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homsamp/battery.hpp"
#include "homsamp/besov.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/error.hpp"
#include "homsamp/experiment.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/io.hpp"
#include "homsamp/sampling.hpp"
#include "homsamp/space.hpp"
#include "homsamp/verification.hpp"

using namespace homsamp;

namespace {

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw InvalidArgument("bad exponent '" + text + "'");
  return v;
}

void put(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_text(out, content);
  }
}

struct Loaded {
  PointCloudSpace space;
  DyadicSystem system;
  WaveletFrame frame;
};

Loaded load_all(const std::string& space_path, const std::string& cubes_path,
                const std::string& frame_path) {
  PointCloudSpace space = space_from_json(read_text(space_path));
  DyadicSystem system = cubes_from_json(read_text(cubes_path));
  WaveletFrame frame = frame_from_json(read_text(frame_path), system, space);
  return {std::move(space), std::move(system), std::move(frame)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling on spaces of homogeneous type"};
  app.require_subcommand(1);
  int exit_code = 0;

  // build-space
  auto* bs = app.add_subcommand("build-space", "Discretize a model space");
  std::string generator = "torus-1d";
  std::size_t resolution = 1024;
  std::string out;
  bs->add_option("--generator", generator, "torus-1d, cantor-dset(D), anisotropic-square[(adapted)]");
  bs->add_option("--resolution", resolution, "Point count (Cantor: ignored)");
  bs->add_option("--out", out, "Output file (default stdout)");
  bs->callback([&] { put(out, space_to_json(discretize(generator, resolution))); });

  // build-cubes
  auto* bc = app.add_subcommand("build-cubes", "Build and verify a dyadic system");
  std::string space_path;
  int jmin = 0;
  int jmax = 8;
  double sep = 1.0;
  int base = 0;
  bc->add_option("--space", space_path)->required();
  bc->add_option("--jmin", jmin);
  bc->add_option("--jmax", jmax);
  bc->add_option("--sep", sep, "Net separation factor in (0, 1]");
  bc->add_option("--base", base, "Scale base (0 = natural)");
  bc->add_option("--out", out);
  bc->callback([&] {
    const PointCloudSpace space = space_from_json(read_text(space_path));
    DyadicSystem system = build_dyadic_system(space, jmin, jmax, {sep, base});
    const DyadicVerification v = verify_dyadic(system, space);
    system.r0_measured = v.r0;
    system.r1_measured = v.r1;
    put(out, cubes_to_json(system));
    std::cerr << reports_json(v.reports);
    if (!v.all_exact_pass()) exit_code = 1;
  });

  // build-frame
  auto* bf = app.add_subcommand("build-frame", "Build the wavelet frame");
  std::string cubes_path;
  double cphi = 1.5;
  std::string profile = "tent";
  std::string phi_csv;
  std::string psi_csv;
  bf->add_option("--space", space_path)->required();
  bf->add_option("--cubes", cubes_path)->required();
  bf->add_option("--cphi", cphi, "C_phi target");
  bf->add_option("--profile", profile, "tent | smoothstep");
  bf->add_option("--out", out);
  bf->add_option("--phi-csv", phi_csv, "Also write the synthesis family");
  bf->add_option("--psi-csv", psi_csv, "Also write the dual family (dense)");
  bf->callback([&] {
    const PointCloudSpace space = space_from_json(read_text(space_path));
    const DyadicSystem system = cubes_from_json(read_text(cubes_path));
    FrameOptions o;
    o.cphi_target = cphi;
    o.profile = parse_profile(profile);
    const WaveletFrame frame = build_frame(system, space, o);
    put(out, frame_header_json(frame));
    if (!phi_csv.empty()) write_text(phi_csv, frame_phi_csv(frame));
    if (!psi_csv.empty()) write_text(psi_csv, frame_psi_csv(frame));
    const FrameVerification v = verify_frame(frame, space);
    std::cerr << reports_json(v.reports);
  });

  // besov-norm
  auto* bn = app.add_subcommand("besov-norm", "Besov norm of a coefficient table");
  std::string coeffs_path;
  double s = 0.0;
  std::string p_text = "2";
  std::string q_text = "1";
  double d = 1.0;
  int coeff_base = 2;
  bool terms = false;
  bn->add_option("--coeffs", coeffs_path, "CSV with rows j,k,value")->required();
  bn->add_option("--s", s)->required();
  bn->add_option("--p", p_text)->required();
  bn->add_option("--q", q_text)->required();
  bn->add_option("--d", d)->required();
  bn->add_option("--base", coeff_base);
  bn->add_flag("--terms", terms, "Also print the per-level terms");
  bn->callback([&] {
    const CoefficientTable c = coefficients_from_csv(read_text(coeffs_path), coeff_base);
    const BesovParams bp{s, parse_exponent(p_text), parse_exponent(q_text)};
    std::cout << format_double(besov_norm(c, bp, d)) << "\n";
    if (terms) {
      const auto t = besov_level_terms(c, bp, d);
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::cout << c.j_min() + int(i) << "," << format_double(t[i]) << "\n";
      }
    }
  });

  // sample
  auto* sm = app.add_subcommand("sample", "Check the sampling inequalities for one function");
  std::string frame_path;
  std::string function = "sin:1";
  double eps = 0.25;
  std::optional<double> kappa;
  bool calibrate = false;
  std::optional<double> class_K;
  std::vector<std::string> battery;
  sm->add_option("--space", space_path)->required();
  sm->add_option("--cubes", cubes_path)->required();
  sm->add_option("--frame", frame_path)->required();
  sm->add_option("--function", function);
  sm->add_option("--eps", eps);
  sm->add_option("--p", p_text);
  auto* kopt = sm->add_option("--kappa", kappa);
  sm->add_flag("--calibrate", calibrate, "Calibrate kappa on --battery (default: smooth battery plus the function) first")
      ->excludes(kopt);
  sm->add_option("--K", class_K, "Fixed class bound instead of K_f");
  sm->add_option("--battery", battery);
  sm->add_option("--out", out);
  sm->callback([&] {
    const Loaded l = load_all(space_path, cubes_path, frame_path);
    const double p = parse_exponent(p_text);
    double k = kappa.value_or(1.0);
    if (calibrate) {
      if (battery.empty()) {
        battery = smooth_battery();
        if (std::find(battery.begin(), battery.end(), function) == battery.end()) {
          battery.push_back(function);
        }
      }
      std::vector<SamplingProfile> fam;
      for (const auto& name : battery) {
        fam.push_back(profile_function(l.space, l.system, l.frame,
                                       evaluate_function(name, l.space), p, name));
      }
      const KappaCalibration c =
          calibrate_kappa(fam, l.space.params(), l.system.j_min(), l.system.j_max(),
                          l.system.base(), {eps}, class_K);
      std::cerr << calibration_json(c);
      if (!c.found) {
        exit_code = 1;
        return;
      }
      k = c.kappa;
    } else if (!kappa) {
      throw InvalidArgument("sample: give --kappa or --calibrate");
    }
    const SamplingReport r = verify_sampling_theorem(
        l.space, l.system, l.frame, evaluate_function(function, l.space), eps, k, p, class_K);
    put(out, sampling_report_json(r, function));
    if (r.status != SamplingStatus::pass) exit_code = 1;
  });

  // diagnose
  auto* dg = app.add_subcommand("diagnose", "Proof diagnostics for one function and level");
  int level = 0;
  std::string prefix = "diagnostics";
  dg->add_option("--space", space_path)->required();
  dg->add_option("--cubes", cubes_path)->required();
  dg->add_option("--frame", frame_path)->required();
  dg->add_option("--function", function);
  dg->add_option("--level", level)->required();
  dg->add_option("--p", p_text);
  dg->add_option("--eps", eps);
  dg->add_option("--prefix", prefix, "Writes PREFIX_E.csv and PREFIX_counts.csv");
  dg->callback([&] {
    const Loaded l = load_all(space_path, cubes_path, frame_path);
    const DiagnosticsRecord r =
        proof_diagnostics(l.space, l.system, l.frame, evaluate_function(function, l.space), level,
                          parse_exponent(p_text), eps);
    write_text(prefix + "_E.csv", diagnostics_E_csv(r, l.system.j_min()));
    write_text(prefix + "_counts.csv", diagnostics_counts_csv(r.counts, l.system.j_min()));
    std::cout << diagnostics_summary_json(r, l.system.j_min());
  });

  // run
  auto* rn = app.add_subcommand("run", "Run a full experiment");
  ExperimentConfig cfg;
  std::string config_path;
  std::vector<std::string> eps_list;
  std::vector<std::string> p_list;
  std::optional<double> run_kappa;
  rn->add_option("--config", config_path, "JSON config; overrides the flags below");
  rn->add_option("--generator", cfg.generator);
  rn->add_option("--resolution", cfg.resolution);
  rn->add_option("--jmin", cfg.j_min);
  rn->add_option("--jmax", cfg.j_max);
  rn->add_option("--sep", cfg.separation);
  rn->add_option("--cphi", cfg.cphi_target);
  rn->add_option("--profile", cfg.profile);
  rn->add_option("--battery", cfg.battery);
  rn->add_option("--eps", eps_list);
  rn->add_option("--p", p_list);
  rn->add_option("--kappa", run_kappa, "Fixed kappa (default: calibrate)");
  rn->add_option("--seed", cfg.seed);
  rn->add_option("--out", cfg.output_directory, "Output directory");
  rn->callback([&] {
    ExperimentConfig c = cfg;
    if (!eps_list.empty()) {
      c.epsilons.clear();
      for (const auto& e : eps_list) c.epsilons.push_back(std::stod(e));
    }
    if (!p_list.empty()) {
      c.p_values.clear();
      for (const auto& p : p_list) c.p_values.push_back(parse_exponent(p));
    }
    if (run_kappa) {
      c.calibrate = false;
      c.kappa = *run_kappa;
    }
    if (c.battery.empty()) c.battery = {"const", "sin:1", "sin:2", "cos:1", "bump", "stair:4"};
    if (!config_path.empty()) c = parse_experiment_config(read_text(config_path));
    const ExperimentResult r = run_experiment(c);
    if (!r.complete) {
      std::cerr << "stage " << r.failed_stage << " failed: " << r.error << "\n";
    }
    exit_code = r.exit_code();
  });

  // verify
  auto* vf = app.add_subcommand("verify", "Check the space axioms");
  vf->add_option("--space", space_path, "Space file (or use --generator/--resolution)");
  vf->add_option("--generator", generator);
  vf->add_option("--resolution", resolution);
  vf->add_option("--out", out);
  vf->callback([&] {
    const PointCloudSpace space = space_path.empty() ? discretize(generator, resolution)
                                                     : space_from_json(read_text(space_path));
    const auto reports = verify_space(space, resolvable_radii(space));
    put(out, reports_json(reports));
    for (const auto& r : reports) {
      if (!r.pass) exit_code = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
