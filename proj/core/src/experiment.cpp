#include "homsamp/experiment.hpp"

#include <cmath>
#include <filesystem>

#include "homsamp/battery.hpp"
#include "homsamp/besov.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/error.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/io.hpp"
#include "homsamp/sampling.hpp"
#include "homsamp/space.hpp"
#include "json.hpp"

namespace homsamp {

using nlohmann::json;

namespace {

double exponent_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) {
    return kInfinity;
  }
  throw InvalidArgument("config: exponent must be a number or \"inf\", got " + v.dump());
}

std::string p_label(double p) { return format_double(p); }

std::string resolve_name(const std::string& name, std::uint64_t seed) {
  return name == "noise" ? "noise:" + std::to_string(seed) : name;
}

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (resolution < 2) throw InvalidArgument("config: resolution must be >= 2");
  if (j_min > j_max) throw InvalidArgument("config: j_min must not exceed j_max");
  if (!(separation > 0.0 && separation <= 1.0)) {
    throw InvalidArgument("config: separation must lie in (0, 1]");
  }
  if (base != 0 && base < 2) throw InvalidArgument("config: base must be 0 or >= 2");
  if (!(cphi_target > 0.0)) throw InvalidArgument("config: C_phi_target must be > 0");
  parse_profile(profile);
  if (battery.empty()) throw InvalidArgument("config: battery is empty");
  for (const auto& name : battery) validate_function_name(resolve_name(name, seed));
  if (epsilons.empty()) throw InvalidArgument("config: epsilon list is empty");
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("config: every epsilon must lie in (0, 1)");
  }
  if (p_values.empty()) throw InvalidArgument("config: p list is empty");
  for (double p : p_values) {
    if (!(p >= 1.0)) throw InvalidArgument("config: every p must be >= 1");
  }
  if (!calibrate && !(kappa > 0.0)) throw InvalidArgument("config: kappa must be > 0");
  if (class_K && !(*class_K >= 1.0)) throw InvalidArgument("config: K must be >= 1");
  if (diagnostics_function) validate_function_name(resolve_name(*diagnostics_function, seed));
  if (diagnostics_level && (*diagnostics_level < j_min || *diagnostics_level > j_max)) {
    throw InvalidArgument("config: diagnostics level outside [j_min, j_max]");
  }
  if (output_directory.empty()) throw InvalidArgument("config: output directory is empty");
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  ExperimentConfig c;
  try {
    if (j.contains("space")) {
      const json& s = j["space"];
      c.generator = s.value("generator", c.generator);
      c.resolution = s.value("resolution", c.resolution);
    }
    if (j.contains("cubes")) {
      const json& s = j["cubes"];
      c.j_min = s.value("j_min", c.j_min);
      c.j_max = s.value("j_max", c.j_max);
      c.separation = s.value("separation", c.separation);
      c.base = s.value("base", c.base);
    }
    if (j.contains("frame")) {
      const json& s = j["frame"];
      c.cphi_target = s.value("C_phi_target", c.cphi_target);
      c.profile = s.value("profile", c.profile);
    }
    if (j.contains("battery")) c.battery = j["battery"].get<std::vector<std::string>>();
    if (j.contains("sampling")) {
      const json& s = j["sampling"];
      if (s.contains("epsilons")) c.epsilons = s["epsilons"].get<std::vector<double>>();
      if (s.contains("p")) {
        c.p_values.clear();
        for (const json& p : s["p"]) c.p_values.push_back(exponent_from_json(p));
      }
      if (s.contains("kappa")) {
        const json& k = s["kappa"];
        const std::string mode = k.value("mode", std::string("calibrate"));
        if (mode == "calibrate") {
          c.calibrate = true;
        } else if (mode == "fixed") {
          c.calibrate = false;
          c.kappa = k.at("value").get<double>();
        } else {
          throw InvalidArgument("config: kappa mode must be \"fixed\" or \"calibrate\"");
        }
      }
      if (s.contains("K")) c.class_K = s["K"].get<double>();
    }
    if (j.contains("diagnostics")) {
      const json& s = j["diagnostics"];
      if (s.contains("function")) c.diagnostics_function = s["function"].get<std::string>();
      if (s.contains("level")) c.diagnostics_level = s["level"].get<int>();
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("output")) {
      const json& s = j["output"];
      c.output_directory = s.value("directory", c.output_directory);
      if (s.contains("formats")) {
        c.write_csv = false;
        c.write_json = false;
        for (const auto& f : s["formats"].get<std::vector<std::string>>()) {
          if (f == "csv") {
            c.write_csv = true;
          } else if (f == "json") {
            c.write_json = true;
          } else {
            throw InvalidArgument("config: unknown output format '" + f + "'");
          }
        }
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  return c;
}

int ExperimentResult::exit_code() const {
  if (!complete) return 2;
  return all_pass ? 0 : 1;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  ExperimentResult result;
  std::string stage = "config";
  const fs::path dir(config.output_directory);

  auto emit = [&](const std::string& name, const std::string& content) {
    write_text((dir / name).string(), content);
    result.files.push_back(name);
  };

  try {
    config.validate();
    fs::create_directories(dir);

    stage = "discretize";
    const PointCloudSpace space = discretize(config.generator, config.resolution);
    emit("space.json", space_to_json(space));

    stage = "build_dyadic_system";
    DyadicOptions dopt;
    dopt.separation = config.separation;
    dopt.base = config.base;
    DyadicSystem system = build_dyadic_system(space, config.j_min, config.j_max, dopt);

    stage = "verify_dyadic";
    const DyadicVerification dver = verify_dyadic(system, space);
    system.r0_measured = dver.r0;
    system.r1_measured = dver.r1;
    emit("cubes.json", cubes_to_json(system));
    if (config.write_json) emit("verify_dyadic.json", reports_json(dver.reports));

    stage = "build_frame";
    FrameOptions fopt;
    fopt.cphi_target = config.cphi_target;
    fopt.profile = parse_profile(config.profile);
    const WaveletFrame frame = build_frame(system, space, fopt);
    emit("frame.json", frame_header_json(frame));
    if (config.write_csv) emit("frame_phi.csv", frame_phi_csv(frame));

    stage = "verify_frame";
    const FrameVerification fver = verify_frame(frame, space);
    if (config.write_json) emit("verify_frame.json", reports_json(fver.reports));

    stage = "analyze";
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    for (const auto& raw : config.battery) {
      names.push_back(resolve_name(raw, config.seed));
      values.push_back(evaluate_function(names.back(), space));
    }
    std::vector<std::vector<SamplingProfile>> profiles(config.p_values.size());
    std::string besov_rows = "function,p,lp_norm,besov_norm,K_f\n";
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        profiles[pi].push_back(
            profile_function(space, system, frame, values[i], config.p_values[pi], names[i]));
        const auto& pr = profiles[pi].back();
        besov_rows += names[i] + "," + p_label(pr.p) + "," + format_double(pr.lp_f) + "," +
                      format_double(pr.besov_f) + "," + format_double(pr.K_f) + "\n";
      }
    }
    if (config.write_csv) emit("besov.csv", besov_rows);

    stage = "calibrate_kappa";
    std::vector<double> kappas;
    json calib = json::array();
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      if (!config.calibrate) {
        kappas.push_back(config.kappa);
        continue;
      }
      const KappaCalibration c = calibrate_kappa(profiles[pi], space.params(), system.j_min(),
                                                 system.j_max(), system.base(), config.epsilons,
                                                 config.class_K);
      kappas.push_back(c.found ? c.kappa : std::pow(1.25, kKappaGridMax));
      json cj = json::parse(calibration_json(c));
      cj["p"] = jnum(config.p_values[pi]);
      calib.push_back(std::move(cj));
    }
    if (config.calibrate && config.write_json) emit("calibration.json", calib.dump(2) + "\n");

    stage = "sampling";
    std::string rows =
        "function,p,epsilon,K_f,K,kappa,formula_level,l,clamped,error,error_rel,discrete_rel,"
        "pass_error,pass_sandwich,status\n";
    json reports = json::array();
    bool all_pass = true;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t unresolvable = 0;
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      for (const auto& prof : profiles[pi]) {
        for (double eps : config.epsilons) {
          const SamplingReport r =
              evaluate_sampling(prof, space.params(), system.j_min(), system.j_max(),
                                system.base(), eps, kappas[pi], config.class_K);
          all_pass = all_pass && r.status == SamplingStatus::pass;
          passed += r.status == SamplingStatus::pass;
          failed += r.status == SamplingStatus::fail;
          unresolvable += r.status == SamplingStatus::unresolvable;
          const bool resolved = r.status != SamplingStatus::unresolvable;
          rows += prof.name + "," + p_label(prof.p) + "," + format_double(eps) + "," +
                  format_double(r.K_f) + "," + format_double(r.plan.K) + "," +
                  format_double(r.plan.kappa) + "," + std::to_string(r.plan.formula_level) + "," +
                  (resolved ? std::to_string(r.plan.level) : std::string()) + "," +
                  (r.plan.clamped ? "true" : "false") + "," +
                  (resolved ? format_double(r.error) : std::string()) + "," +
                  (resolved ? format_double(r.error / r.lp_f) : std::string()) + "," +
                  (resolved ? format_double(r.discrete_norm / r.lp_f) : std::string()) + "," +
                  (r.pass_error ? "true" : "false") + "," + (r.pass_sandwich ? "true" : "false") +
                  "," + status_name(r.status) + "\n";
          reports.push_back(json::parse(sampling_report_json(r, prof.name)));
        }
      }
    }
    if (config.write_csv) emit("sampling.csv", rows);
    if (config.write_json) emit("sampling.json", reports.dump(2) + "\n");
    result.all_pass = all_pass;

    json diag_summary;
    if (config.diagnostics_function) {
      stage = "proof_diagnostics";
      const std::string fname = resolve_name(*config.diagnostics_function, config.seed);
      const std::vector<double> f = evaluate_function(fname, space);
      const int l = config.diagnostics_level.value_or((system.j_min() + system.j_max()) / 2);
      const DiagnosticsRecord rec = proof_diagnostics(space, system, frame, f, l,
                                                      config.p_values.front(),
                                                      config.epsilons.front());
      if (config.write_csv) {
        emit("diagnostics_E.csv", diagnostics_E_csv(rec, system.j_min()));
        emit("diagnostics_counts.csv", diagnostics_counts_csv(rec.counts, system.j_min()));
      }
      if (config.write_json) {
        json dj = json::parse(diagnostics_summary_json(rec, system.j_min()));
        dj["function"] = fname;
        emit("diagnostics.json", dj.dump(2) + "\n");
      }
      diag_summary = {{"R_measured", rec.counts.R_measured},
                      {"lambda_coarse_constant", jnum(rec.counts.lambda_coarse_constant)},
                      {"lambda_fine_constant", rec.counts.lambda_fine_constant}};
    }

    stage = "write";
    if (config.write_json) {
      json s;
      s["space"] = {{"generator", space.generator().name()},
                    {"resolution", space.resolution()},
                    {"points", space.size()},
                    {"d", jnum(space.params().d)},
                    {"theta", jnum(space.params().theta)},
                    {"A", jnum(space.params().A)}};
      s["cubes"] = {{"j_min", system.j_min()},   {"j_max", system.j_max()},
                    {"base", system.base()},     {"r0", jnum(dver.r0)},
                    {"r1", jnum(dver.r1)},       {"exact_checks_pass", dver.all_exact_pass()},
                    {"cube_measure_min", jnum(dver.cube_measure_min)},
                    {"cube_measure_max", jnum(dver.cube_measure_max)}};
      s["frame"] = {{"C_phi", jnum(frame.C_phi)},
                    {"N_measured", frame.N_measured},
                    {"multiplicity_uniform", fver.multiplicity_uniform},
                    {"lower_bound", jnum(frame.frame_bounds.lower)},
                    {"upper_bound", jnum(frame.frame_bounds.upper)}};
      json kj = json::array();
      for (std::size_t pi = 0; pi < kappas.size(); ++pi) {
        kj.push_back({{"p", jnum(config.p_values[pi])}, {"kappa", jnum(kappas[pi])}});
      }
      s["kappa"] = std::move(kj);
      s["sampling"] = {{"pass", passed}, {"fail", failed}, {"unresolvable", unresolvable}};
      if (!diag_summary.is_null()) s["diagnostics"] = diag_summary;
      emit("summary.json", s.dump(2) + "\n");
    }
    result.complete = true;
  } catch (const std::exception& e) {
    result.failed_stage = stage;
    result.error = e.what();
  }

  std::string manifest = std::string("complete: ") + (result.complete ? "true" : "false") + "\n";
  manifest += "failed_stage: " + result.failed_stage + "\n";
  if (!result.error.empty()) manifest += "error: " + result.error + "\n";
  manifest += "files:\n";
  for (const auto& f : result.files) manifest += "  " + f + "\n";
  try {
    fs::create_directories(dir);
    write_text((dir / "MANIFEST").string(), manifest);
  } catch (const std::exception& e) {
    if (result.complete) {
      result.complete = false;
      result.failed_stage = "write";
      result.error = e.what();
    }
  }
  return result;
}

}  // namespace homsamp
