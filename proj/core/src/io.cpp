#include "homsamp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "homsamp/error.hpp"
#include "json.hpp"

namespace homsamp {

using nlohmann::json;

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double to_num(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kInfinity;
    if (s == "-inf") return -kInfinity;
    if (s == "nan") return std::nan("");
  }
  throw FormatError("expected a number, got " + v.dump());
}

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

template <class Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

// ---- space

std::string space_to_json(const PointCloudSpace& space) {
  const SpaceParams& p = space.params();
  json j;
  j["generator"] = space.generator().name();
  j["resolution"] = space.resolution();
  j["params"] = {{"A", p.A}, {"C_reg", p.C_reg}, {"d", p.d}, {"theta", p.theta}, {"diam", p.diam}};
  j["grid"] = {space.grid()[0], space.grid()[1]};
  json pts = json::array();
  for (std::size_t i = 0; i < space.size(); ++i) {
    pts.push_back({space.points()[i][0], space.points()[i][1], space.weight(i)});
  }
  j["points"] = std::move(pts);
  return j.dump() + "\n";
}

PointCloudSpace space_from_json(const std::string& text) {
  const json j = parse(text, "space file");
  return guarded("space file", [&] {
    const auto gen = GeneratorSpec::parse(j.at("generator").get<std::string>());
    const json& p = j.at("params");
    SpaceParams params{p.at("A").get<double>(), p.at("C_reg").get<double>(),
                       p.at("d").get<double>(), p.at("theta").get<double>(),
                       p.at("diam").get<double>()};
    std::vector<Point> points;
    std::vector<double> weights;
    for (const json& row : j.at("points")) {
      if (row.size() != 3) throw FormatError("space file: point rows need x1, x2, weight");
      points.push_back({row[0].get<double>(), row[1].get<double>()});
      weights.push_back(row[2].get<double>());
    }
    const std::array<std::size_t, 2> grid = {j.at("grid").at(0).get<std::size_t>(),
                                             j.at("grid").at(1).get<std::size_t>()};
    return PointCloudSpace(gen, j.at("resolution").get<std::size_t>(), std::move(points),
                           std::move(weights), params, grid);
  });
}

// ---- cubes

std::string cubes_to_json(const DyadicSystem& system) {
  json j;
  j["j_min"] = system.j_min();
  j["j_max"] = system.j_max();
  j["base"] = system.base();
  j["separation"] = system.separation_factor();
  j["point_count"] = system.point_count();
  j["r0"] = num(system.r0_measured);
  j["r1"] = num(system.r1_measured);
  json levels = json::array();
  for (int l = system.j_min(); l <= system.j_max(); ++l) {
    json level = json::array();
    for (const Cube& q : system.level(l)) {
      json runs = json::array();
      std::size_t i = 0;
      while (i < q.members.size()) {
        std::size_t len = 1;
        while (i + len < q.members.size() && q.members[i + len] == q.members[i] + len) ++len;
        runs.push_back({q.members[i], len});
        i += len;
      }
      json c;
      c["center"] = q.center;
      c["parent"] = q.parent ? json(*q.parent) : json(nullptr);
      c["members"] = std::move(runs);
      level.push_back(std::move(c));
    }
    levels.push_back(std::move(level));
  }
  j["levels"] = std::move(levels);
  return j.dump() + "\n";
}

DyadicSystem cubes_from_json(const std::string& text) {
  const json j = parse(text, "cubes file");
  return guarded("cubes file", [&] {
    const int j_min = j.at("j_min").get<int>();
    const int j_max = j.at("j_max").get<int>();
    const json& levels = j.at("levels");
    if (levels.size() != std::size_t(j_max - j_min + 1)) {
      throw FormatError("cubes file: level count does not match [j_min, j_max]");
    }
    std::vector<std::vector<Cube>> cubes(levels.size());
    for (std::size_t l = 0; l < levels.size(); ++l) {
      for (std::size_t k = 0; k < levels[l].size(); ++k) {
        const json& c = levels[l][k];
        Cube q;
        q.level = j_min + int(l);
        q.index = k;
        q.center = c.at("center").get<std::size_t>();
        if (!c.at("parent").is_null()) {
          q.parent = c.at("parent").get<std::size_t>();
          if (l == 0 || *q.parent >= cubes[l - 1].size()) {
            throw FormatError("cubes file: parent index out of range");
          }
          cubes[l - 1][*q.parent].children.push_back(k);
        }
        for (const json& run : c.at("members")) {
          const auto start = run.at(0).get<std::size_t>();
          const auto len = run.at(1).get<std::size_t>();
          for (std::size_t i = 0; i < len; ++i) q.members.push_back(start + i);
        }
        cubes[l].push_back(std::move(q));
      }
    }
    DyadicSystem system(j_min, j_max, j.at("base").get<int>(), j.at("separation").get<double>(),
                        std::move(cubes), j.at("point_count").get<std::size_t>());
    system.r0_measured = to_num(j.at("r0"));
    system.r1_measured = to_num(j.at("r1"));
    return system;
  });
}

// ---- frame

std::string frame_header_json(const WaveletFrame& frame) {
  json j;
  j["j_min"] = frame.j_min();
  j["j_max"] = frame.j_max();
  j["base"] = frame.base();
  j["C_phi_target"] = frame.cphi_target();
  j["profile"] = profile_name(frame.profile());
  j["mode"] = frame.mode() == FrameMode::span ? "span" : "complete";
  j["elements"] = frame.element_count();
  j["points"] = frame.point_count();
  j["C_phi"] = num(frame.C_phi);
  j["size_constant"] = num(frame.size_constant);
  j["smoothness_constant"] = num(frame.smoothness_constant);
  j["N_measured"] = frame.N_measured;
  j["multiplicity_per_level"] = frame.multiplicity_per_level;
  j["frame_bounds"] = {{"lower", num(frame.frame_bounds.lower)},
                       {"upper", num(frame.frame_bounds.upper)}};
  j["rank"] = frame.rank;
  return dump(j);
}

FrameOptions frame_options_from_json(const std::string& text) {
  const json j = parse(text, "frame file");
  return guarded("frame file", [&] {
    FrameOptions o;
    o.cphi_target = j.at("C_phi_target").get<double>();
    o.profile = parse_profile(j.at("profile").get<std::string>());
    const auto mode = j.value("mode", std::string("complete"));
    if (mode == "span") {
      o.mode = FrameMode::span;
    } else if (mode != "complete") {
      throw FormatError("frame file: unknown mode '" + mode + "'");
    }
    return o;
  });
}

WaveletFrame frame_from_json(const std::string& text, const DyadicSystem& system,
                             const PointCloudSpace& space) {
  const json j = parse(text, "frame file");
  const FrameOptions o = frame_options_from_json(text);
  const int j_min = guarded("frame file", [&] { return j.at("j_min").get<int>(); });
  const int j_max = guarded("frame file", [&] { return j.at("j_max").get<int>(); });
  if (j_min != system.j_min() || j_max != system.j_max()) {
    throw FormatError("frame file: level range differs from the cubes file");
  }
  return build_frame(system, space, o);
}

std::string frame_phi_csv(const WaveletFrame& frame) {
  std::string out = "element,j,k,point,value\n";
  for (std::size_t e = 0; e < frame.element_count(); ++e) {
    const auto [j, k] = frame.element(e);
    const auto sup = frame.support(e);
    const auto val = frame.values(e);
    const std::string prefix =
        std::to_string(e) + "," + std::to_string(j) + "," + std::to_string(k) + ",";
    for (std::size_t i = 0; i < sup.size(); ++i) {
      out += prefix + std::to_string(sup[i]) + "," + format_double(val[i]) + "\n";
    }
  }
  return out;
}

std::string frame_psi_csv(const WaveletFrame& frame) {
  std::string out = "element,j,k,point,value\n";
  const auto rows = frame.dual_rows();
  for (std::size_t e = 0; e < rows.size(); ++e) {
    const auto [j, k] = frame.element(e);
    const std::string prefix =
        std::to_string(e) + "," + std::to_string(j) + "," + std::to_string(k) + ",";
    for (std::size_t x = 0; x < rows[e].size(); ++x) {
      out += prefix + std::to_string(x) + "," + format_double(rows[e][x]) + "\n";
    }
  }
  return out;
}

// ---- coefficients

std::string coefficients_csv(const CoefficientTable& coeffs) {
  std::string out = "j,k,value\n";
  for (int j = coeffs.j_min(); j <= coeffs.j_max(); ++j) {
    const auto level = coeffs.level(j);
    for (std::size_t k = 0; k < level.size(); ++k) {
      out += std::to_string(j) + "," + std::to_string(k) + "," + format_double(level[k]) + "\n";
    }
  }
  return out;
}

CoefficientTable coefficients_from_csv(const std::string& text, int base) {
  std::istringstream in(text);
  std::string line;
  std::map<int, std::map<std::size_t, double>> rows;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("j,", 0) == 0) continue;
    std::istringstream ls(line);
    std::string a;
    std::string b;
    std::string c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
      throw FormatError("coefficient CSV line " + std::to_string(lineno) + ": need j,k,value");
    }
    int j = 0;
    std::size_t k = 0;
    double v = 0.0;
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), j);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), k);
    const auto rc = std::from_chars(c.data(), c.data() + c.size(), v);
    if (ra.ec != std::errc() || rb.ec != std::errc() || rc.ec != std::errc() ||
        ra.ptr != a.data() + a.size() || rb.ptr != b.data() + b.size() ||
        rc.ptr != c.data() + c.size()) {
      throw FormatError("coefficient CSV line " + std::to_string(lineno) + ": bad number");
    }
    if (!rows[j].emplace(k, v).second) {
      throw FormatError("coefficient CSV line " + std::to_string(lineno) + ": duplicate (j, k)");
    }
  }
  if (rows.empty()) throw FormatError("coefficient CSV holds no entries");
  const int j_min = rows.begin()->first;
  const int j_max = rows.rbegin()->first;
  std::vector<std::vector<double>> levels(std::size_t(j_max - j_min + 1));
  for (const auto& [j, entries] : rows) {
    auto& level = levels[std::size_t(j - j_min)];
    level.assign(entries.rbegin()->first + 1, 0.0);
    for (const auto& [k, v] : entries) level[k] = v;
  }
  return CoefficientTable(j_min, base, std::move(levels));
}

// ---- reports

std::string reports_json(const std::vector<VerificationReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json j;
    j["axiom"] = r.axiom;
    j["estimated_constant"] = num(r.estimated_constant);
    j["worst_witness"] = r.worst_witness;
    j["pass"] = r.pass;
    json extras = json::object();
    for (const auto& [k, v] : r.extras) extras[k] = num(v);
    j["extras"] = std::move(extras);
    arr.push_back(std::move(j));
  }
  return dump(arr);
}

namespace {

json sampling_json(const SamplingReport& r, const std::string& function) {
  json j;
  j["function"] = function;
  j["plan"] = {{"epsilon", num(r.plan.epsilon)}, {"K", num(r.plan.K)},
               {"p", num(r.plan.p)},             {"alpha", num(r.plan.alpha)},
               {"beta", num(r.plan.beta)},       {"kappa", num(r.plan.kappa)},
               {"formula_level", r.plan.formula_level},
               {"level", r.plan.level},          {"clamped", r.plan.clamped}};
  j["lp_f"] = num(r.lp_f);
  j["besov_f"] = num(r.besov_f);
  j["K_f"] = num(r.K_f);
  j["error"] = num(r.error);
  j["discrete_norm"] = num(r.discrete_norm);
  j["pass_error"] = r.pass_error;
  j["pass_sandwich"] = r.pass_sandwich;
  j["status"] = status_name(r.status);
  j["note"] = r.note;
  return j;
}

}  // namespace

std::string sampling_report_json(const SamplingReport& report, const std::string& function) {
  return dump(sampling_json(report, function));
}

std::string calibration_json(const KappaCalibration& c) {
  json j;
  j["found"] = c.found;
  j["grid_index"] = c.grid_index;
  j["kappa"] = num(c.kappa);
  j["binding_function"] = c.binding_function;
  j["binding_epsilon"] = num(c.binding_epsilon);
  j["worst_function"] = c.worst_function;
  j["worst_epsilon"] = num(c.worst_epsilon);
  return dump(j);
}

std::string diagnostics_E_csv(const DiagnosticsRecord& record, int j_min) {
  std::string out = "j,n,E\n";
  for (std::size_t li = 0; li < record.E.size(); ++li) {
    for (std::size_t n = 0; n < record.E[li].size(); ++n) {
      out += std::to_string(j_min + int(li)) + "," + std::to_string(n) + "," +
             format_double(record.E[li][n]) + "\n";
    }
  }
  return out;
}

std::string diagnostics_counts_csv(const CardinalityRecord& record, int j_min) {
  std::string out = "j,k,lambda_count,R_level\n";
  for (std::size_t li = 0; li < record.lambda_counts.size(); ++li) {
    for (std::size_t k = 0; k < record.lambda_counts[li].size(); ++k) {
      out += std::to_string(j_min + int(li)) + "," + std::to_string(k) + "," +
             std::to_string(record.lambda_counts[li][k]) + "," +
             std::to_string(record.R_per_level[li]) + "\n";
    }
  }
  return out;
}

std::string diagnostics_summary_json(const DiagnosticsRecord& record, int j_min) {
  json j;
  j["l"] = record.counts.l;
  j["j_min"] = j_min;
  j["p"] = num(record.p);
  j["epsilon"] = num(record.epsilon);
  j["C_phi"] = num(record.counts.C_phi);
  j["R_measured"] = record.counts.R_measured;
  j["R_per_level"] = record.counts.R_per_level;
  json ratios = json::array();
  for (double v : record.counts.lambda_ratio) ratios.push_back(num(v));
  j["lambda_ratio"] = std::move(ratios);
  j["lambda_coarse_constant"] = num(record.counts.lambda_coarse_constant);
  j["lambda_fine_constant"] = record.counts.lambda_fine_constant;
  j["error"] = num(record.error);
  j["bracket"] = num(record.bracket);
  j["Cp_estimate"] = num(record.Cp_estimate);
  j["j0"] = num(record.j0);
  j["term_I_a"] = num(record.term_I_a);
  j["term_I_b"] = num(record.term_I_b);
  j["term_II"] = num(record.term_II);
  return dump(j);
}

}  // namespace homsamp
