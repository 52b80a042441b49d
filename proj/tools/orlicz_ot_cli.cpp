// Command-line front end: distance solves, curve diagnostics, geodesic
// synthesis. JSON in, JSON or CSV out. Exit codes: 0 success, 1 usage or
// parse or precondition failure, 2 mathematical obstruction (W = +inf).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orlicz_ot/orlicz_ot.hpp"

namespace oot = orlicz_ot;
using oot::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitObstruction = 2;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write to " + out_path);
  out << text;
}

std::string num17(double x) {
  if (oot::is_inf(x)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  return grid;
}

struct DistanceArgs {
  std::string mu_file, nu_file, metric_file, psi_spec, out_path;
  std::string format = "json";
  double tol = 1e-9;
};

int run_distance(const DistanceArgs& a) {
  oot::DiscreteMeasure mu = oot::measure_from_json(oot::load_json_file(a.mu_file));
  oot::DiscreteMeasure nu = oot::measure_from_json(oot::load_json_file(a.nu_file));
  oot::ExtendedMetric D = oot::metric_from_json(oot::load_json_file(a.metric_file));
  oot::YoungFunction psi = oot::psi_from_spec(a.psi_spec);

  oot::WassersteinSolution sol = oot::wasserstein_orlicz(mu, nu, D, psi, a.tol);

  json out;
  out["W"] = oot::encode_real(sol.w);
  if (sol.plan.has_value()) {
    json plan = oot::to_json(*sol.plan);
    out["plan"] = plan["w"];
    out["plan_rows"] = plan["rows"];
    out["plan_cols"] = plan["cols"];
    if (sol.w > 0.0) {
      oot::CertificateReport cert = oot::optimality_certificate(*sol.plan, mu, nu, D, psi, sol.w);
      out["certificate"] = {{"modular_at_w", oot::encode_real(cert.modular_at_w)},
                            {"ok", cert.ok}};
    } else {
      out["certificate"] = {{"modular_at_w", 0.0}, {"ok", true}};
    }
    oot::JensenReport jb = oot::jensen_bound_check(*sol.plan, D, psi, sol.w);
    out["jensen"] = {{"mean_cost", oot::encode_real(jb.mean_cost)},
                     {"bound", oot::encode_real(jb.bound)},
                     {"ok", jb.ok}};
  } else {
    out["plan"] = nullptr;
  }

  if (a.format == "csv") {
    std::string csv = "key,value\nW," + num17(sol.w) + "\n";
    if (sol.plan.has_value()) {
      const oot::Coupling& g = *sol.plan;
      for (std::size_t i = 0; i < g.rows.size(); ++i)
        for (std::size_t j = 0; j < g.cols.size(); ++j)
          if (g.at(i, j) > 0.0)
            csv += "plan_" + std::to_string(g.rows[i]) + "_" + std::to_string(g.cols[j]) + "," +
                   num17(g.at(i, j)) + "\n";
    }
    write_output(csv, a.out_path);
  } else {
    write_output(oot::dump_json(out), a.out_path);
  }
  return sol.plan.has_value() ? kExitOk : kExitObstruction;
}

struct CurveArgs {
  std::string curve_file, metric_file, psi_spec, out_path;
  std::string format = "json";
  double tol = 1e-9;
  bool do_superpose = false, do_reparam = false, do_audit = false;
};

int run_curve(const CurveArgs& a) {
  json cj = oot::load_json_file(a.curve_file);
  oot::MeasureCurve curve = oot::curve_from_json(cj);
  oot::ExtendedMetric D = [&] {
    if (!a.metric_file.empty()) return oot::metric_from_json(oot::load_json_file(a.metric_file));
    if (cj.contains("metric")) return oot::metric_from_json(cj.at("metric"));
    throw std::invalid_argument("no metric: pass --metric or embed a \"metric\" key in the curve file");
  }();
  oot::YoungFunction psi = oot::psi_from_spec(a.psi_spec);

  std::vector<oot::StepSolve> steps = oot::step_distances(curve, D, psi, a.tol);
  for (std::size_t k = 0; k < steps.size(); ++k)
    if (oot::is_inf(steps[k].w)) throw oot::StepObstruction(k);
  std::vector<double> speeds = oot::discrete_speed(curve, steps);
  double energy = oot::ac_energy(curve, steps, psi, a.tol);
  double length = 0.0;
  for (const auto& s : steps) length += s.w;

  json out;
  out["times"] = curve.times;
  json wk = json::array(), sp = json::array();
  for (const auto& s : steps) wk.push_back(oot::encode_real(s.w));
  for (double s : speeds) sp.push_back(oot::encode_real(s));
  out["W"] = wk;
  out["speeds"] = sp;
  out["L"] = oot::encode_real(length);
  out["energy"] = oot::encode_real(energy);

  if (a.do_superpose || a.do_audit) {
    oot::PathMeasure eta = oot::superpose(curve, D, psi, a.tol);
    if (a.do_superpose) out["eta"] = oot::to_json(eta);
    if (a.do_audit) {
      oot::MarginalAudit ma = oot::marginal_audit(eta, curve);
      std::vector<oot::StepEnergyReport> ea = oot::energy_audit(eta, curve, D, psi);
      json esteps = json::array();
      for (const auto& r : ea)
        esteps.push_back({{"eta_norm", oot::encode_real(r.eta_norm)},
                          {"curve_speed", oot::encode_real(r.curve_speed)},
                          {"equal", r.equal},
                          {"one_sided", r.one_sided}});
      out["audits"] = {{"marginal", {{"max_deviation", ma.max_deviation}, {"ok", ma.ok}}},
                       {"energy", esteps}};
    }
  }
  if (a.do_reparam) {
    oot::Reparametrization rp = oot::arc_length_reparametrize(curve, D, psi, a.tol);
    json r;
    r["degenerate"] = rp.degenerate;
    r["s_map"] = rp.s_map;
    r["curve"] = oot::to_json(rp.curve);
    if (!rp.degenerate) {
      json rs = json::array();
      for (double s : oot::discrete_speed(rp.curve, D, psi, a.tol)) rs.push_back(oot::encode_real(s));
      r["speeds"] = rs;
    }
    out["reparam"] = r;
  }

  if (a.format == "csv") {
    std::string csv = "step,t_lo,t_hi,W,speed\n";
    for (std::size_t k = 0; k < steps.size(); ++k)
      csv += std::to_string(k) + "," + num17(curve.times[k]) + "," + num17(curve.times[k + 1]) +
             "," + num17(steps[k].w) + "," + num17(speeds[k]) + "\n";
    write_output(csv, a.out_path);
  } else {
    write_output(oot::dump_json(out), a.out_path);
  }
  return kExitOk;
}

struct GeodesicArgs {
  std::string mu0_file, mu1_file, cloud_file, psi_spec, out_path;
  std::string grid_spec = "0,0.5,1";
  std::string format = "json";
  double tol = 1e-9;
  bool do_check = false, do_concentration = false;
};

int run_geodesic(const GeodesicArgs& a) {
  oot::DiscreteMeasure mu0 = oot::measure_from_json(oot::load_json_file(a.mu0_file));
  oot::DiscreteMeasure mu1 = oot::measure_from_json(oot::load_json_file(a.mu1_file));
  oot::ExtendedMetric D = oot::metric_from_json(oot::load_json_file(a.cloud_file));
  if (!D.has_oracle())
    throw std::invalid_argument(
        "geodesic synthesis needs an interpolation oracle: supply a point cloud "
        "(\"points\"), not a raw distance matrix");
  oot::YoungFunction psi = oot::psi_from_spec(a.psi_spec);
  std::vector<double> grid = parse_grid(a.grid_spec);

  oot::Synthesis syn = oot::synthesize(mu0, mu1, D, psi, grid, a.tol);

  json out;
  out["w01"] = oot::encode_real(syn.w01);
  out["space"] = oot::to_json(syn.space);
  out["curve"] = oot::to_json(syn.curve);
  out["eta"] = oot::to_json(syn.eta);
  out["plan"] = oot::to_json(syn.plan);

  std::string csv;
  if (a.do_check) {
    oot::ConstantSpeedReport cs = oot::constant_speed_check(syn.curve, syn.space, psi, 1e-6, a.tol);
    json pairs = json::array();
    csv = "j,k,t_j,t_k,W,expected,deviation\n";
    for (const auto& e : cs.pairs) {
      pairs.push_back({{"j", e.j},
                       {"k", e.k},
                       {"W", oot::encode_real(e.w)},
                       {"expected", oot::encode_real(e.expected)},
                       {"deviation", oot::encode_real(e.deviation)}});
      csv += std::to_string(e.j) + "," + std::to_string(e.k) + "," + num17(syn.curve.times[e.j]) +
             "," + num17(syn.curve.times[e.k]) + "," + num17(e.w) + "," + num17(e.expected) + "," +
             num17(e.deviation) + "\n";
    }
    out["constant_speed"] = {{"ok", cs.ok},
                             {"w01", oot::encode_real(cs.w01)},
                             {"worst_deviation", cs.worst_deviation},
                             {"worst_pair", {cs.worst_pair[0], cs.worst_pair[1]}},
                             {"pairs", pairs}};

    oot::PairOptimalityReport po =
        oot::intermediate_plan_optimality(syn.eta, syn.curve, syn.space, psi, 1e-6, a.tol);
    json ppairs = json::array();
    for (const auto& e : po.pairs)
      ppairs.push_back({{"j", e.j},
                        {"k", e.k},
                        {"W", oot::encode_real(e.w)},
                        {"modular", oot::encode_real(e.modular)}});
    out["intermediate_optimality"] = {{"ok", po.ok},
                                      {"worst_modular", oot::encode_real(po.worst_modular)},
                                      {"worst_pair", {po.worst_pair[0], po.worst_pair[1]}},
                                      {"pairs", ppairs}};
  }
  if (a.do_concentration) {
    oot::ConcentrationReport cr = oot::concentration_check(syn.eta, syn.space, psi, 1e-6, 1e-8, a.tol);
    json c = {{"hypothesis_met", cr.hypothesis_met},
              {"endpoint_modular", oot::encode_real(cr.endpoint_modular)},
              {"W", oot::encode_real(cr.w)},
              {"ok", cr.ok},
              {"violating_paths", cr.violating_paths}};
    if (!cr.note.empty()) c["note"] = cr.note;
    out["concentration"] = c;
  }

  if (a.format == "csv") {
    if (csv.empty()) csv = "j,k,t_j,t_k,W,expected,deviation\n";  // table requires --check
    write_output(csv, a.out_path);
  } else {
    write_output(oot::dump_json(out), a.out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"psi-Wasserstein-Orlicz transport toolkit"};
  app.require_subcommand(1);

  DistanceArgs da;
  CLI::App* dist = app.add_subcommand("distance", "W(mu, nu) with plan and certificates");
  dist->add_option("--mu", da.mu_file, "first measure (JSON)")->required();
  dist->add_option("--nu", da.nu_file, "second measure (JSON)")->required();
  dist->add_option("--metric", da.metric_file, "metric space (JSON)")->required();
  dist->add_option("--psi", da.psi_spec, "Young function (shorthand, inline JSON, or file)")->required();
  dist->add_option("--tol", da.tol, "relative solver tolerance");
  dist->add_option("--out", da.out_path, "output path (default stdout)");
  dist->add_option("--format", da.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CurveArgs ca;
  CLI::App* curve = app.add_subcommand("curve", "speeds, energy, superposition, reparametrization");
  curve->add_option("--curve", ca.curve_file, "curve file (JSON)")->required();
  curve->add_option("--metric", ca.metric_file, "metric space (JSON; else the curve file's \"metric\")");
  curve->add_option("--psi", ca.psi_spec, "Young function")->required();
  curve->add_option("--tol", ca.tol, "relative solver tolerance");
  curve->add_flag("--superpose", ca.do_superpose, "emit the glued path measure");
  curve->add_flag("--reparam", ca.do_reparam, "emit the arc-length reparametrization");
  curve->add_flag("--audit", ca.do_audit, "run marginal and energy audits");
  curve->add_option("--out", ca.out_path, "output path (default stdout)");
  curve->add_option("--format", ca.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  GeodesicArgs ga;
  CLI::App* geo = app.add_subcommand("geodesic", "synthesize a constant-speed geodesic");
  geo->add_option("--mu0", ga.mu0_file, "left endpoint measure (JSON)")->required();
  geo->add_option("--mu1", ga.mu1_file, "right endpoint measure (JSON)")->required();
  geo->add_option("--cloud", ga.cloud_file, "point cloud metric (JSON with \"points\")")->required();
  geo->add_option("--psi", ga.psi_spec, "Young function")->required();
  geo->add_option("--grid", ga.grid_spec, "comma-separated times from 0 to 1");
  geo->add_option("--tol", ga.tol, "relative solver tolerance");
  geo->add_flag("--check", ga.do_check, "verify constant speed and intermediate optimality");
  geo->add_flag("--concentration", ga.do_concentration, "run the concentration check");
  geo->add_option("--out", ga.out_path, "output path (default stdout)");
  geo->add_option("--format", ga.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (dist->parsed()) return run_distance(da);
    if (curve->parsed()) return run_curve(ca);
    if (geo->parsed()) return run_geodesic(ga);
  } catch (const orlicz_ot::ObstructionError& e) {
    std::cerr << "obstruction: " << e.what() << "\n";
    return kExitObstruction;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
