#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rnds/atlas.hpp"
#include "rnds/charts.hpp"
#include "rnds/diagram.hpp"
#include "rnds/errors.hpp"
#include "rnds/geodesics.hpp"
#include "rnds/horizons.hpp"
#include "rnds/io.hpp"
#include "rnds/tortoise.hpp"

namespace {

using namespace rnds;

constexpr int kOk = 0;
constexpr int kDomain = 2;
constexpr int kNumerical = 3;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DomainError("cannot open '" + path + "' for writing");
  os << content;
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ChartKind parse_kind(const std::string& s) {
  for (ChartKind k : {ChartKind::RNdS, ChartKind::EFRetarded, ChartKind::EFAdvanced,
                      ChartKind::DoubleNull, ChartKind::Kruskal}) {
    if (to_string(k) == s) return k;
  }
  throw DomainError("unknown chart '" + s + "' (rnds, ef_retarded, ef_advanced, double_null, kruskal)");
}

TortoiseMap three_horizon_map(const BlackHoleParams& p) {
  if (!p.satisfies_standing_assumptions()) {
    throw DomainError("parameters violate M > 0, L > 0, Q != 0\n" + classify_text(p));
  }
  const HorizonStructure s = classify_horizons(p);
  if (!s.three_horizons()) {
    throw DomainError("command needs three horizons\n" + classify_text(p));
  }
  return build_tortoise(s, p);
}

std::string label_of(const ChartPoint& p, const TortoiseMap& map) {
  if (p.kind == ChartKind::Kruskal) {
    KruskalChart k(map, p.index);
    auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
    if (p.log_coords) return label(locate(k, (*p.log_coords)[0].sign, (*p.log_coords)[1].sign));
    return label(locate(k, sign(p.coords[0]), sign(p.coords[1])));
  }
  try {
    const ChartPoint q = to_rnds(p, map);
    return region_label(RegionId{q.index}, q.primed);
  } catch (const SingularChartError&) {
    return "horizon";
  }
}

struct ConvertArgs {
  std::string from = "rnds";
  std::string to = "kruskal";
  int index = 3;
  bool primed = false;
  std::vector<double> coords;
  int chart = 0;
  double theta = M_PI / 2.0;
  double phi = 0.0;
};

int run_convert(const RunConfig& cfg, const ConvertArgs& a) {
  const TortoiseMap map = three_horizon_map(cfg.params);
  if (a.coords.size() != 2) throw DomainError("--coords needs two numbers");
  ChartPoint p;
  p.kind = parse_kind(a.from);
  p.index = a.index;
  p.primed = a.primed;
  p.coords = {a.coords[0], a.coords[1]};
  p.omega = {a.theta, a.phi};
  const ChartKind target = parse_kind(a.to);

  ChartPoint out;
  try {
    switch (target) {
      case ChartKind::RNdS:
        out = to_rnds(p, map);
        break;
      case ChartKind::EFRetarded:
      case ChartKind::EFAdvanced:
      case ChartKind::DoubleNull: {
        const ChartPoint q = p.kind == ChartKind::RNdS ? p : to_rnds(p, map);
        out = target == ChartKind::EFRetarded  ? to_ef_retarded(q, map)
              : target == ChartKind::EFAdvanced ? to_ef_advanced(q, map)
                                                : to_double_null(q, map);
        break;
      }
      case ChartKind::Kruskal: {
        ChartPoint q = p;
        if (p.kind == ChartKind::Kruskal) q = to_rnds(p, map);
        int chart = a.chart;
        if (chart == 0) chart = std::min(q.index, 3);
        out = to_kruskal(q, KruskalChart(map, chart));
        break;
      }
    }
  } catch (const SingularChartError& e) {
    throw DomainError(std::string(e.what()) +
                      "; points on a horizon are only representable in a Kruskal chart");
  }
  const double r = radius_of(out, map);
  const std::string lbl = label_of(out, map);
  if (cfg.format == "text") {
    std::ostringstream os;
    os << to_string(out.kind) << ':' << out.index << (out.primed ? "'" : "") << " ("
       << format_shortest(out.coords[0]) << ", " << format_shortest(out.coords[1]) << ") r = "
       << format_shortest(r) << " " << lbl << "\n";
    write_output(cfg.out, os.str());
  } else {
    write_output(cfg.out, conversion_json(p, out, r, lbl));
  }
  return kOk;
}

struct GeodesicArgs {
  std::string kind = "null";
  int region = 3;
  bool primed = false;
  double t = 0.0;
  double r = 0.0;
  std::string family = "yminus";
  int direction = 1;
  double t_dot = 0.0;
  double r_dot = 0.0;
  int sense = 1;
  int horizon = 1;
  double u0 = 0.0;
  std::size_t samples = 200;
};

void emit_trajectory(const RunConfig& cfg, const GeodesicTrajectory& traj) {
  if (!cfg.out.empty() && cfg.out != "-") {
    write_output(cfg.out + ".csv", trajectory_csv(traj));
    write_output(cfg.out + ".events.json", events_json(traj));
  } else if (cfg.format == "csv") {
    write_output("", trajectory_csv(traj));
  } else {
    write_output("", events_json(traj));
  }
}

int run_geodesic(const RunConfig& cfg, const GeodesicArgs& a) {
  const TortoiseMap map = three_horizon_map(cfg.params);
  IntegrationOptions opt;
  opt.tol_rel = cfg.tol_rel;
  opt.tol_abs = cfg.tol_abs;
  opt.tau_max = cfg.budget.value_or(100.0);
  const ChartPoint start{ChartKind::RNdS, a.region, a.primed, {a.t, a.r}, {}, std::nullopt};

  GeodesicTrajectory traj;
  try {
    if (a.kind == "null") {
      if (a.family != "yminus" && a.family != "yplus") {
        throw DomainError("--family is yminus or yplus");
      }
      traj = radial_null_trace(map, start,
                               a.family == "yminus" ? NullFamily::Yminus : NullFamily::Yplus,
                               a.direction, opt, a.samples);
    } else if (a.kind == "timelike") {
      traj = radial_timelike_trace(map, start, a.t_dot, a.r_dot, opt);
    } else if (a.kind == "photon") {
      traj = a.r > 0.0 ? photon_orbit_at(map, a.r, a.sense, opt.tau_max, a.samples)
                       : photon_orbit(map, a.sense, opt.tau_max, a.samples);
    } else if (a.kind == "generator") {
      traj = horizon_generator(map, a.horizon, a.u0, opt.tau_max, a.samples);
    } else {
      throw DomainError("unknown geodesic kind '" + a.kind +
                        "' (null, timelike, photon, generator)");
    }
  } catch (const IntegrationError& e) {
    const GeodesicTrajectory& part = e.partial();
    std::cerr << "integration failed: " << e.what() << "\n";
    if (!part.samples.empty()) {
      const GeodesicState& s = part.samples.back();
      std::cerr << "last good state: tau = " << format_shortest(s.tau)
                << ", chart = " << to_string(s.point.kind) << ':' << s.point.index
                << ", coords = (" << format_shortest(s.point.coords[0]) << ", "
                << format_shortest(s.point.coords[1]) << "), r = " << format_shortest(s.r)
                << "\n";
    }
    emit_trajectory(cfg, part);
    return kNumerical;
  }
  emit_trajectory(cfg, traj);
  std::cerr << "termination: " << to_string(traj.termination) << " (" << traj.samples.size()
            << " samples, " << traj.events.size() << " events)\n";
  return kOk;
}

struct DiagramArgs {
  std::vector<std::string> null_rays;
};

NullOverlay parse_ray(const std::string& text) {
  // X:Y:x holds X, X:Y:y holds Y; X and Y in units of π.
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 || (parts[2] != "x" && parts[2] != "y")) {
    throw DomainError("--null-ray expects X:Y:x or X:Y:y (X, Y in units of pi)");
  }
  try {
    const double X = std::stod(parts[0]) * M_PI;
    const double Y = std::stod(parts[1]) * M_PI;
    return {GlobalPoint::from_lattice(X, Y), parts[2] == "x"};
  } catch (const std::logic_error&) {
    throw DomainError("--null-ray coordinates are not numbers: " + text);
  }
}

int run_diagram(const RunConfig& cfg, const DiagramArgs& a) {
  const TortoiseMap map = three_horizon_map(cfg.params);
  const Atlas atlas(map);
  DiagramOptions o;
  o.m_min = cfg.window[0];
  o.m_max = cfg.window[1];
  o.n_min = cfg.window[2];
  o.n_max = cfg.window[3];
  o.radii = cfg.radii;
  o.times = cfg.times;
  o.photon_sphere = cfg.photon_sphere;
  o.samples = cfg.samples;
  for (const std::string& s : a.null_rays) o.null_overlays.push_back(parse_ray(s));
  const DiagramDataset data = diagram_dataset(atlas, o);
  if (!cfg.out.empty() && cfg.out != "-") {
    write_output(cfg.out + ".svg", dataset_svg(data));
    write_output(cfg.out + ".csv", dataset_csv(data));
    write_output(cfg.out + ".json", dataset_manifest_json(data, cfg.params));
  } else if (cfg.format == "svg") {
    write_output("", dataset_svg(data));
  } else if (cfg.format == "csv") {
    write_output("", dataset_csv(data));
  } else {
    write_output("", dataset_manifest_json(data, cfg.params));
  }
  std::cerr << data.blocks.size() << " blocks, " << data.polylines.size() << " polylines\n";
  return kOk;
}

int run_scan(const RunConfig& cfg) {
  const auto count = static_cast<std::size_t>(std::llround(cfg.budget.value_or(10000.0)));
  const std::vector<ScanRow> rows = scan_parameters(count, cfg.seed);
  std::size_t gc = 0;
  std::size_t mismatches = 0;
  std::size_t degenerate = 0;
  for (const ScanRow& r : rows) {
    gc += r.gc ? 1 : 0;
    if (r.degenerate) {
      ++degenerate;
    } else if (r.gc != (r.classification == HorizonClass::ThreeHorizons)) {
      ++mismatches;
    }
  }
  write_output(cfg.out, cfg.format == "csv" ? scan_csv(rows) : scan_json(rows));
  std::cerr << rows.size() << " samples, " << gc << " satisfy GC, " << degenerate
            << " degenerate, " << mismatches << " disagreements\n";
  return mismatches == 0 ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reissner-Nordstrom-de Sitter horizons, charts, geodesics and atlas"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flags;
  std::string config_path;
  auto* o_m = app.add_option("-M,--mass", flags.params.mass, "mass M");
  auto* o_q = app.add_option("-Q,--charge", flags.params.charge, "charge Q");
  auto* o_l = app.add_option("-L,--lambda", flags.params.lambda, "cosmological constant");
  auto* o_fmt = app.add_option("--format", flags.format, "json, csv, svg or text");
  auto* o_out = app.add_option("--out", flags.out, "output path (prefix for multi-file output)");
  auto* o_rel = app.add_option("--tol-rel", flags.tol_rel, "relative integrator tolerance");
  auto* o_abs = app.add_option("--tol-abs", flags.tol_abs, "absolute integrator tolerance");
  auto* o_seed = app.add_option("--seed", flags.seed, "RNG seed");
  double budget = 0.0;
  auto* o_budget = app.add_option("--budget", budget,
                                  "affine-parameter budget (geodesic) or sample count (scan)");
  app.add_option("--config", config_path, "JSON config file (flags take precedence)");

  auto* classify = app.add_subcommand("classify", "horizon structure and photon sphere");

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "re-express a point in another chart");
  convert->add_option("--from", conv.from, "source chart")->capture_default_str();
  convert->add_option("--to", conv.to, "target chart")->capture_default_str();
  convert->add_option("--index", conv.index, "region (rnds, ef, double_null) or Kruskal chart");
  convert->add_flag("--primed", conv.primed, "time-reversed orientation");
  convert->add_option("--coords", conv.coords, "two coordinates")->expected(2)->required();
  convert->add_option("--chart", conv.chart, "target Kruskal chart (default from region)");
  convert->add_option("--theta", conv.theta);
  convert->add_option("--phi", conv.phi);

  GeodesicArgs geo;
  auto* geodesic = app.add_subcommand("geodesic", "integrate a radial or circular geodesic");
  geodesic->add_option("--kind", geo.kind, "null, timelike, photon or generator")
      ->capture_default_str();
  geodesic->add_option("--region", geo.region, "start region 1-4");
  geodesic->add_flag("--primed", geo.primed);
  geodesic->add_option("-t,--t", geo.t, "start t");
  geodesic->add_option("-r,--r", geo.r, "start r (photon: orbit radius)");
  geodesic->add_option("--family", geo.family, "yminus or yplus");
  geodesic->add_option("--direction", geo.direction, "+1 or -1");
  geodesic->add_option("--t-dot", geo.t_dot);
  geodesic->add_option("--r-dot", geo.r_dot);
  geodesic->add_option("--sense", geo.sense, "photon orbit sense");
  geodesic->add_option("--horizon", geo.horizon, "generator horizon index");
  geodesic->add_option("--u0", geo.u0, "generator start coordinate");
  geodesic->add_option("--samples", geo.samples, "samples for closed-form traces");

  DiagramArgs diag;
  int samples = 0;
  std::vector<int> window;
  std::vector<double> radii;
  std::vector<double> times;
  bool no_photon = false;
  auto* diagram = app.add_subcommand("diagram", "Penrose-type diagram of the extension");
  auto* o_window = diagram->add_option("--window", window, "m_min m_max n_min n_max")->expected(4);
  auto* o_radii = diagram->add_option("--radii", radii, "constant-r contours");
  auto* o_times = diagram->add_option("--times", times, "constant-t contours");
  auto* o_samples = diagram->add_option("--samples", samples, "vertices per curve");
  auto* o_nophoton = diagram->add_flag("--no-photon-sphere", no_photon);
  diagram->add_option("--null-ray", diag.null_rays, "X:Y:x or X:Y:y, X and Y in units of pi");

  auto* scan = app.add_subcommand("scan", "random sweep comparing GC with the root count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_json(cfg, read_file(config_path));
    if (o_m->count()) cfg.params.mass = flags.params.mass;
    if (o_q->count()) cfg.params.charge = flags.params.charge;
    if (o_l->count()) cfg.params.lambda = flags.params.lambda;
    if (o_fmt->count()) cfg.format = flags.format;
    if (o_out->count()) cfg.out = flags.out;
    if (o_rel->count()) cfg.tol_rel = flags.tol_rel;
    if (o_abs->count()) cfg.tol_abs = flags.tol_abs;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_budget->count()) cfg.budget = budget;
    if (o_window->count()) cfg.window = {window[0], window[1], window[2], window[3]};
    if (o_radii->count()) cfg.radii = radii;
    if (o_times->count()) cfg.times = times;
    if (o_samples->count()) cfg.samples = samples;
    if (o_nophoton->count()) cfg.photon_sphere = false;
    if (cfg.format.empty()) cfg.format = *classify ? "text" : *diagram ? "svg" : "json";
    validate(cfg);

    if (*classify) {
      const BlackHoleParams& p = cfg.params;
      if (!p.satisfies_standing_assumptions()) {
        std::cerr << classify_text(p);
        throw DomainError("parameters violate M > 0, L > 0, Q != 0");
      }
      write_output(cfg.out, cfg.format == "json" ? classify_json(p) : classify_text(p));
      return kOk;
    }
    if (*convert) return run_convert(cfg, conv);
    if (*geodesic) return run_geodesic(cfg, geo);
    if (*diagram) return run_diagram(cfg, diag);
    if (*scan) return run_scan(cfg);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
