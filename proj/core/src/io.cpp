#include "rnds/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rnds/tortoise.hpp"

namespace rnds {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

template <class T>
T get_as(const json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw DomainError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void apply_config_json(RunConfig& c, std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw DomainError("config file must hold a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "M") {
      c.params.mass = get_as<double>(v, key);
    } else if (key == "Q") {
      c.params.charge = get_as<double>(v, key);
    } else if (key == "L") {
      c.params.lambda = get_as<double>(v, key);
    } else if (key == "format") {
      c.format = get_as<std::string>(v, key);
    } else if (key == "out") {
      c.out = get_as<std::string>(v, key);
    } else if (key == "tol_rel") {
      c.tol_rel = get_as<double>(v, key);
    } else if (key == "tol_abs") {
      c.tol_abs = get_as<double>(v, key);
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(v, key);
    } else if (key == "budget") {
      c.budget = get_as<double>(v, key);
    } else if (key == "samples") {
      c.samples = get_as<int>(v, key);
    } else if (key == "window") {
      const auto w = get_as<std::vector<int>>(v, key);
      if (w.size() != 4) throw DomainError("config key 'window' needs four integers");
      c.window = {w[0], w[1], w[2], w[3]};
    } else if (key == "radii") {
      c.radii = get_as<std::vector<double>>(v, key);
    } else if (key == "times") {
      c.times = get_as<std::vector<double>>(v, key);
    } else if (key == "photon_sphere") {
      c.photon_sphere = get_as<bool>(v, key);
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& c) {
  if (!(c.tol_rel > 0.0) || !(c.tol_abs > 0.0)) throw DomainError("tolerances must be positive");
  if (c.budget && !(*c.budget > 0.0)) throw DomainError("budget must be positive");
  if (c.samples < 2) throw DomainError("samples must be at least 2");
  if (!c.format.empty() && c.format != "json" && c.format != "csv" && c.format != "svg" && c.format != "text") {
    throw DomainError("unknown format '" + c.format + "' (json, csv, svg, text)");
  }
}

std::string format_shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_svg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

json classify_record(const BlackHoleParams& p) {
  json out;
  out["params"] = {{"M", p.mass}, {"Q", p.charge}, {"L", p.lambda}};
  const GcReport gc = check_gc_conditions(p);
  out["gc"] = {{"charge_nonzero", gc.charge_nonzero},
               {"lambda_in_range", gc.lambda_in_range},
               {"mass_in_range", gc.mass_in_range},
               {"degenerate", gc.degenerate},
               {"holds", gc.holds}};
  const HorizonStructure s = classify_horizons(p);
  out["classification"] = std::string(to_string(s.classification));
  if (p.satisfies_standing_assumptions()) {
    const DerivedThresholds t = derived_thresholds(p);
    out["thresholds"] = {{"R", number(t.critical_radius)},
                         {"discriminant", number(t.discriminant)},
                         {"m1", optional_number(t.m1)},
                         {"m2", optional_number(t.m2)},
                         {"M1", optional_number(t.mass_lower)},
                         {"M2", optional_number(t.mass_upper)}};
  }
  json roots = json::array();
  for (const PolynomialRoot& r : s.positive_roots) {
    roots.push_back({{"r", r.value},
                     {"multiplicity", r.multiplicity},
                     {"residual", horizon_polynomial(p, r.value)}});
  }
  out["positive_roots"] = roots;
  out["negative_root"] = optional_number(s.negative_root);
  out["photon_inner"] = optional_number(s.photon_inner);
  out["photon_outer"] = optional_number(s.photon_outer);
  if (s.three_horizons()) {
    const TortoiseMap m = build_tortoise(s, p);
    json a = json::array();
    for (int i = 0; i < 4; ++i) a.push_back(m.coefficient(i));
    out["tortoise"] = {{"coefficients", a}, {"a", m.a()}, {"b", m.b()}};
    const PhotonSphere ph = photon_sphere(p, s);
    out["photon_sphere"] = ph.radius;
  }
  return out;
}

}  // namespace

std::string classify_json(const BlackHoleParams& params) {
  return classify_record(params).dump(2) + "\n";
}

std::string classify_text(const BlackHoleParams& p) {
  const json rec = classify_record(p);
  std::ostringstream os;
  os << "M = " << format_shortest(p.mass) << ", Q = " << format_shortest(p.charge)
     << ", L = " << format_shortest(p.lambda) << "\n";
  os << "classification: " << rec["classification"].get<std::string>() << "\n";
  os << "GC conditions: " << (rec["gc"]["holds"].get<bool>() ? "hold" : "fail")
     << (rec["gc"]["degenerate"].get<bool>() ? " (degenerate)" : "") << "\n";
  if (rec.contains("thresholds")) {
    for (const char* k : {"R", "discriminant", "m1", "m2", "M1", "M2"}) {
      const json& v = rec["thresholds"][k];
      os << "  " << k << " = " << (v.is_number() ? format_shortest(v.get<double>()) : "-")
         << "\n";
    }
  }
  os << "positive roots:";
  for (const json& r : rec["positive_roots"]) os << " " << format_shortest(r["r"].get<double>());
  os << "\n";
  for (const char* k : {"photon_inner", "photon_outer"}) {
    const json& v = rec[k];
    os << k << ": " << (v.is_number() ? format_shortest(v.get<double>()) : "-") << "\n";
  }
  if (rec.contains("photon_sphere")) {
    os << "photon sphere: r = " << format_shortest(rec["photon_sphere"].get<double>()) << "\n";
  }
  return os.str();
}

namespace {

json point_record(const ChartPoint& p) {
  json out = {{"chart", std::string(to_string(p.kind))},
              {"index", p.index},
              {"primed", p.primed},
              {"coords", {number(p.coords[0]), number(p.coords[1])}},
              {"theta", p.omega.theta},
              {"phi", p.omega.phi}};
  if (p.log_coords) {
    json logs = json::array();
    for (const SignedLog& s : *p.log_coords) logs.push_back({{"sign", s.sign}, {"log_abs", s.log_abs}});
    out["log_coords"] = logs;
  }
  return out;
}

}  // namespace

std::string chart_point_json(const ChartPoint& p) { return point_record(p).dump(2) + "\n"; }

std::string conversion_json(const ChartPoint& from, const ChartPoint& to, double r,
                            const std::string& label) {
  json out = {{"from", point_record(from)}, {"to", point_record(to)}, {"r", r}, {"label", label}};
  return out.dump(2) + "\n";
}

std::string trajectory_csv(const GeodesicTrajectory& traj) {
  std::ostringstream os;
  os << "tau,chart,index,primed,c0,c1,v0,v1,r,r_dot,energy,killing,energy_residual,"
        "killing_residual\n";
  for (const GeodesicState& s : traj.samples) {
    os << format_shortest(s.tau) << ',' << to_string(s.point.kind) << ',' << s.point.index << ','
       << (s.point.primed ? 1 : 0) << ',' << format_shortest(s.point.coords[0]) << ','
       << format_shortest(s.point.coords[1]) << ',' << format_shortest(s.velocity[0]) << ','
       << format_shortest(s.velocity[1]) << ',' << format_shortest(s.r) << ','
       << format_shortest(s.r_dot) << ',' << format_shortest(s.energy) << ','
       << format_shortest(s.killing) << ',' << format_shortest(s.energy - traj.energy) << ','
       << format_shortest(s.killing - traj.killing) << '\n';
  }
  return os.str();
}

std::string events_json(const GeodesicTrajectory& traj) {
  json events = json::array();
  for (const GeodesicEvent& e : traj.events) {
    events.push_back({{"kind", std::string(to_string(e.kind))},
                      {"tau", number(e.tau)},
                      {"r", number(e.r)},
                      {"label", e.label}});
  }
  json out = {{"kind", traj.kind},
              {"termination", std::string(to_string(traj.termination))},
              {"energy", number(traj.energy)},
              {"killing", number(traj.killing)},
              {"samples", traj.samples.size()},
              {"events", events}};
  return out.dump(2) + "\n";
}

std::string dataset_csv(const DiagramDataset& data) {
  std::ostringstream os;
  os << "layer,polyline,x,y,r\n";
  for (std::size_t i = 0; i < data.polylines.size(); ++i) {
    const Polyline& p = data.polylines[i];
    for (const DiagramVertex& v : p.vertices) {
      os << p.layer << ',' << i << ',' << format_shortest(v.x) << ',' << format_shortest(v.y)
         << ',' << format_shortest(v.r) << '\n';
    }
  }
  return os.str();
}

std::string dataset_manifest_json(const DiagramDataset& data, const BlackHoleParams& params) {
  std::map<std::string, std::size_t> counts;
  json lines = json::array();
  for (std::size_t i = 0; i < data.polylines.size(); ++i) {
    const Polyline& p = data.polylines[i];
    ++counts[p.layer];
    lines.push_back({{"id", i},
                     {"layer", p.layer},
                     {"label", p.label},
                     {"value", number(p.value)},
                     {"closed", p.closed},
                     {"vertices", p.vertices.size()}});
  }
  json blocks = json::array();
  for (const BlockId& b : data.blocks) blocks.push_back(b.name());
  const DiagramOptions& o = data.options;
  json out = {{"params", {{"M", params.mass}, {"Q", params.charge}, {"L", params.lambda}}},
              {"window", {o.m_min, o.m_max, o.n_min, o.n_max}},
              {"bounds", {data.x_min, data.x_max, data.y_min, data.y_max}},
              {"blocks", blocks},
              {"layers", counts},
              {"polylines", lines}};
  return out.dump(2) + "\n";
}

std::string dataset_svg(const DiagramDataset& data) {
  const double width = 800.0;
  const double s = width / (data.x_max - data.x_min);
  const double height = (data.y_max - data.y_min) * s;
  auto px = [&](double x) { return format_svg((x - data.x_min) * s); };
  auto py = [&](double y) { return format_svg((data.y_max - y) * s); };

  static const std::pair<const char*, const char*> kStyles[] = {
      {"block", "fill=\"#d9d9d9\" stroke=\"none\""},
      {"singularity", "fill=\"none\" stroke=\"#000000\" stroke-width=\"2\" stroke-dasharray=\"6 3\""},
      {"scri", "fill=\"none\" stroke=\"#1f4e9e\" stroke-width=\"2\""},
      {"horizon", "fill=\"none\" stroke=\"#b22222\" stroke-width=\"1.5\""},
      {"r_contour", "fill=\"none\" stroke=\"#777777\" stroke-width=\"0.8\""},
      {"t_contour", "fill=\"none\" stroke=\"#999999\" stroke-width=\"0.6\" stroke-dasharray=\"2 2\""},
      {"photon_sphere", "fill=\"none\" stroke=\"#e69500\" stroke-width=\"1.2\""},
      {"geodesic", "fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"1.5\""}};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_svg(width)
     << "\" height=\"" << format_svg(height) << "\" viewBox=\"0 0 " << format_svg(width) << ' '
     << format_svg(height) << "\">\n";
  for (const auto& [layer, style] : kStyles) {
    os << "  <g id=\"" << layer << "\" " << style << ">\n";
    for (const Polyline& p : data.polylines) {
      if (p.layer != layer) continue;
      os << "    <" << (p.closed ? "polygon" : "polyline") << " data-label=\"" << p.label
         << "\" points=\"";
      for (std::size_t j = 0; j < p.vertices.size(); ++j) {
        if (j) os << ' ';
        os << px(p.vertices[j].x) << ',' << py(p.vertices[j].y);
      }
      os << "\"/>\n";
    }
    os << "  </g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<ScanRow> scan_parameters(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ScanRow> rows;
  rows.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    BlackHoleParams p;
    p.charge = 2.0 * (1.0 - unit(rng));
    p.lambda = (1.0 - unit(rng)) / (8.0 * p.charge * p.charge);
    const DerivedThresholds t = derived_thresholds(p);
    if (t.mass_lower && t.mass_upper) {
      const double lo = 0.8 * *t.mass_lower;
      const double hi = 1.2 * *t.mass_upper;
      p.mass = lo + (hi - lo) * unit(rng);
    } else {
      p.mass = 3.0 * p.charge * (1.0 - unit(rng));
    }
    ScanRow row;
    row.params = p;
    const GcReport gc = check_gc_conditions(p);
    row.gc = gc.holds;
    row.degenerate = gc.degenerate;
    const HorizonStructure s = classify_horizons(p);
    row.classification = s.classification;
    for (const PolynomialRoot& r : s.positive_roots) row.positive_roots += r.multiplicity;
    rows.push_back(row);
  }
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "M,Q,L,gc,degenerate,classification,positive_roots\n";
  for (const ScanRow& r : rows) {
    os << format_shortest(r.params.mass) << ',' << format_shortest(r.params.charge) << ','
       << format_shortest(r.params.lambda) << ',' << (r.gc ? 1 : 0) << ','
       << (r.degenerate ? 1 : 0) << ',' << to_string(r.classification) << ','
       << r.positive_roots << '\n';
  }
  return os.str();
}

std::string scan_json(const std::vector<ScanRow>& rows) {
  json out = json::array();
  for (const ScanRow& r : rows) {
    out.push_back({{"M", r.params.mass},
                   {"Q", r.params.charge},
                   {"L", r.params.lambda},
                   {"gc", r.gc},
                   {"degenerate", r.degenerate},
                   {"classification", std::string(to_string(r.classification))},
                   {"positive_roots", r.positive_roots}});
  }
  return out.dump(2) + "\n";
}

}  // namespace rnds
