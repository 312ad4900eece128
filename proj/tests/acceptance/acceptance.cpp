// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "rnds/atlas.hpp"
#include "rnds/diagram.hpp"
#include "rnds/geodesics.hpp"
#include "rnds/io.hpp"

using namespace rnds;

namespace {

constexpr double kPi = std::numbers::pi;
const BlackHoleParams kExample{1.5, 1.0, 0.01};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool ok = true;
  std::ostringstream why;
  void fail(const std::string& s) {
    if (ok) why << s;
    ok = false;
  }
  void check(bool cond, const std::string& s) {
    if (!cond) fail(s);
  }
};

int failures = 0;

void report(int n, const std::string& name, Verdict& v, const std::string& detail) {
  std::printf("%s %d %s: %s%s%s\n", v.ok ? "PASS" : "FAIL", n, name.c_str(), detail.c_str(),
              v.ok ? "" : " | ", v.ok ? "" : v.why.str().c_str());
  if (!v.ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

TortoiseMap example_map() { return build_tortoise(classify_horizons(kExample), kExample); }

ChartPoint rnds_point(int region, bool primed, double t, double r) {
  ChartPoint p;
  p.index = region;
  p.primed = primed;
  p.coords = {t, r};
  return p;
}

// Independent roots of P, ascending.
std::array<double, 4> oracle_roots(const BlackHoleParams& p) {
  std::vector<double> v;
  for (const auto& z : oracle::quartic_roots(p.mass, p.charge, p.lambda)) v.push_back(z.real());
  std::sort(v.begin(), v.end());
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    // Polish with TOMS 748 on a bracket around the eigenvalue.
    auto P = [&](double x) { return -p.lambda * std::pow(x, 4) + x * x - 2 * p.mass * x + p.charge * p.charge; };
    const double w = 1e-6 * std::max(1.0, std::abs(v[i]));
    r[i] = P(v[i] - w) * P(v[i] + w) < 0 ? oracle::root_in(P, v[i] - w, v[i] + w) : v[i];
  }
  return r;
}

// Radius drawn from the open region, away from its ends by a fraction `edge`.
double draw_radius(const TortoiseMap& m, int region, double u, double edge) {
  auto iv = m.interval(RegionId{region});
  if (region == 4) iv[1] = 10.0 * iv[0];
  return iv[0] + (iv[1] - iv[0]) * (edge + (1.0 - 2.0 * edge) * u);
}

void criterion1() {
  const auto t0 = Clock::now();
  Verdict v;
  const HorizonStructure s = classify_horizons(kExample);
  v.check(s.classification == HorizonClass::ThreeHorizons, "not three horizons");
  double worst = 0.0;
  if (s.three_horizons()) {
    const PhotonSphere ph = photon_sphere(kExample, s);
    const double closed = (3 * 1.5 + std::sqrt(9 * 1.5 * 1.5 - 8.0)) / 2.0;
    v.check(ph.radius == 4.0 && closed == 4.0, "photon sphere " + fmt("%.17g", ph.radius));
    v.check(ph.inner_candidate == 0.5, "P1 " + fmt("%.17g", ph.inner_candidate));
    const auto r = s.roots();
    for (int i = 1; i <= 3; ++i) worst = std::max(worst, std::abs(horizon_polynomial(kExample, r[i])));
    v.check(worst < 1e-10, "root residual " + fmt("%g", worst));
    v.check(r[1] < 0.5 && 0.5 < r[2] && r[2] < 4.0 && 4.0 < r[3], "ordering");
  }
  const double dt = seconds_since(t0);
  v.check(dt < 1.0, "runtime " + fmt("%g s", dt));
  report(1, "example reproduction", v, "max|P(r_i)| = " + fmt("%.2e", worst) + ", " + fmt("%.3f s", dt));
}

void criterion2() {
  const auto t0 = Clock::now();
  Verdict v;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 20000;
  int disagree = 0, degenerate = 0, three = 0;
  for (int k = 0; k < n; ++k) {
    const double Q = std::exp(-2.0 + 3.0 * u(rng));
    const double L = u(rng) / (8.0 * Q * Q);
    // Half the masses around the three-horizon window, half anywhere.
    double M = 3.0 * Q * u(rng);
    const DerivedThresholds t = derived_thresholds({1.0, Q, L});
    if (k % 2 == 0 && t.mass_lower && t.mass_upper) {
      M = *t.mass_lower + (*t.mass_upper - *t.mass_lower) * (-0.2 + 1.4 * u(rng));
    }
    if (!(M > 0.0)) M = 1e-3 * Q;
    const BlackHoleParams p{M, Q, L};
    const GcReport gc = check_gc_conditions(p);
    if (gc.degenerate) {
      ++degenerate;
      continue;
    }
    const bool brute = oracle::positive_root_count(M, Q, L) == 3;
    three += brute;
    if (brute != gc.holds) {
      if (disagree == 0) v.fail("M=" + fmt("%.17g", M) + " Q=" + fmt("%.17g", Q) + " L=" + fmt("%.17g", L));
      ++disagree;
    }
  }
  const double dt = seconds_since(t0);
  v.check(dt < 60.0, "runtime " + fmt("%g s", dt));
  report(2, "GC equivalence sweep", v,
         std::to_string(n) + " samples, " + std::to_string(three) + " with three roots, " +
             std::to_string(degenerate) + " in degeneracy band, " + std::to_string(disagree) +
             " disagreements, " + fmt("%.2f s", dt));
}

void criterion3() {
  Verdict v;
  const TortoiseMap m = example_map();
  const auto r = oracle_roots(kExample);
  const auto& a = m.coefficients();
  const double amax = std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2]), std::abs(a[3])});
  const double sum = std::abs(a[0] + a[1] + a[2] + a[3]);
  v.check(sum <= 1e-10 * amax, "sum a_i = " + fmt("%g", sum));
  double fp_err = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double x = r[i];
    const double fp = 2 * 1.5 / (x * x) - 2.0 / (x * x * x) - 0.02 * x;
    fp_err = std::max(fp_err, std::abs(fp * a[i] - 1.0));
  }
  v.check(fp_err <= 1e-10, "f'(r_i) a_i - 1 = " + fmt("%g", fp_err));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double quad_err = 0.0, trip_err = 0.0, trip_bad_r = 0.0;
  int trip_bad = 0;
  for (int region = 1; region <= 4; ++region) {
    // Reference point inside the region; region III uses r_*(P2) = 0 directly.
    const double ref = region == 3 ? 4.0 : draw_radius(m, region, 0.5, 0.0);
    const double ref_star = region == 3 ? 0.0 : m(ref);
    for (int k = 0; k < 100; ++k) {
      const double x = draw_radius(m, region, u(rng), 0.01);
      const double q = ref_star + oracle::tortoise_integral(1.5, 1.0, 0.01, ref, x);
      quad_err = std::max(quad_err, std::abs(m(x) - q));
    }
    for (int k = 0; k < 1000; ++k) {
      const double x = draw_radius(m, region, u(rng), 0.0);
      if (!(x > 0.0) || !m.region_of(x).valid()) continue;
      const double back = m.invert(RegionId{region}, m(x));
      const double e = std::abs(back - x) / std::max(1.0, x);
      trip_err = std::max(trip_err, e);
      if (e > 1e-10) {
        ++trip_bad;
        trip_bad_r = std::max(trip_bad_r, x);
      }
    }
  }
  // Region III pins the normalisation; the other regions use differences.
  v.check(std::abs(m(4.0)) == 0.0, "r_*(P2) != 0");
  v.check(quad_err <= 1e-8, "quadrature mismatch " + fmt("%g", quad_err));
  v.check(trip_err <= 1e-10, "round trip " + fmt("%g", trip_err) + " in " + std::to_string(trip_bad) +
                                 " samples, all at r <= " + fmt("%.2e", trip_bad_r));
  report(3, "tortoise identities", v,
         "|sum a_i| = " + fmt("%.1e", sum) + ", max|f'a-1| = " + fmt("%.1e", fp_err) +
             ", quadrature " + fmt("%.1e", quad_err) + ", round trip " + fmt("%.1e", trip_err));
}

void criterion4() {
  Verdict v;
  const TortoiseMap m = example_map();
  const auto r = oracle_roots(kExample);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double trip = 0.0, prod = 0.0, tr = 0.0, trip_bad_r = 0.0;
  int trip_bad = 0;
  for (int region = 1; region <= 4; ++region) {
    for (int k = 0; k < 1000; ++k) {
      const bool primed = u(rng) < 0.5;
      const double t = -20.0 + 40.0 * u(rng);
      const double x = draw_radius(m, region, u(rng), 1e-3);
      const ChartPoint p = rnds_point(region, primed, t, x);
      const ChartPoint dn = to_double_null(p, m);
      for (int i : {region - 1, region}) {
        if (i < 1 || i > 3) continue;
        const KruskalChart chart(m, i);
        const ChartPoint k4 = to_kruskal(dn, chart);
        const ChartPoint back = to_rnds(k4, m);
        if (back.index != region || back.primed != primed) v.fail("region/orientation lost");
        const double e = std::max(std::abs(back.coords[0] - t) / std::max(1.0, std::abs(t)),
                                  std::abs(back.coords[1] - x) / x);
        trip = std::max(trip, e);
        if (e > 1e-8) {
          ++trip_bad;
          trip_bad_r = std::max(trip_bad_r, x);
        }
        // H from the oracle roots: (-1)^j e^{a/a_i} Π |x - r_j|^{a_j/a_i}.
        const auto& a = m.coefficients();
        double logH = m.a() / a[i];
        for (int j = 0; j < 4; ++j) logH += a[j] / a[i] * std::log(std::abs(x - r[j]));
        const double H = (region % 2 == 0 ? 1.0 : -1.0) * std::exp(logH);
        if (!k4.log_coords) {
          prod = std::max(prod, std::abs(k4.coords[0] * k4.coords[1] - H) / std::abs(H));
        }
        const double tk = kruskal_time(chart, k4);
        tr = std::max(tr, std::abs(tk - t) / std::max(1.0, std::abs(t)));
      }
    }
  }
  v.check(trip <= 1e-8, "round trip " + fmt("%g", trip) + " in " + std::to_string(trip_bad) +
                             " conversions, all at r <= " + fmt("%.2e", trip_bad_r));
  v.check(prod <= 1e-10, "U+U- vs H " + fmt("%g", prod));
  v.check(tr <= 1e-10, "t recovery " + fmt("%g", tr));
  double g_err = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const KruskalChart chart(m, i);
    const auto& a = m.coefficients();
    double logd = m.a() / a[i];
    for (int j = 0; j < 4; ++j) {
      if (j != i) logd += a[j] / a[i] * std::log(std::abs(r[i] - r[j]));
    }
    const double dH = (i % 2 == 1 ? 1.0 : -1.0) * std::exp(logd);
    const double limit = -4.0 * a[i] / dH;
    const double g = chart.metric_coefficient(m.roots()[i]);
    v.check(std::isfinite(g) && g != 0.0, "G not finite/nonzero at S" + std::to_string(i));
    g_err = std::max(g_err, std::abs(g - limit) / std::abs(limit));
  }
  v.check(g_err <= 1e-8, "G limit " + fmt("%g", g_err));
  report(4, "chart coherence", v,
         "round trip " + fmt("%.1e", trip) + ", U+U- " + fmt("%.1e", prod) + ", t " + fmt("%.1e", tr) +
             ", G(r_i) " + fmt("%.1e", g_err));
}

void criterion5() {
  Verdict v;
  const TortoiseMap m = example_map();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int nine[9][3] = {{0, 0, 1}, {1, 0, 0}, {1, 1, 1}, {1, 2, 2}, {1, 3, 3},
                          {2, 1, 2}, {2, 3, 3}, {3, 1, 3}, {3, 2, 3}};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int region = 1 + k % 4;
    const double x = draw_radius(m, region, u(rng), 0.01);
    const double theta = 0.05 + (kPi - 0.1) * u(rng);
    const ChristoffelTable g = christoffel_rnds(kExample, x, theta);
    const oracle::Table o = oracle::christoffel_fd(1.5, 1.0, 0.01, x, theta);
    for (const auto& s : nine) {
      const double want = o[s[0]][s[1]][s[2]];
      const double got = g[s[0]][s[1]][s[2]];
      if (got != g[s[0]][s[2]][s[1]]) v.fail("not symmetric");
      worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  v.check(worst <= 1e-6, "relative error " + fmt("%g", worst));
  report(5, "Christoffel audit", v, "max relative error " + fmt("%.1e", worst) + " over 100 points");
}

void criterion6() {
  Verdict v;
  const TortoiseMap m = example_map();
  auto f = [](double x) { return oracle::f(1.5, 1.0, 0.01, x); };
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // (a) and (c)
  double null_res = 0.0, rdot_var = 0.0;
  int reached = 0, inward = 0;
  for (int k = 0; k < 200; ++k) {
    const int region = 1 + k % 4;
    const double x = draw_radius(m, region, u(rng), 0.05);
    const NullFamily fam = k % 3 == 0 ? NullFamily::Yplus : NullFamily::Yminus;
    const int dir = (k / 4) % 2 == 0 ? 1 : -1;
    const auto tr = radial_null_trace(m, rnds_point(region, u(rng) < 0.5, 0.0, x), fam, dir);
    const double rd = tr.samples.front().r_dot;
    for (const auto& s : tr.samples) {
      const MetricValue g = metric_at(s.point, m);
      const std::array<double, 4> w{s.velocity[0], s.velocity[1], 0.0, 0.0};
      null_res = std::max(null_res, std::abs(g.apply(w, w)));
      rdot_var = std::max(rdot_var, std::abs(s.r_dot - rd));
    }
    for (std::size_t j = 1; j < tr.samples.size(); ++j) {
      const auto& a = tr.samples[j - 1];
      const auto& b = tr.samples[j];
      rdot_var = std::max(rdot_var, std::abs((b.r - a.r) / (b.tau - a.tau) - rd));
    }
    if (rd < 0.0) {
      ++inward;
      if (tr.termination == Termination::Singularity && std::isfinite(tr.events.back().tau)) ++reached;
    }
  }
  v.check(null_res <= 1e-10, "null residual " + fmt("%g", null_res));
  v.check(rdot_var <= 1e-10, "dr/dtau varies by " + fmt("%g", rdot_var));
  v.check(reached == inward, "inward null rays missing r = 0");

  // (b)
  double turn_err = 0.0, min_r = 1e300;
  const double r1 = m.roots()[1];
  for (int k = 0; k < 40; ++k) {
    const double x = r1 * (0.1 + 0.85 * u(rng));
    const double rd = -(0.01 + 3.0 * u(rng));
    const double E = 0.2 + 2.0 * u(rng);
    const double td = std::sqrt((E + rd * rd / f(x)) / f(x));
    IntegrationOptions opt;
    opt.tau_max = 50.0;
    opt.max_turns = 1;
    const auto tr = radial_timelike_trace(m, rnds_point(1, u(rng) < 0.5, 0.0, x), td, rd, opt);
    const double C = tr.killing * tr.killing;
    const double root = oracle::root_in([&](double y) { return C - f(y) * tr.energy; }, 1e-9 * x, x);
    bool turned = false;
    for (const auto& e : tr.events) {
      if (e.kind == GeodesicEvent::Kind::TurningPoint) {
        turned = true;
        turn_err = std::max(turn_err, std::abs(e.r - root));
      }
      if (e.kind == GeodesicEvent::Kind::Singularity) v.fail("timelike geodesic reached r = 0");
    }
    if (!turned) v.fail("no turning point logged");
    for (const auto& s : tr.samples) min_r = std::min(min_r, s.r);
  }
  v.check(turn_err <= 1e-8, "turning radius error " + fmt("%g", turn_err));
  v.check(min_r > 0.0, "min r not positive");

  // (d)
  double drift = 0.0;
  int crossings = 0;
  for (int k = 0; k < 12; ++k) {
    const double x = 3.2 + 3.0 * u(rng);
    const double rd = (k % 2 == 0 ? -1.0 : 1.0) * (0.05 + 0.8 * u(rng));
    const double E = 0.5 + u(rng);
    const double td = std::sqrt((E + rd * rd / f(x)) / f(x));
    const auto tr = radial_timelike_trace(m, rnds_point(3, false, 0.0, x), td, rd);
    for (const auto& e : tr.events) crossings += e.kind == GeodesicEvent::Kind::HorizonCrossing;
    for (const auto& s : tr.samples) drift = std::max(drift, std::abs(s.energy - tr.energy) / tr.energy);
  }
  v.check(crossings >= 12, "too few horizon crossings");
  v.check(drift < 1e-8, "E drift " + fmt("%g", drift));
  report(6, "geodesic physics", v,
         "null residual " + fmt("%.1e", null_res) + ", dr/dtau spread " + fmt("%.1e", rdot_var) +
             ", turning radius " + fmt("%.1e", turn_err) + ", min r " + fmt("%.3g", min_r) +
             ", E drift " + fmt("%.1e", drift) + " over " + std::to_string(crossings) + " crossings");
}

// Outside every closed removed square; squares sit at ((m+½)π, (n+½)π) with m - n odd.
bool admissible(double X, double Y) {
  const double cx = std::floor(X / kPi) * kPi + 0.5 * kPi;
  const double cy = std::floor(Y / kPi) * kPi + 0.5 * kPi;
  const long mm = std::lround((cx - 0.5 * kPi) / kPi);
  const long nn = std::lround((cy - 0.5 * kPi) / kPi);
  if (((mm - nn) % 2 + 2) % 2 == 0) return true;
  return std::abs(X - cx) + std::abs(Y - cy) > 0.5 * kPi;
}

void criterion7() {
  Verdict v;
  const TortoiseMap m = example_map();
  const Atlas at(m);
  const auto r = m.roots();
  const int n = 500;
  const double lo = -2.0 * kPi, hi = 2.0 * kPi;
  // Grid in (x, y) covering the default viewport.
  const double span = (hi - lo) * std::numbers::sqrt2;
  std::size_t points = 0, overlaps = 0;
  double spread = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = -0.5 * span + span * (i + 0.5) / n;
      const double y = -0.5 * span + span * (j + 0.5) / n;
      const GlobalPoint g{x, y, {}};
      if (!admissible(g.X(), g.Y())) continue;
      ++points;
      try {
        const AtlasResolution res = at.resolve(g);
        if (res.memberships.empty()) v.fail("no membership");
        if (res.memberships.size() > 1) ++overlaps;
        for (const Membership& mb : res.memberships) {
          spread = std::max(spread, std::abs(radius_of(mb.point, m) - res.r) / res.r);
        }
      } catch (const std::exception& e) {
        v.fail(std::string("resolve failed: ") + e.what());
      }
    }
  }
  v.check(spread <= 1e-9, "r spread " + fmt("%g", spread));

  // Lattice structure: bifurcation spheres, horizon axes, ℐ and r = 0 edges.
  int loci = 0;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) {
      const bool even = ((a - b) % 2 + 2) % 2 == 0;
      const AtlasResolution s = at.resolve(GlobalPoint::from_lattice(a * kPi, b * kPi));
      v.check(s.label == (even ? "S1" : "S3") && s.r == r[even ? 1 : 3], "bifurcation at lattice point");
      for (double off : {-0.7, 0.4}) {
        for (int axis = 0; axis < 2; ++axis) {
          const double X = a * kPi + (axis == 0 ? off : 0.0);
          const double Y = b * kPi + (axis == 1 ? off : 0.0);
          const AtlasResolution h = at.resolve(GlobalPoint::from_lattice(X, Y));
          v.check(h.location.kind == KruskalLocation::Kind::Horizon && h.r == r[even ? 1 : 3],
                  "horizon axis");
          ++loci;
        }
      }
      if (even) {
        const AtlasResolution s2 = at.resolve(GlobalPoint::from_lattice((a + 0.5) * kPi, (b + 0.5) * kPi));
        v.check(s2.label == "S2" && s2.r == r[2], "S2 at B centre");
      } else {
        // Block centred here. Each neighbouring cell bounds it by a level curve of
        // |tan sX tan sY|: ℐ (level c_C) towards C cells, r = 0 (level c_A) towards A cells.
        const double cx = (a + 0.5) * kPi, cy = (b + 0.5) * kPi;
        for (int dx : {-1, 1}) {
          for (int dy : {-1, 1}) {
            const bool scri = dx == dy;
            const double level = scri ? at.scri_level() : at.singularity_level();
            const double ccx = cx + dx * 0.5 * kPi, ccy = cy + dy * 0.5 * kPi;
            for (double rel : {-1e-9, 1e-9}) {
              const double s = std::atan(std::sqrt(level * (1.0 + rel)));
              const GlobalPoint q = GlobalPoint::from_lattice(ccx - dx * s, ccy - dy * s);
              if (rel > 0) {
                bool excluded = false;
                try {
                  (void)at.resolve(q);
                } catch (const ExcludedPointError&) {
                  excluded = true;
                }
                v.check(excluded, scri ? "beyond scri resolved" : "beyond r = 0 resolved");
              } else {
                const AtlasResolution e = at.resolve(q);
                if (scri) {
                  v.check(e.r > 1e3 * r[3] && e.label.rfind("IV", 0) == 0, "scri edge " + e.label);
                } else {
                  v.check(e.r < 0.05 * r[1] && (e.label == "I" || e.label == "I'"), "r = 0 edge " + e.label);
                }
              }
              ++loci;
            }
            // The straight diamond edge is ℐ itself, or lies in region I next to r = 0.
            const AtlasResolution mid = at.resolve(GlobalPoint::from_lattice(ccx - dx * (0.25 * kPi - 1e-9), ccy - dy * (0.25 * kPi - 1e-9)));
            v.check(scri ? std::isinf(mid.r) || mid.r > 1e6 * r[3] : mid.r <= r[1] && (mid.label == "I" || mid.label == "I'"), "diamond edge midpoint " + mid.label);
          }
        }
      }
    }
  }

  // Diagram bytes from two independent builds.
  DiagramOptions o;
  o.radii = {0.2, 1.5, 4.0, 20.0};
  o.times = {-1.0, 0.0, 2.0};
  const std::string s1 = dataset_svg(diagram_dataset(at, o));
  const std::string s2 = dataset_svg(diagram_dataset(Atlas(example_map()), o));
  const std::string c1 = dataset_csv(diagram_dataset(at, o));
  const std::string c2 = dataset_csv(diagram_dataset(Atlas(example_map()), o));
  v.check(!s1.empty() && s1 == s2 && c1 == c2, "diagram output differs between runs");
  report(7, "atlas audit", v,
         std::to_string(points) + " admissible grid points (" + std::to_string(overlaps) +
             " in overlaps), r spread " + fmt("%.1e", spread) + ", " + std::to_string(loci) +
             " lattice loci, diagram deterministic");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      std::printf("FAIL %zu: exception %s\n", i + 1, e.what());
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
