#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "rnds/atlas.hpp"

using namespace rnds;

namespace {

constexpr double kPi = std::numbers::pi;

const BlackHoleParams kExample{1.5, 1.0, 0.01};

Atlas example_atlas() {
  return Atlas(build_tortoise(classify_horizons(kExample), kExample));
}

// Outside every closed removed diamond, i.e. outside the closed squares in (x, y).
bool admissible(double X, double Y) {
  const double cx = std::floor(X / kPi) * kPi + 0.5 * kPi;
  const double cy = std::floor(Y / kPi) * kPi + 0.5 * kPi;
  const long m = std::lround((cx - 0.5 * kPi) / kPi);
  const long n = std::lround((cy - 0.5 * kPi) / kPi);
  // Block centres have m, n of opposite parity in this half-lattice.
  if (((m - n) % 2 + 2) % 2 == 0) return true;
  return std::abs(X - cx) + std::abs(Y - cy) > 0.5 * kPi + 1e-9;
}

std::array<SignedLog, 2> logs(const ChartPoint& k) {
  if (k.log_coords) return *k.log_coords;
  return {SignedLog::from(k.coords[0]), SignedLog::from(k.coords[1])};
}

// Relative agreement of Kruskal coordinates, compared in log form so that
// points with overflowing U± still count.
void expect_same_kruskal(const ChartPoint& a, const ChartPoint& b, double tol) {
  const auto la = logs(a), lb = logs(b);
  for (int c = 0; c < 2; ++c) {
    EXPECT_EQ(la[c].sign, lb[c].sign);
    if (la[c].sign != 0) {
      EXPECT_NEAR(la[c].log_abs, lb[c].log_abs, tol * std::max(1.0, 1e-2 * std::abs(la[c].log_abs)));
    }
  }
}

std::string roman_of(const std::string& label) {
  std::string s = label;
  if (!s.empty() && s.back() == '\'') s.pop_back();
  return s;
}

}  // namespace

TEST(Atlas, OriginIsInnerBifurcationSphere) {
  const Atlas at = example_atlas();
  const AtlasResolution res = at.resolve({0.0, 0.0});
  EXPECT_EQ(res.label, "S1");
  EXPECT_EQ(res.r, at.tortoise().roots()[1]);
  ASSERT_EQ(res.memberships.size(), 1u);
  EXPECT_EQ(res.memberships[0].cell, (CellId{CellKind::A, 0, 0}));
  EXPECT_EQ(res.memberships[0].point.coords[0], 0.0);
  EXPECT_EQ(res.memberships[0].point.coords[1], 0.0);
  EXPECT_FALSE(res.t.has_value());
}

TEST(Atlas, BifurcationSpheresOnLattice) {
  const Atlas at = example_atlas();
  const auto r = at.tortoise().roots();
  for (int m = -3; m <= 3; ++m) {
    for (int n = -3; n <= 3; ++n) {
      const AtlasResolution a = at.resolve(GlobalPoint::from_lattice(m * kPi, n * kPi));
      EXPECT_EQ(a.memberships.size(), 1u);
      EXPECT_EQ(a.label, (m - n) % 2 == 0 ? "S1" : "S3");
      EXPECT_NEAR(a.r, (m - n) % 2 == 0 ? r[1] : r[3], 1e-12 * r[3]);
      // B centres sit at odd multiples of π/2 where m + n is even after halving.
      const double X = (m + 0.5) * kPi, Y = (n + 0.5) * kPi;
      if ((m - n) % 2 == 0) {
        const AtlasResolution b = at.resolve(GlobalPoint::from_lattice(X, Y));
        EXPECT_EQ(b.label, "S2");
        EXPECT_NEAR(b.r, r[2], 1e-12 * r[2]);
      } else {
        EXPECT_THROW((void)at.resolve(GlobalPoint::from_lattice(X, Y)), ExcludedPointError);
      }
    }
  }
}

TEST(Atlas, AxesAreHorizons) {
  const Atlas at = example_atlas();
  const auto r = at.tortoise().roots();
  std::set<std::string> seen;
  for (double s : {-1.2, -0.4, 0.4, 1.2}) {
    for (auto [X, Y, i] : std::vector<std::tuple<double, double, int>>{
             {0.0, s, 1}, {s, 0.0, 1}, {kPi, s, 3}, {kPi + s, 0.0, 3},
             {0.5 * kPi, 0.5 * kPi + s, 2}, {0.5 * kPi + s, 0.5 * kPi, 2}}) {
      if (!admissible(X, Y)) continue;
      const AtlasResolution res = at.resolve(GlobalPoint::from_lattice(X, Y));
      EXPECT_EQ(res.location.kind, KruskalLocation::Kind::Horizon);
      EXPECT_NEAR(res.r, r[static_cast<size_t>(i)], 1e-12 * r[3]);
      EXPECT_FALSE(res.t.has_value());
      EXPECT_NE(res.label.find("H" + std::to_string(i)), std::string::npos) << res.label;
      seen.insert(res.label);
    }
  }
  EXPECT_TRUE(seen.count("H1-") && seen.count("H1+") && seen.count("-H1-") && seen.count("-H1+"));
}

TEST(Atlas, ExcludedAndTimelikeInfinity) {
  const Atlas at = example_atlas();
  const GlobalPoint centre = GlobalPoint::from_lattice(0.5 * kPi, -0.5 * kPi);
  try {
    (void)at.resolve(centre);
    FAIL() << "block centre resolved";
  } catch (const ExcludedPointError& e) {
    EXPECT_EQ(e.block().k, 0);
    EXPECT_EQ(e.block().l, 0);
  }
  struct Corner { double X, Y; bool future; };
  for (const Corner& c : {Corner{0.5 * kPi, 0.0, true}, Corner{kPi, -0.5 * kPi, true},
                          Corner{0.0, -0.5 * kPi, false}, Corner{0.5 * kPi, -kPi, false}}) {
    try {
      (void)at.resolve(GlobalPoint::from_lattice(c.X, c.Y));
      FAIL() << "corner resolved";
    } catch (const TimelikeInfinityError& e) {
      EXPECT_EQ(e.future(), c.future);
    }
  }
}

TEST(Atlas, RadiusSingleValuedAndTransitions) {
  const Atlas at = example_atlas();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-2.0 * kPi, 2.0 * kPi);
  int overlaps = 0;
  for (int n = 0; n < 4000; ++n) {
    const double X = u(rng), Y = u(rng);
    if (!admissible(X, Y)) continue;
    const AtlasResolution res = at.resolve(GlobalPoint::from_lattice(X, Y));
    ASSERT_FALSE(res.memberships.empty());
    for (const Membership& mb : res.memberships) {
      EXPECT_NEAR(radius_of(mb.point, at.tortoise()), res.r, 1e-9 * res.r);
      const ChartPoint same = at.transition(mb.cell, mb.point, mb.cell);
      EXPECT_EQ(same.coords, mb.point.coords);
    }
    if (res.memberships.size() < 2) continue;
    ++overlaps;
    const Membership& a = res.memberships[0];
    const Membership& b = res.memberships[1];
    const ChartPoint ab = at.transition(a.cell, a.point, b.cell);
    const ChartPoint aba = at.transition(b.cell, ab, a.cell);
    expect_same_kruskal(ab, b.point, 1e-10);
    expect_same_kruskal(aba, a.point, 1e-10);
    if (res.t && b.point.coords[0] * b.point.coords[1] != 0.0) {
      const KruskalChart& kc = at.chart(b.cell.chart());
      EXPECT_NEAR(kruskal_time(kc, b.point), *res.t, 1e-8 * std::max(1.0, std::abs(*res.t)));
    }
  }
  EXPECT_GT(overlaps, 100);
}

TEST(Atlas, LabelsMatchRadiusAndCoverAllRegions) {
  const Atlas at = example_atlas();
  const TortoiseMap& m = at.tortoise();
  std::set<std::string> seen;
  const int n = 120;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double X = -kPi + 2.0 * kPi * (i + 0.5) / n;
      const double Y = -kPi + 2.0 * kPi * (j + 0.5) / n;
      if (!admissible(X, Y)) continue;
      const AtlasResolution res = at.resolve(GlobalPoint::from_lattice(X, Y));
      if (res.location.kind != KruskalLocation::Kind::Region) continue;
      seen.insert(res.label);
      const RegionId reg = m.region_of(res.r);
      if (reg.valid()) {
        EXPECT_EQ(roman_of(res.label), std::string(roman(reg))) << X << ' ' << Y;
      }
      EXPECT_EQ(region_label(res), res.label);
    }
  }
  for (const char* l : {"I", "II", "III", "IV", "I'", "II'", "III'", "IV'"}) EXPECT_TRUE(seen.count(l)) << l;
}

TEST(Atlas, StaticOrientationFollowsKillingField) {
  const Atlas at = example_atlas();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0 * kPi, 2.0 * kPi);
  int checked = 0;
  for (int n = 0; n < 3000 && checked < 200; ++n) {
    const double X = u(rng), Y = u(rng);
    if (!admissible(X, Y)) continue;
    const AtlasResolution res = at.resolve(GlobalPoint::from_lattice(X, Y));
    if (res.location.kind != KruskalLocation::Kind::Region || !res.location.region.is_static()) continue;
    if (!res.t) continue;
    // Moving along +y (future) inside a static region, t grows in I, III and falls in I', III'.
    const double h = 1e-6;
    const GlobalPoint q = GlobalPoint::from_lattice(X + h, Y + h);
    const AtlasResolution rq = at.resolve(q);
    if (!rq.t || rq.label != res.label) continue;
    ++checked;
    const bool primed = res.label.back() == '\'';
    EXPECT_EQ(*rq.t > *res.t, !primed) << res.label << " at " << X << ' ' << Y;
  }
  EXPECT_GT(checked, 50);
}

TEST(Atlas, Periodicity) {
  const Atlas at = example_atlas();
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  int checked = 0;
  for (int n = 0; n < 500; ++n) {
    const double X = u(rng), Y = u(rng);
    if (!admissible(X, Y)) continue;
    const AtlasResolution a = at.resolve(GlobalPoint::from_lattice(X, Y));
    for (auto [dX, dY] : {std::pair{2.0 * kPi, 0.0}, std::pair{0.0, 2.0 * kPi}, std::pair{2.0 * kPi, -2.0 * kPi}}) {
      const AtlasResolution b = at.resolve(GlobalPoint::from_lattice(X + dX, Y + dY));
      EXPECT_EQ(a.label, b.label);
      EXPECT_NEAR(a.r, b.r, 1e-9 * a.r);
    }
    // (x, y) → (x + 2√2π, y) is a shift of X by 2π and Y by -2π.
    GlobalPoint p = GlobalPoint::from_lattice(X, Y);
    p.x += 2.0 * std::numbers::sqrt2 * kPi;
    EXPECT_EQ(at.resolve(p).label, a.label);
    ++checked;
  }
  EXPECT_GT(checked, 300);
}

TEST(Atlas, MetricCompatibleOnOverlaps) {
  const Atlas at = example_atlas();
  const TortoiseMap& m = at.tortoise();
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-2.0 * kPi, 2.0 * kPi);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  int checked = 0;
  for (int n = 0; n < 5000 && checked < 200; ++n) {
    const double X = u(rng), Y = u(rng);
    if (!admissible(X, Y)) continue;
    const GlobalPoint p = GlobalPoint::from_lattice(X, Y);
    const AtlasResolution res = at.resolve(p);
    if (res.memberships.size() < 2) continue;
    // Steep chart maps pin r to a horizon in double precision near the cell edges.
    if (!m.region_of(res.r * (1 + 1e-9)).valid() || !m.region_of(res.r * (1 - 1e-9)).valid() ||
        m.region_of(res.r * (1 + 1e-9)).index != m.region_of(res.r * (1 - 1e-9)).index) continue;
    const std::array<double, 2> w{v(rng), v(rng)};
    std::vector<double> norms;
    for (const Membership& mb : res.memberships) {
      // Pushforward of the plane vector w: central differences of ln|U±|, which stay smooth
      // where the chart maps are steep.
      const double h = 1e-5;
      const auto lp = logs(mb.point);
      if (lp[0].sign * lp[1].sign == 0 || std::abs(lp[0].log_abs) + std::abs(lp[1].log_abs) > 600.0) break;
      GlobalPoint a = GlobalPoint::from_lattice(X + h * w[0], Y + h * w[1]);
      GlobalPoint b = GlobalPoint::from_lattice(X - h * w[0], Y - h * w[1]);
      if (!at.contains(mb.cell, a) || !at.contains(mb.cell, b)) break;
      const ChartPoint ka = at.chart_point(mb.cell, a), kb = at.chart_point(mb.cell, b);
      const auto la = logs(ka), lb = logs(kb);
      const std::array<double, 4> d{mb.point.coords[0] * (la[0].log_abs - lb[0].log_abs) / (2 * h),
                                    mb.point.coords[1] * (la[1].log_abs - lb[1].log_abs) / (2 * h),
                                    0.0, 0.0};
      norms.push_back(metric_at(mb.point, m).apply(d, d));
    }
    if (norms.size() < 2) continue;
    ++checked;
    EXPECT_NEAR(norms[0], norms[1], 1e-7 * std::max(std::abs(norms[0]), 1e-300)) << X << ' ' << Y;
  }
  EXPECT_GT(checked, 50);
}

TEST(Atlas, BoundaryLevels) {
  const Atlas at = example_atlas();
  EXPECT_DOUBLE_EQ(at.scri_level(), 1.0);
  EXPECT_GT(at.singularity_level(), 1.0);
  // Constant-r levels approach the boundary levels.
  EXPECT_NEAR(std::exp(at.radius_log_level(3, 1e8)), at.scri_level(), 1e-6);
  EXPECT_NEAR(std::exp(at.radius_log_level(1, 1e-4)), at.singularity_level(), 1e-6);
  EXPECT_THROW((void)at.chart_point(CellId{CellKind::A, 0, 0}, GlobalPoint::from_lattice(kPi, 0.0)), DomainError);
}
