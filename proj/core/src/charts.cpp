#include "rnds/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rnds/errors.hpp"

namespace rnds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int parity_sign(int j) noexcept { return (j % 2 == 0) ? 1 : -1; }

int sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

void require_chart_index(int i) {
  if (i < 1 || i > 3) throw DomainError("Kruskal chart index must be 1, 2 or 3");
}

void require_rnds(const ChartPoint& p, const TortoiseMap& map) {
  if (p.kind != ChartKind::RNdS) throw DomainError("expected an RNdS (t, r) point");
  const RegionId region{p.index};
  if (!region.valid()) throw DomainError("region index must be in 1..4");
  const double r = p.coords[1];
  const RegionId actual = map.region_of(r);
  if (!actual.valid()) {
    if (r > 0.0) {
      throw SingularChartError("r = " + std::to_string(r) +
                               " is a horizon; the (t, r) chart does not cover it, use a "
                               "Kruskal chart");
    }
    throw DomainError("r must be positive, got " + std::to_string(r));
  }
  if (actual != region) {
    const auto iv = map.interval(region);
    throw DomainError("r = " + std::to_string(r) + " is outside region " +
                      std::string(roman(region)) + " = (" + std::to_string(iv[0]) + ", " +
                      std::to_string(iv[1]) + ")");
  }
}

// Orientation tag of `target` reached from (origin, primed) along one EF
// chart. Retarded charts keep the sign of U- fixed across each horizon,
// advanced charts the sign of U+.
bool ef_orientation(bool retarded, RegionId origin, bool primed, RegionId target) {
  int m = origin.index;
  bool pm = primed;
  while (m != target.index) {
    const int step = target.index > m ? 1 : -1;
    const int chart = step > 0 ? m : m - 1;
    const int next = m + step;
    const auto beta = kruskal_signs(chart, RegionId{m}, pm);
    const int fixed = retarded ? beta[1] : beta[0];
    const int beta_plus = retarded ? parity_sign(next) * fixed : fixed;
    pm = beta_plus != kruskal_signs(chart, RegionId{next}, false)[0];
    m = next;
  }
  return pm;
}

std::array<SignedLog, 2> kruskal_logs(const ChartPoint& p) {
  if (p.log_coords) return *p.log_coords;
  return {SignedLog::from(p.coords[0]), SignedLog::from(p.coords[1])};
}

}  // namespace

ChartPoint kruskal_point(int chart, SignedLog um, SignedLog up, const Angles& omega) {
  require_chart_index(chart);
  ChartPoint out;
  out.kind = ChartKind::Kruskal;
  out.index = chart;
  out.omega = omega;
  out.coords = {um.value(), up.value()};
  if (std::abs(um.log_abs) > kLogDomainThreshold || std::abs(up.log_abs) > kLogDomainThreshold) {
    if (um.sign != 0 && up.sign != 0) out.log_coords = std::array<SignedLog, 2>{um, up};
  }
  return out;
}

std::string_view to_string(ChartKind kind) noexcept {
  switch (kind) {
    case ChartKind::RNdS:
      return "rnds";
    case ChartKind::EFRetarded:
      return "ef_retarded";
    case ChartKind::EFAdvanced:
      return "ef_advanced";
    case ChartKind::DoubleNull:
      return "double_null";
    case ChartKind::Kruskal:
      return "kruskal";
  }
  return "rnds";
}

SignedLog SignedLog::from(double x) noexcept {
  if (x == 0.0) return {0, -kInf};
  return {sgn(x), std::log(std::abs(x))};
}

double SignedLog::value() const noexcept {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

KruskalChart::KruskalChart(const TortoiseMap& map, int i) : map_(map), i_(i) {
  require_chart_index(i);
  a_i_ = map_.coefficient(i);
}

std::array<double, 2> KruskalChart::product_range() const noexcept {
  switch (i_) {
    case 1:
      return {-std::exp(map_.b() / a_i_), kInf};
    case 3:
      return {-kInf, std::exp(map_.a() / a_i_)};
    default:
      return {-kInf, kInf};
  }
}

std::array<double, 2> KruskalChart::radius_domain() const noexcept {
  const auto& r = map_.roots();
  switch (i_) {
    case 1:
      return {0.0, r[2]};
    case 2:
      return {r[1], r[3]};
    default:
      return {r[2], kInf};
  }
}

SignedLog KruskalChart::log_H(double r) const {
  const auto dom = radius_domain();
  if (!(r > dom[0] && r < dom[1])) {
    throw DomainError("r = " + std::to_string(r) + " is outside the domain of Kruskal chart " +
                      std::to_string(i_));
  }
  const double ri = map_.roots()[static_cast<size_t>(i_)];
  if (r == ri) return {0, -kInf};
  const int j = r < ri ? i_ : i_ + 1;
  double log_abs;
  if (r > 2.0 * map_.roots()[3]) {
    log_abs = map_.value(r).value / a_i_;
  } else {
    log_abs = std::log(std::abs(r - ri)) + map_.regular_part(i_, r) / a_i_;
  }
  return {parity_sign(j), log_abs};
}

double KruskalChart::H_derivative_at_horizon() const {
  const auto& roots = map_.roots();
  const double ri = roots[static_cast<size_t>(i_)];
  double log_abs = map_.a() / a_i_;
  for (int j = 0; j < 4; ++j) {
    if (j == i_) continue;
    log_abs += map_.coefficient(j) / a_i_ * std::log(std::abs(ri - roots[static_cast<size_t>(j)]));
  }
  return parity_sign(i_ + 1) * std::exp(log_abs);
}

double KruskalChart::metric_coefficient(double r) const {
  const auto dom = radius_domain();
  if (!(r > dom[0] && r < dom[1])) {
    throw DomainError("r = " + std::to_string(r) + " is outside the domain of Kruskal chart " +
                      std::to_string(i_));
  }
  const auto& roots = map_.roots();
  const double lambda = map_.params().lambda;
  double log_abs = std::log(4.0 * a_i_ * a_i_ * lambda) - map_.a() / a_i_ - 2.0 * std::log(r);
  int sign = -parity_sign(i_);
  for (int j = 0; j < 4; ++j) {
    if (j == i_) continue;
    const double d = r - roots[static_cast<size_t>(j)];
    log_abs += (1.0 - map_.coefficient(j) / a_i_) * std::log(std::abs(d));
    sign *= sgn(d);
  }
  return sign * std::exp(log_abs);
}

double KruskalChart::metric_coefficient_log_derivative(double r) const {
  const auto& roots = map_.roots();
  double sum = -2.0 / r;
  for (int j = 0; j < 4; ++j) {
    if (j == i_) continue;
    sum += (1.0 - map_.coefficient(j) / a_i_) / (r - roots[static_cast<size_t>(j)]);
  }
  return sum;
}

RegionId KruskalChart::region_for_sign(int product_sign) const noexcept {
  return product_sign == parity_sign(i_) ? RegionId{i_} : RegionId{i_ + 1};
}

double KruskalChart::radius(const SignedLog& product) const {
  if (product.sign == 0) return map_.roots()[static_cast<size_t>(i_)];
  const auto range = product_range();
  const double lo = range[0];
  const double hi = range[1];
  const bool below = std::isfinite(lo) && product.sign < 0 && product.log_abs >= std::log(-lo);
  const bool above = std::isfinite(hi) && product.sign > 0 && product.log_abs >= std::log(hi);
  if (below) {
    throw DomainError("U+U- at or beyond the r = 0 singularity of Kruskal chart 1 (B = " +
                      std::to_string(lo) + ")");
  }
  if (above) {
    throw DomainError("U+U- at or beyond conformal infinity of Kruskal chart 3 (A = " +
                      std::to_string(hi) + ")");
  }
  return map_.invert(region_for_sign(product.sign), a_i_ * product.log_abs);
}

double KruskalChart::radius(double product) const { return radius(SignedLog::from(product)); }

double kruskal_radius(const KruskalChart& chart, double u_minus, double u_plus) {
  return chart.radius(SignedLog::from(u_minus) * SignedLog::from(u_plus));
}

double kruskal_time(const KruskalChart& chart, const ChartPoint& p) {
  if (p.kind != ChartKind::Kruskal || p.index != chart.index()) {
    throw DomainError("point is not in Kruskal chart " + std::to_string(chart.index()));
  }
  const auto [um, up] = kruskal_logs(p);
  if (um.sign == 0 || up.sign == 0) {
    throw SingularChartError("t is not defined on the horizon axes of Kruskal chart " +
                             std::to_string(chart.index()));
  }
  return chart.coefficient() * (up.log_abs - um.log_abs);
}

std::array<int, 2> kruskal_signs(int chart, RegionId region, bool primed) {
  require_chart_index(chart);
  if (region.index != chart && region.index != chart + 1) {
    throw DomainError("Kruskal chart " + std::to_string(chart) + " does not cover region " +
                      std::string(roman(region)));
  }
  // a_1, a_3 < 0 and a_2 > 0.
  const int s = chart == 2 ? 1 : -1;
  const int o = primed ? -1 : 1;
  if (region.is_static()) return {s * o, -s * o};
  return {-s * o, -s * o};
}

KruskalLocation locate(const KruskalChart& chart, int sign_u_minus, int sign_u_plus) {
  KruskalLocation loc;
  loc.horizon = chart.index();
  const int s = chart.coefficient() > 0.0 ? 1 : -1;
  if (sign_u_minus == 0 && sign_u_plus == 0) {
    loc.kind = KruskalLocation::Kind::Bifurcation;
    return loc;
  }
  if (sign_u_plus == 0) {
    loc.kind = KruskalLocation::Kind::Horizon;
    loc.on_u_plus_axis = true;
    loc.plain = sign_u_minus == -s;
    return loc;
  }
  if (sign_u_minus == 0) {
    loc.kind = KruskalLocation::Kind::Horizon;
    loc.on_u_plus_axis = false;
    loc.plain = sign_u_plus == s;
    return loc;
  }
  loc.kind = KruskalLocation::Kind::Region;
  loc.region = chart.region_for_sign(sign_u_minus * sign_u_plus);
  loc.primed = sign_u_plus != kruskal_signs(chart.index(), loc.region, false)[0];
  return loc;
}

std::string region_label(RegionId region, bool primed) {
  std::string out(roman(region));
  if (primed) out += "'";
  return out;
}

std::string horizon_label(int horizon, bool on_u_plus_axis, bool plain) {
  const bool future = on_u_plus_axis ? horizon == 3 : horizon != 3;
  std::string name = "H" + std::to_string(horizon) + (future ? "+" : "-");
  return plain ? name : "-" + name;
}

std::string label(const KruskalLocation& loc) {
  switch (loc.kind) {
    case KruskalLocation::Kind::Region:
      return region_label(loc.region, loc.primed);
    case KruskalLocation::Kind::Horizon:
      return horizon_label(loc.horizon, loc.on_u_plus_axis, loc.plain);
    case KruskalLocation::Kind::Bifurcation:
      return "S" + std::to_string(loc.horizon);
  }
  return "?";
}

ChartPoint to_ef_retarded(const ChartPoint& p, const TortoiseMap& map) {
  require_rnds(p, map);
  ChartPoint out = p;
  out.kind = ChartKind::EFRetarded;
  out.coords = {p.coords[0] - map(p.coords[1]), p.coords[1]};
  return out;
}

ChartPoint to_ef_advanced(const ChartPoint& p, const TortoiseMap& map) {
  require_rnds(p, map);
  ChartPoint out = p;
  out.kind = ChartKind::EFAdvanced;
  out.coords = {p.coords[0] + map(p.coords[1]), p.coords[1]};
  return out;
}

ChartPoint to_double_null(const ChartPoint& p, const TortoiseMap& map) {
  require_rnds(p, map);
  const double rs = map(p.coords[1]);
  ChartPoint out = p;
  out.kind = ChartKind::DoubleNull;
  out.coords = {p.coords[0] - rs, p.coords[0] + rs};
  return out;
}

ChartPoint to_kruskal(const ChartPoint& p, const KruskalChart& chart) {
  const int i = chart.index();
  const double a_i = chart.coefficient();
  switch (p.kind) {
    case ChartKind::Kruskal:
      if (p.index != i) {
        throw DomainError("Kruskal chart " + std::to_string(p.index) + " → " +
                          std::to_string(i) + " needs an atlas transition");
      }
      return p;
    case ChartKind::RNdS:
      return to_kruskal(to_double_null(p, chart.tortoise()), chart);
    case ChartKind::DoubleNull: {
      const RegionId region{p.index};
      const auto beta = kruskal_signs(i, region, p.primed);
      const SignedLog um{beta[1], -p.coords[0] / (2.0 * a_i)};
      const SignedLog up{beta[0], p.coords[1] / (2.0 * a_i)};
      return kruskal_point(i, um, up, p.omega);
    }
    case ChartKind::EFRetarded:
    case ChartKind::EFAdvanced: {
      const bool retarded = p.kind == ChartKind::EFRetarded;
      const double r = p.coords[1];
      const SignedLog h = chart.log_H(r);
      const RegionId origin{p.index};
      if (!origin.valid()) throw DomainError("region index must be in 1..4");
      // Nearest region of this chart along the EF chain.
      const RegionId anchor{std::clamp(origin.index, i, i + 1)};
      const bool primed = ef_orientation(retarded, origin, p.primed, anchor);
      const auto beta = kruskal_signs(i, anchor, primed);
      if (retarded) {
        const SignedLog um{beta[1], -p.coords[0] / (2.0 * a_i)};
        const SignedLog up{h.sign * um.sign, h.log_abs - um.log_abs};
        return kruskal_point(i, um, up, p.omega);
      }
      const SignedLog up{beta[0], p.coords[0] / (2.0 * a_i)};
      const SignedLog um{h.sign * up.sign, h.log_abs - up.log_abs};
      return kruskal_point(i, um, up, p.omega);
    }
  }
  throw DomainError("unknown chart kind");
}

ChartPoint to_rnds(const ChartPoint& p, const TortoiseMap& map) {
  ChartPoint out;
  out.kind = ChartKind::RNdS;
  out.omega = p.omega;
  switch (p.kind) {
    case ChartKind::RNdS:
      require_rnds(p, map);
      return p;
    case ChartKind::EFRetarded:
    case ChartKind::EFAdvanced: {
      const bool retarded = p.kind == ChartKind::EFRetarded;
      const double r = p.coords[1];
      const RegionId region = map.region_of(r);
      if (!region.valid()) {
        throw SingularChartError("EF point sits on a horizon (r = " + std::to_string(r) +
                                 "); t is undefined there");
      }
      const double rs = map(r);
      out.index = region.index;
      out.primed = ef_orientation(retarded, RegionId{p.index}, p.primed, region);
      out.coords = {retarded ? p.coords[0] + rs : p.coords[0] - rs, r};
      return out;
    }
    case ChartKind::DoubleNull: {
      const RegionId region{p.index};
      const double rs = 0.5 * (p.coords[1] - p.coords[0]);
      out.index = region.index;
      out.primed = p.primed;
      out.coords = {0.5 * (p.coords[0] + p.coords[1]), map.invert(region, rs)};
      return out;
    }
    case ChartKind::Kruskal: {
      const KruskalChart chart(map, p.index);
      const auto [um, up] = kruskal_logs(p);
      const KruskalLocation loc = locate(chart, um.sign, up.sign);
      if (loc.kind != KruskalLocation::Kind::Region) {
        throw SingularChartError("Kruskal point lies on " + label(loc) +
                                 "; the (t, r) chart does not cover it");
      }
      out.index = loc.region.index;
      out.primed = loc.primed;
      out.coords = {kruskal_time(chart, p), chart.radius(um * up)};
      return out;
    }
  }
  throw DomainError("unknown chart kind");
}

double radius_of(const ChartPoint& p, const TortoiseMap& map) {
  switch (p.kind) {
    case ChartKind::RNdS:
    case ChartKind::EFRetarded:
    case ChartKind::EFAdvanced:
      return p.coords[1];
    case ChartKind::DoubleNull:
      return map.invert(RegionId{p.index}, 0.5 * (p.coords[1] - p.coords[0]));
    case ChartKind::Kruskal: {
      const KruskalChart chart(map, p.index);
      const auto [um, up] = kruskal_logs(p);
      return chart.radius(um * up);
    }
  }
  throw DomainError("unknown chart kind");
}

double MetricValue::determinant() const noexcept {
  auto m = g;
  double det = 1.0;
  for (size_t c = 0; c < 4; ++c) {
    size_t pivot = c;
    for (size_t r = c + 1; r < 4; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[pivot][c])) pivot = r;
    }
    if (m[pivot][c] == 0.0) return 0.0;
    if (pivot != c) {
      std::swap(m[pivot], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < 4; ++r) {
      const double k = m[r][c] / m[c][c];
      for (size_t k2 = c; k2 < 4; ++k2) m[r][k2] -= k * m[c][k2];
    }
  }
  return det;
}

double MetricValue::apply(const std::array<double, 4>& v,
                          const std::array<double, 4>& w) const noexcept {
  double sum = 0.0;
  for (size_t a = 0; a < 4; ++a) {
    for (size_t b = 0; b < 4; ++b) sum += g[a][b] * v[a] * w[b];
  }
  return sum;
}

MetricValue metric_at(const ChartPoint& p, const TortoiseMap& map) {
  const BlackHoleParams& params = map.params();
  const double theta = p.omega.theta;
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw DomainError("θ must lie in (0, π)");
  }
  const double r = radius_of(p, map);
  MetricValue m;
  m.g[2][2] = -r * r;
  m.g[3][3] = -r * r * std::sin(theta) * std::sin(theta);
  if (p.kind == ChartKind::Kruskal) {
    const KruskalChart chart(map, p.index);
    const double half_g = 0.5 * chart.metric_coefficient(r);
    m.g[0][1] = m.g[1][0] = half_g;
    return m;
  }
  if (!map.region_of(r).valid()) {
    throw SingularChartError("metric requested on a horizon in a chart that does not cover it");
  }
  const double f = horizon_function(params, r);
  switch (p.kind) {
    case ChartKind::RNdS:
      m.g[0][0] = f;
      m.g[1][1] = -1.0 / f;
      break;
    case ChartKind::EFRetarded:
      m.g[0][0] = f;
      m.g[0][1] = m.g[1][0] = 1.0;
      break;
    case ChartKind::EFAdvanced:
      m.g[0][0] = f;
      m.g[0][1] = m.g[1][0] = -1.0;
      break;
    case ChartKind::DoubleNull:
      m.g[0][1] = m.g[1][0] = 0.5 * f;
      break;
    case ChartKind::Kruskal:
      break;
  }
  return m;
}

ChristoffelTable christoffel_rnds(const BlackHoleParams& params, double r, double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) {
    throw DomainError("θ must lie in (0, π)");
  }
  const double f = horizon_function(params, r);
  if (std::abs(f) <= 1e-14) {
    throw SingularChartError("f(r) vanishes at r = " + std::to_string(r));
  }
  const double fp = horizon_function_derivative(params, r);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  ChristoffelTable g{};
  g[0][0][1] = g[0][1][0] = fp / (2.0 * f);
  g[1][1][1] = -fp / (2.0 * f);
  g[1][0][0] = f * fp / 2.0;
  g[1][2][2] = -r * f;
  g[1][3][3] = -r * f * s * s;
  g[2][1][2] = g[2][2][1] = 1.0 / r;
  g[2][3][3] = -c * s;
  g[3][1][3] = g[3][3][1] = 1.0 / r;
  g[3][2][3] = g[3][3][2] = c / s;
  return g;
}

}  // namespace rnds
