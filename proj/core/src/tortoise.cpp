#include "rnds/tortoise.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "rnds/errors.hpp"

namespace rnds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHorizonSnap = 1e-14;
constexpr double kNearHorizon = 1e-8;

}  // namespace

std::string_view roman(RegionId region) noexcept {
  switch (region.index) {
    case 1:
      return "I";
    case 2:
      return "II";
    case 3:
      return "III";
    case 4:
      return "IV";
    default:
      return "?";
  }
}

double TortoiseValue::as_double() const noexcept {
  switch (kind) {
    case Kind::PlusInfinity:
      return kInf;
    case Kind::MinusInfinity:
      return -kInf;
    case Kind::Finite:
      break;
  }
  return value;
}

TortoiseMap::TortoiseMap(const BlackHoleParams& params, const HorizonStructure& structure)
    : params_(params) {
  if (!structure.three_horizons()) {
    throw DomainError("tortoise coordinate requires three distinct horizons, got " +
                      std::string(to_string(structure.classification)));
  }
  roots_ = structure.roots();
  for (size_t i = 0; i < 4; ++i) {
    double denom = 1.0;
    for (size_t j = 0; j < 4; ++j) {
      if (j != i) denom *= roots_[i] - roots_[j];
    }
    if (denom == 0.0 || !std::isfinite(denom)) {
      throw NumericalError("degenerate horizon roots: tortoise coefficient is singular");
    }
    coeff_[i] = -roots_[i] * roots_[i] / (params_.lambda * denom);
  }
  p2_ = photon_sphere(params_, structure).radius;
  a_ = 0.0;
  for (size_t i = 0; i < 4; ++i) a_ -= coeff_[i] * std::log(std::abs(p2_ - roots_[i]));
  b_ = a_;
  for (size_t i = 0; i < 4; ++i) b_ += coeff_[i] * std::log(std::abs(roots_[i]));
}

RegionId TortoiseMap::region_of(double r) const noexcept {
  if (!(r > 0.0)) return RegionId{0};
  for (int i = 1; i <= 3; ++i) {
    if (r == roots_[static_cast<size_t>(i)]) return RegionId{0};
  }
  if (r < roots_[1]) return RegionId{1};
  if (r < roots_[2]) return RegionId{2};
  if (r < roots_[3]) return RegionId{3};
  return RegionId{4};
}

std::array<double, 2> TortoiseMap::interval(RegionId region) const {
  switch (region.index) {
    case 1:
      return {0.0, roots_[1]};
    case 2:
      return {roots_[1], roots_[2]};
    case 3:
      return {roots_[2], roots_[3]};
    case 4:
      return {roots_[3], kInf};
    default:
      throw DomainError("region index must be in 1..4");
  }
}

std::array<double, 2> TortoiseMap::star_interval(RegionId region) const {
  switch (region.index) {
    case 1:
      return {b_, kInf};
    case 2:
    case 3:
      return {-kInf, kInf};
    case 4:
      return {a_, kInf};
    default:
      throw DomainError("region index must be in 1..4");
  }
}

double TortoiseMap::regular_part(int i, double r) const {
  double sum = a_;
  for (int j = 0; j < 4; ++j) {
    if (j != i) sum += coeff_[static_cast<size_t>(j)] * std::log(std::abs(r - roots_[static_cast<size_t>(j)]));
  }
  return sum;
}

TortoiseValue TortoiseMap::value(double r) const {
  if (!(r > 0.0)) {
    throw DomainError("tortoise coordinate needs r > 0, got " + std::to_string(r));
  }
  for (size_t i = 1; i <= 3; ++i) {
    if (std::abs(r - roots_[i]) <= kHorizonSnap * roots_[i]) {
      // a_i ln|r - r_i| → -a_i · ∞
      return {coeff_[i] < 0.0 ? TortoiseValue::Kind::PlusInfinity
                              : TortoiseValue::Kind::MinusInfinity,
              0.0};
    }
  }
  double sum = a_;
  if (r < 0.5 * roots_[1]) {
    // Expand around b so the small increment r³/(3Q²) + ... is not lost to the logs.
    double inc = 0.0;
    for (size_t i = 0; i < 4; ++i) inc += coeff_[i] * std::log1p(-r / roots_[i]);
    return {TortoiseValue::Kind::Finite, b_ + inc};
  }
  if (r > 2.0 * roots_[3]) {
    // Σ a_i = 0 lets the ln r terms cancel analytically.
    for (size_t i = 0; i < 4; ++i) sum += coeff_[i] * std::log1p(-roots_[i] / r);
  } else {
    for (size_t i = 0; i < 4; ++i) sum += coeff_[i] * std::log(std::abs(r - roots_[i]));
  }
  return {TortoiseValue::Kind::Finite, sum};
}

double TortoiseMap::operator()(double r) const {
  const TortoiseValue v = value(r);
  if (!v.finite()) {
    throw SingularChartError("r = " + std::to_string(r) +
                             " lies on a horizon; use a Kruskal chart there");
  }
  return v.value;
}

double TortoiseMap::invert_near_horizon(int horizon, int side, double r_star) const {
  const double rh = roots_[static_cast<size_t>(horizon)];
  const double ah = coeff_[static_cast<size_t>(horizon)];
  double d = std::exp((r_star - regular_part(horizon, rh)) / ah);
  for (int it = 0; it < 50; ++it) {
    const double next = std::exp((r_star - regular_part(horizon, rh + side * d)) / ah);
    if (std::abs(next - d) <= 1e-16 * d) {
      d = next;
      break;
    }
    d = next;
  }
  return rh + side * d;
}

double TortoiseMap::invert(RegionId region, double r_star) const {
  const auto [lo_star, hi_star] = star_interval(region);
  if (!(r_star > lo_star && r_star < hi_star)) {
    throw DomainError("r_* = " + std::to_string(r_star) + " is outside the r_* range of region " +
                      std::string(roman(region)));
  }
  auto [lo, hi] = interval(region);
  const int i = region.index;

  // Logarithmic end zones: solve the dominant term analytically.
  const auto near = [&](int horizon, int side) -> std::optional<double> {
    const double rh = roots_[static_cast<size_t>(horizon)];
    const double ah = coeff_[static_cast<size_t>(horizon)];
    const double d = std::exp((r_star - regular_part(horizon, rh)) / ah);
    if (d < kNearHorizon * rh) return invert_near_horizon(horizon, side, r_star);
    return std::nullopt;
  };
  if (i >= 2) {
    if (auto r = near(i - 1, +1)) return *r;
  }
  if (i <= 3) {
    if (auto r = near(i, -1)) return *r;
  }

  auto g = [&](double r) {
    if (r <= 0.0) return b_ - r_star;
    return value(r).as_double() - r_star;
  };
  if (!std::isfinite(hi)) {
    hi = 2.0 * roots_[3];
    while (g(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw NumericalError("tortoise inversion diverged in region IV");
    }
  }

  // Bisect until the bracket is 1e-3 relative, then safeguarded Newton.
  double glo = g(lo);
  for (int it = 0; it < 200 && (hi - lo) > 1e-3 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double gr = g(r);
    if (gr == 0.0) return r;
    if ((gr > 0.0) == (glo > 0.0)) {
      lo = r;
      glo = gr;
    } else {
      hi = r;
    }
    const double step = gr * horizon_function(params_, r);  // g' = 1/f
    double next = r - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - r) <= 4.0 * std::numeric_limits<double>::epsilon() * r) {
      return next;
    }
    r = next;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return r;
}

TortoiseMap build_tortoise(const HorizonStructure& structure, const BlackHoleParams& params) {
  return TortoiseMap(params, structure);
}

}  // namespace rnds
