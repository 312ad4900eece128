#include "rnds/horizons.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "numeric.hpp"
#include "rnds/errors.hpp"

namespace rnds {

namespace {

using detail::bisect;
using detail::newton_polish;
using detail::sqr;

void require_positive_radius(double r) {
  if (!(r > 0.0)) {
    throw DomainError("radius must be positive, got " + std::to_string(r));
  }
}

bool near_equal(double a, double b) {
  return std::abs(a - b) <= kDegeneracyTolerance * std::max(std::abs(a), std::abs(b));
}

double polish_root(const BlackHoleParams& p, double x) {
  return newton_polish([&](double r) { return horizon_polynomial(p, r); },
                       [&](double r) { return horizon_polynomial_derivative(p, r); }, x);
}

double root_in(const BlackHoleParams& p, double lo, double hi) {
  return polish_root(p, bisect([&](double r) { return horizon_polynomial(p, r); }, lo, hi));
}

// Bound beyond which -Λr⁴ dominates on both sides of the axis.
double root_bound(const BlackHoleParams& p) {
  double bound = 2.0 * std::max(1.0, std::sqrt(2.0 / p.lambda));
  while (horizon_polynomial(p, bound) >= 0.0 || horizon_polynomial(p, -bound) >= 0.0) {
    bound *= 2.0;
  }
  return bound;
}

// Positive roots s1 < R < s2 of P'(r) = -4Λr³ + 2r - 2M, assuming P'(R) > 0.
std::array<double, 2> critical_points(const BlackHoleParams& p, double critical_radius,
                                      double bound) {
  auto dp = [&](double r) { return horizon_polynomial_derivative(p, r); };
  return {bisect(dp, 0.0, critical_radius), bisect(dp, critical_radius, bound)};
}

}  // namespace

bool BlackHoleParams::satisfies_standing_assumptions() const noexcept {
  return std::isfinite(mass) && std::isfinite(charge) && std::isfinite(lambda) && mass > 0.0 &&
         lambda > 0.0 && charge != 0.0;
}

DerivedThresholds derived_thresholds(const BlackHoleParams& p) {
  DerivedThresholds t;
  t.critical_radius = 1.0 / std::sqrt(6.0 * p.lambda);
  t.discriminant = 1.0 - 12.0 * sqr(p.charge) * p.lambda;
  if (t.discriminant >= 0.0) {
    const double root = std::sqrt(t.discriminant);
    const double m1 = t.critical_radius * std::sqrt(1.0 - root);
    const double m2 = t.critical_radius * std::sqrt(1.0 + root);
    t.m1 = m1;
    t.m2 = m2;
    t.mass_lower = m1 - 2.0 * p.lambda * m1 * m1 * m1;
    t.mass_upper = m2 - 2.0 * p.lambda * m2 * m2 * m2;
  }
  return t;
}

double horizon_function(const BlackHoleParams& p, double r) {
  require_positive_radius(r);
  return 1.0 - 2.0 * p.mass / r + sqr(p.charge) / (r * r) - p.lambda * r * r;
}

double horizon_function_derivative(const BlackHoleParams& p, double r) {
  require_positive_radius(r);
  return 2.0 * p.mass / (r * r) - 2.0 * sqr(p.charge) / (r * r * r) - 2.0 * p.lambda * r;
}

double horizon_function_second_derivative(const BlackHoleParams& p, double r) {
  require_positive_radius(r);
  return -4.0 * p.mass / (r * r * r) + 6.0 * sqr(p.charge) / (r * r * r * r) - 2.0 * p.lambda;
}

double horizon_polynomial(const BlackHoleParams& p, double r) noexcept {
  // Horner form of -Λr⁴ + r² - 2Mr + Q².
  return ((-p.lambda * r * r + 1.0) * r - 2.0 * p.mass) * r + sqr(p.charge);
}

double horizon_polynomial_derivative(const BlackHoleParams& p, double r) noexcept {
  return -4.0 * p.lambda * r * r * r + 2.0 * r - 2.0 * p.mass;
}

double photon_acceleration_factor(const BlackHoleParams& p, double r) {
  const double f = horizon_function(p, r);
  return f * (0.5 * horizon_function_derivative(p, r) - f / r);
}

double photon_polynomial(const BlackHoleParams& p, double r) noexcept {
  return -r * r + 3.0 * p.mass * r - 2.0 * sqr(p.charge);
}

GcReport check_gc_conditions(const BlackHoleParams& p) noexcept {
  GcReport report;
  report.charge_nonzero = p.charge != 0.0 && std::isfinite(p.charge);
  if (!report.charge_nonzero || !(p.lambda > 0.0) || !(p.mass > 0.0) ||
      !std::isfinite(p.lambda) || !std::isfinite(p.mass)) {
    return report;
  }
  const double lambda_max = 1.0 / (12.0 * sqr(p.charge));
  report.lambda_in_range = p.lambda < lambda_max;
  bool degenerate = near_equal(p.lambda, lambda_max);
  const DerivedThresholds t = derived_thresholds(p);
  if (t.mass_lower && t.mass_upper) {
    report.mass_in_range = *t.mass_lower < p.mass && p.mass < *t.mass_upper;
    degenerate = degenerate || near_equal(p.mass, *t.mass_lower) ||
                 near_equal(p.mass, *t.mass_upper);
  }
  report.degenerate = degenerate;
  report.holds = report.charge_nonzero && report.lambda_in_range && report.mass_in_range;
  return report;
}

std::string_view to_string(HorizonClass c) noexcept {
  switch (c) {
    case HorizonClass::ThreeHorizons:
      return "three_horizons";
    case HorizonClass::TwoHorizonsDegenerate:
      return "two_horizons_degenerate";
    case HorizonClass::OneHorizon:
      return "one_horizon";
    case HorizonClass::Invalid:
      return "invalid";
  }
  return "invalid";
}

std::array<double, 4> HorizonStructure::roots() const {
  if (!three_horizons() || positive_roots.size() != 3 || !negative_root) {
    throw DomainError("horizon structure does not have three distinct positive roots");
  }
  return {*negative_root, positive_roots[0].value, positive_roots[1].value,
          positive_roots[2].value};
}

HorizonStructure classify_horizons(const BlackHoleParams& p) {
  HorizonStructure s;
  if (!p.satisfies_standing_assumptions()) {
    s.classification = HorizonClass::Invalid;
    return s;
  }

  const double disc_s = 9.0 * sqr(p.mass) - 8.0 * sqr(p.charge);
  if (disc_s > 0.0) {
    const double root = std::sqrt(disc_s);
    s.photon_inner = 0.5 * (3.0 * p.mass - root);
    s.photon_outer = 0.5 * (3.0 * p.mass + root);
  }

  const double bound = root_bound(p);
  s.negative_root = root_in(p, -bound, 0.0);

  const DerivedThresholds t = derived_thresholds(p);
  const GcReport gc = check_gc_conditions(p);
  const double big_r = t.critical_radius;

  // P decreases from P(0) = Q² on [0, ∞) when P'(R) <= 0: a single root.
  if (!(horizon_polynomial_derivative(p, big_r) > 0.0)) {
    s.classification = HorizonClass::OneHorizon;
    s.positive_roots.push_back({root_in(p, 0.0, bound), 1});
    return s;
  }

  const auto [s1, s2] = critical_points(p, big_r, bound);
  const double p_s1 = horizon_polynomial(p, s1);
  const double p_s2 = horizon_polynomial(p, s2);

  const bool mass_degenerate =
      gc.degenerate && t.mass_lower && t.mass_upper &&
      (near_equal(p.mass, *t.mass_lower) || near_equal(p.mass, *t.mass_upper));

  if (mass_degenerate || p_s1 == 0.0 || p_s2 == 0.0) {
    // A local extremum of P touches zero: one double root plus one simple root.
    const bool at_s1 = (p_s1 == 0.0) ||
                       (p_s2 != 0.0 && t.mass_lower && near_equal(p.mass, *t.mass_lower));
    s.classification = HorizonClass::TwoHorizonsDegenerate;
    if (at_s1) {
      s.positive_roots.push_back({s1, 2});
      s.positive_roots.push_back({root_in(p, s2, bound), 1});
    } else {
      s.positive_roots.push_back({root_in(p, 0.0, s1), 1});
      s.positive_roots.push_back({s2, 2});
    }
    return s;
  }

  if (p_s1 > 0.0) {
    s.classification = HorizonClass::OneHorizon;
    s.positive_roots.push_back({root_in(p, s2, bound), 1});
  } else if (p_s2 < 0.0) {
    s.classification = HorizonClass::OneHorizon;
    s.positive_roots.push_back({root_in(p, 0.0, s1), 1});
  } else {
    s.classification = HorizonClass::ThreeHorizons;
    s.positive_roots.push_back({root_in(p, 0.0, s1), 1});
    s.positive_roots.push_back({root_in(p, s1, s2), 1});
    s.positive_roots.push_back({root_in(p, s2, bound), 1});
  }

  // Inside the degeneracy band of the Λ clause the roots cluster around R;
  // report them, but never as three distinct horizons.
  if (gc.degenerate && s.classification == HorizonClass::ThreeHorizons) {
    s.classification = HorizonClass::OneHorizon;
    s.positive_roots = {{s.positive_roots[1].value, 3}};
  }
  return s;
}

PhotonSphere photon_sphere(const BlackHoleParams& p, const HorizonStructure& structure) {
  if (!structure.three_horizons()) {
    throw DomainError("photon sphere requires the three-horizon configuration");
  }
  if (!structure.photon_inner || !structure.photon_outer) {
    throw NumericalError("9M^2 - 8Q^2 <= 0 with three horizons contradicts the root ordering");
  }
  const auto r = structure.roots();
  PhotonSphere ps{*structure.photon_inner, *structure.photon_outer};
  if (!(r[1] < ps.inner_candidate && ps.inner_candidate < r[2] && r[2] < ps.radius &&
        ps.radius < r[3])) {
    throw NumericalError("photon sphere candidates violate r1 < P1 < r2 < P2 < r3");
  }
  for (double x : {ps.inner_candidate, ps.radius}) {
    const double residual =
        x * horizon_function_derivative(p, x) - 2.0 * horizon_function(p, x);
    if (std::abs(residual) > 1e-10 * std::max(1.0, std::abs(horizon_function(p, x)))) {
      throw NumericalError("r f' - 2f does not vanish at a photon sphere candidate");
    }
  }
  return ps;
}

}  // namespace rnds
