#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace rnds {

/// Mass, charge and cosmological constant in geometric units (G = c = 1).
struct BlackHoleParams {
  double mass = 0.0;
  double charge = 0.0;
  double lambda = 0.0;

  /// M > 0, Λ > 0, Q ≠ 0, all finite.
  [[nodiscard]] bool satisfies_standing_assumptions() const noexcept;
};

/// Relative width of the band around equality in which a three-horizon
/// clause is reported as degenerate instead of true/false.
inline constexpr double kDegeneracyTolerance = 1e-9;

/// Quantities that decide the horizon count.
///
/// R = 1/sqrt(6Λ) is the inflection point of P'. When the discriminant
/// Δ = 1 - 12 Q² Λ is nonnegative, m1,m2 = R sqrt(1 ∓ sqrt Δ) and the mass
/// window is (M1, M2) with Mi = mi - 2Λ mi³.
struct DerivedThresholds {
  double critical_radius = 0.0;
  double discriminant = 0.0;
  std::optional<double> m1;
  std::optional<double> m2;
  std::optional<double> mass_lower;
  std::optional<double> mass_upper;
};

[[nodiscard]] DerivedThresholds derived_thresholds(const BlackHoleParams& params);

/// f(r) = 1 - 2M/r + Q²/r² - Λr². Throws DomainError for r <= 0.
[[nodiscard]] double horizon_function(const BlackHoleParams& params, double r);
/// f'(r). Throws DomainError for r <= 0.
[[nodiscard]] double horizon_function_derivative(const BlackHoleParams& params, double r);
/// f''(r). Throws DomainError for r <= 0.
[[nodiscard]] double horizon_function_second_derivative(const BlackHoleParams& params,
                                                        double r);
/// P(r) = r² f(r) = -Λr⁴ + r² - 2Mr + Q², defined for every real r.
[[nodiscard]] double horizon_polynomial(const BlackHoleParams& params, double r) noexcept;
[[nodiscard]] double horizon_polynomial_derivative(const BlackHoleParams& params,
                                                   double r) noexcept;

/// Radial coefficient of the acceleration of the rotational null field,
/// f (f'/2 - f/r). Vanishes exactly at the horizons and at P1, P2.
[[nodiscard]] double photon_acceleration_factor(const BlackHoleParams& params, double r);

/// S(r) = -r² + 3Mr - 2Q², whose roots are the circular null orbit candidates.
[[nodiscard]] double photon_polynomial(const BlackHoleParams& params, double r) noexcept;

struct GcReport {
  bool charge_nonzero = false;
  bool lambda_in_range = false;  ///< 0 < Λ < 1/(12Q²)
  bool mass_in_range = false;    ///< M1 < M < M2
  bool degenerate = false;       ///< some clause sits within kDegeneracyTolerance of equality
  bool holds = false;
};

/// Evaluates the three-horizon conditions clause by clause. Never throws;
/// violations of the standing assumptions show up as false clauses.
[[nodiscard]] GcReport check_gc_conditions(const BlackHoleParams& params) noexcept;

enum class HorizonClass { ThreeHorizons, TwoHorizonsDegenerate, OneHorizon, Invalid };

[[nodiscard]] std::string_view to_string(HorizonClass c) noexcept;

struct PolynomialRoot {
  double value = 0.0;
  int multiplicity = 1;
};

struct HorizonStructure {
  HorizonClass classification = HorizonClass::Invalid;
  /// Positive roots of P in increasing order.
  std::vector<PolynomialRoot> positive_roots;
  /// The single negative root r0 of P (P(-r) has one sign change).
  std::optional<double> negative_root;
  /// P1 <= P2, present iff 9M² - 8Q² > 0.
  std::optional<double> photon_inner;
  std::optional<double> photon_outer;

  [[nodiscard]] bool three_horizons() const noexcept {
    return classification == HorizonClass::ThreeHorizons;
  }
  /// (r0, r1, r2, r3). Throws DomainError unless three_horizons().
  [[nodiscard]] std::array<double, 4> roots() const;
};

/// Locates the real roots of P by following the variation of P' around R,
/// then polishes them with Newton steps.
[[nodiscard]] HorizonStructure classify_horizons(const BlackHoleParams& params);

struct PhotonSphere {
  double inner_candidate = 0.0;  ///< P1, inside (r1, r2); not a photon sphere
  double radius = 0.0;           ///< P2, inside (r2, r3)
};

/// Roots of S with the ordering r1 < P1 < r2 < P2 < r3 verified.
/// Throws DomainError unless three horizons, NumericalError if the ordering
/// or the vanishing of r f' - 2f fails.
[[nodiscard]] PhotonSphere photon_sphere(const BlackHoleParams& params,
                                         const HorizonStructure& structure);

}  // namespace rnds
