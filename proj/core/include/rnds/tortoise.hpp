#pragma once

#include <array>
#include <string_view>

#include "rnds/horizons.hpp"

namespace rnds {

/// One of the four open radial intervals cut out by the horizons:
/// I1 = (0, r1), I2 = (r1, r2), I3 = (r2, r3), I4 = (r3, ∞).
struct RegionId {
  int index = 3;  // 1..4

  [[nodiscard]] bool is_static() const noexcept { return index == 1 || index == 3; }
  [[nodiscard]] bool is_dynamic() const noexcept { return !is_static(); }
  [[nodiscard]] bool valid() const noexcept { return index >= 1 && index <= 4; }
  friend bool operator==(RegionId, RegionId) = default;
};

[[nodiscard]] std::string_view roman(RegionId region) noexcept;

/// Either a finite tortoise value or a signed infinity (radius on a horizon).
struct TortoiseValue {
  enum class Kind { Finite, PlusInfinity, MinusInfinity };
  Kind kind = Kind::Finite;
  double value = 0.0;

  [[nodiscard]] bool finite() const noexcept { return kind == Kind::Finite; }
  /// The value, or ±inf for a horizon hit.
  [[nodiscard]] double as_double() const noexcept;
};

/// Closed-form Regge–Wheeler coordinate
///   r_*(r) = Σ a_i ln|r - r_i| + a,  a_i = -r_i²/Λ Π_{j≠i} 1/(r_i - r_j),
/// normalized so that r_*(P2) = 0. Immutable after construction.
class TortoiseMap {
 public:
  /// Throws DomainError unless the structure has three distinct horizons.
  TortoiseMap(const BlackHoleParams& params, const HorizonStructure& structure);

  [[nodiscard]] const BlackHoleParams& params() const noexcept { return params_; }
  /// (r0, r1, r2, r3)
  [[nodiscard]] const std::array<double, 4>& roots() const noexcept { return roots_; }
  [[nodiscard]] const std::array<double, 4>& coefficients() const noexcept { return coeff_; }
  [[nodiscard]] double coefficient(int i) const { return coeff_.at(static_cast<size_t>(i)); }
  /// lim r_* as r → ∞.
  [[nodiscard]] double a() const noexcept { return a_; }
  /// r_*(0).
  [[nodiscard]] double b() const noexcept { return b_; }
  [[nodiscard]] double photon_sphere_radius() const noexcept { return p2_; }

  /// Region containing r, or an invalid RegionId (index 0) on a horizon.
  [[nodiscard]] RegionId region_of(double r) const noexcept;
  /// Open r-interval of a region; the upper bound of region 4 is +inf.
  [[nodiscard]] std::array<double, 2> interval(RegionId region) const;
  /// Open r_*-interval of a region: (b, ∞), ℝ, ℝ, (a, ∞).
  [[nodiscard]] std::array<double, 2> star_interval(RegionId region) const;

  /// Tagged ±∞ within 1e-14 r_i of a horizon; DomainError for r <= 0.
  [[nodiscard]] TortoiseValue value(double r) const;
  /// Finite value; SingularChartError on a horizon.
  [[nodiscard]] double operator()(double r) const;

  /// Unique r in the region with r_*(r) = r_star. DomainError when r_star is
  /// outside the region's r_*-interval.
  [[nodiscard]] double invert(RegionId region, double r_star) const;

  /// Σ_{j≠i} a_j ln|r - r_j| + a, the part of r_* that stays finite at r_i.
  [[nodiscard]] double regular_part(int i, double r) const;

 private:
  double invert_near_horizon(int horizon, int side, double r_star) const;

  BlackHoleParams params_;
  std::array<double, 4> roots_{};
  std::array<double, 4> coeff_{};
  double a_ = 0.0;
  double b_ = 0.0;
  double p2_ = 0.0;
};

/// Convenience wrapper matching the classify → build pipeline.
[[nodiscard]] TortoiseMap build_tortoise(const HorizonStructure& structure,
                                         const BlackHoleParams& params);

}  // namespace rnds
