#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "rnds/tortoise.hpp"

namespace rnds {

enum class ChartKind { RNdS, EFRetarded, EFAdvanced, DoubleNull, Kruskal };

[[nodiscard]] std::string_view to_string(ChartKind kind) noexcept;

/// Angular direction on the 2-sphere, poles excluded.
struct Angles {
  double theta = std::numbers::pi / 2.0;
  double phi = 0.0;
};

/// sign · e^{log_abs}; sign 0 means exactly zero.
struct SignedLog {
  int sign = 0;
  double log_abs = 0.0;

  [[nodiscard]] static SignedLog from(double x) noexcept;
  [[nodiscard]] double value() const noexcept;
  [[nodiscard]] SignedLog operator*(const SignedLog& o) const noexcept {
    return {sign * o.sign, log_abs + o.log_abs};
  }
};

/// Beyond this |log|U|| a Kruskal point also carries its log-domain pair.
inline constexpr double kLogDomainThreshold = 600.0;

/// A point of one chart. coords holds the non-angular pair:
///   RNdS (t, r), EFRetarded (u-, r), EFAdvanced (u+, r),
///   DoubleNull (u-, u+), Kruskal (U-, U+).
/// index is the region for RNdS, EF and DoubleNull points (for EF points the
/// region the chart was opened in) and the horizon index for Kruskal points.
/// primed is the time orientation of that region: unprimed means ∂t future
/// in I, III and ∂r future in II, IV.
struct ChartPoint {
  ChartKind kind = ChartKind::RNdS;
  int index = 3;
  bool primed = false;
  std::array<double, 2> coords{};
  Angles omega{};
  /// (U-, U+) in log form; set for Kruskal points with extreme exponents.
  std::optional<std::array<SignedLog, 2>> log_coords;
};

/// Kruskal–Szekeres data attached to the horizon r = r_i, i ∈ {1, 2, 3}.
/// Covers I_i ∪ {r_i} ∪ I_{i+1} with U+ U- = H_i(r),
/// H_i(r) = (-1)^j e^{r_*/a_i} on region j.
class KruskalChart {
 public:
  KruskalChart(const TortoiseMap& map, int i);

  [[nodiscard]] int index() const noexcept { return i_; }
  [[nodiscard]] const TortoiseMap& tortoise() const noexcept { return map_; }
  [[nodiscard]] double coefficient() const noexcept { return a_i_; }
  /// α_i = 1/(2a_i)
  [[nodiscard]] double alpha() const noexcept { return 0.5 / a_i_; }
  /// A_i = e^{a/a_i}
  [[nodiscard]] double amplitude() const noexcept { return std::exp(map_.a() / a_i_); }
  /// Open range of U+U-: (B, ∞), ℝ, (-∞, A) for i = 1, 2, 3.
  [[nodiscard]] std::array<double, 2> product_range() const noexcept;
  /// Regions i and i+1.
  [[nodiscard]] bool covers(RegionId region) const noexcept {
    return region.index == i_ || region.index == i_ + 1;
  }
  /// Closed r-domain endpoints (lower may be 0, upper may be inf; both excluded).
  [[nodiscard]] std::array<double, 2> radius_domain() const noexcept;

  [[nodiscard]] SignedLog log_H(double r) const;
  [[nodiscard]] double H(double r) const { return log_H(r).value(); }
  /// dH_i/dr at r_i = (-1)^{i+1} A_i Π_{j≠i} |r_i - r_j|^{a_j/a_i}.
  [[nodiscard]] double H_derivative_at_horizon() const;

  /// G(r) = -4 a_i² f(r) / H_i(r) with the common factor (r - r_i) cancelled.
  [[nodiscard]] double metric_coefficient(double r) const;
  /// d ln|G| / dr.
  [[nodiscard]] double metric_coefficient_log_derivative(double r) const;

  /// Region holding points with U+U- of the given nonzero sign.
  [[nodiscard]] RegionId region_for_sign(int product_sign) const noexcept;

  /// r with H_i(r) = product; exactly r_i for a zero product.
  [[nodiscard]] double radius(double product) const;
  [[nodiscard]] double radius(const SignedLog& product) const;

 private:
  TortoiseMap map_;
  int i_;
  double a_i_;
};

/// Kruskal radius from a coordinate pair (U-, U+).
[[nodiscard]] double kruskal_radius(const KruskalChart& chart, double u_minus, double u_plus);

/// t = a_i ln|U+/U-|. SingularChartError on the horizon axes.
[[nodiscard]] double kruskal_time(const KruskalChart& chart, const ChartPoint& p);

/// Signs (β+, β-) of the Kruskal embedding for region j of chart i with
/// the given orientation. β+β- = (-1)^j; ∂U- + ∂U+ is future pointing.
[[nodiscard]] std::array<int, 2> kruskal_signs(int chart, RegionId region, bool primed);

/// Where a Kruskal coordinate pair sits.
struct KruskalLocation {
  enum class Kind { Region, Horizon, Bifurcation };
  Kind kind = Kind::Region;
  RegionId region{};   ///< for Kind::Region
  bool primed = false; ///< for Kind::Region
  int horizon = 0;     ///< chart index for Horizon and Bifurcation
  bool on_u_plus_axis = false;  ///< U+ = 0 (otherwise U- = 0) for Kind::Horizon
  bool plain = true;   ///< half-axis bordering the unprimed static quadrant
};

[[nodiscard]] KruskalLocation locate(const KruskalChart& chart, int sign_u_minus,
                                     int sign_u_plus);

/// I, II', ..., H2+, -H1-, S3.
[[nodiscard]] std::string label(const KruskalLocation& loc);
[[nodiscard]] std::string region_label(RegionId region, bool primed);
/// Horizon half-axis names: U+ = 0 carries H1-, H2-, H3+; U- = 0 carries
/// H1+, H2+, H3-. The half not bordering the unprimed static quadrant gets
/// a leading "-".
[[nodiscard]] std::string horizon_label(int horizon, bool on_u_plus_axis, bool plain);

// Conversions from RNdS. All throw SingularChartError on a horizon and
// DomainError when r is outside the point's region.
[[nodiscard]] ChartPoint to_ef_retarded(const ChartPoint& p, const TortoiseMap& map);
[[nodiscard]] ChartPoint to_ef_advanced(const ChartPoint& p, const TortoiseMap& map);
[[nodiscard]] ChartPoint to_double_null(const ChartPoint& p, const TortoiseMap& map);

/// From an RNdS, EF or double-null point whose region is i or i+1, or from
/// an EF point sitting on r_i.
[[nodiscard]] ChartPoint to_kruskal(const ChartPoint& p, const KruskalChart& chart);

/// Kruskal point from log-domain coordinates; log_coords is filled in when
/// an exponent exceeds kLogDomainThreshold.
[[nodiscard]] ChartPoint kruskal_point(int chart, SignedLog u_minus, SignedLog u_plus,
                                       const Angles& omega = {});

/// Back to (t, r). For EF points that left their region and for Kruskal
/// points the region and orientation are recomputed.
[[nodiscard]] ChartPoint to_rnds(const ChartPoint& p, const TortoiseMap& map);

/// Radius of a point in any chart.
[[nodiscard]] double radius_of(const ChartPoint& p, const TortoiseMap& map);

/// Symmetric metric components in the point's own chart, coordinate order
/// (coords[0], coords[1], θ, φ), signature (+,-,-,-).
struct MetricValue {
  std::array<std::array<double, 4>, 4> g{};

  [[nodiscard]] double determinant() const noexcept;
  /// g(v, w)
  [[nodiscard]] double apply(const std::array<double, 4>& v,
                             const std::array<double, 4>& w) const noexcept;
};

/// Kruskal points are regular on horizons; the other charts throw
/// SingularChartError there.
[[nodiscard]] MetricValue metric_at(const ChartPoint& p, const TortoiseMap& map);

/// Γ^a_{bc} in (t, r, θ, φ).
using ChristoffelTable = std::array<std::array<std::array<double, 4>, 4>, 4>;

/// Nine nonzero symbols of the static metric. SingularChartError when f
/// vanishes within 1e-14, DomainError for r <= 0 or θ outside (0, π).
[[nodiscard]] ChristoffelTable christoffel_rnds(const BlackHoleParams& params, double r,
                                                double theta);

}  // namespace rnds
