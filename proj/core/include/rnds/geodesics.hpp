#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rnds/charts.hpp"
#include "rnds/errors.hpp"

namespace rnds {

/// One sample along a geodesic. velocity holds the derivatives of the
/// point's two non-angular coordinates with respect to τ.
struct GeodesicState {
  double tau = 0.0;
  ChartPoint point;
  std::array<double, 2> velocity{};
  std::array<double, 2> angular_velocity{};  ///< (dθ/dτ, dφ/dτ)
  double r = 0.0;
  double r_dot = 0.0;
  double energy = 0.0;   ///< g(γ', γ') in the current chart
  double killing = 0.0;  ///< g(∂t, γ'), equal to f dt/dτ where t exists
};

struct GeodesicEvent {
  enum class Kind { HorizonCrossing, TurningPoint, ChartSwitch, Singularity, Scri };
  Kind kind = Kind::HorizonCrossing;
  double tau = 0.0;
  double r = 0.0;
  std::string label;
};

[[nodiscard]] std::string_view to_string(GeodesicEvent::Kind kind) noexcept;

enum class Termination { Singularity, Scri, Budget, TurningLimit };

[[nodiscard]] std::string_view to_string(Termination t) noexcept;

struct GeodesicTrajectory {
  std::string kind;
  std::vector<GeodesicState> samples;
  std::vector<GeodesicEvent> events;
  Termination termination = Termination::Budget;
  double energy = 0.0;   ///< E at the start
  double killing = 0.0;  ///< g(∂t, γ') at the start; C is its square
};

/// Thrown when the integrator cannot continue; carries everything up to
/// the last good state.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, GeodesicTrajectory partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const GeodesicTrajectory& partial() const noexcept { return partial_; }

 private:
  GeodesicTrajectory partial_;
};

struct IntegrationOptions {
  double tol_rel = 1e-10;
  double tol_abs = 1e-12;
  double tau_max = 100.0;            ///< affine-parameter budget
  std::size_t max_steps = 2'000'000;
  int max_turns = 4;                 ///< stop after this many turning points
  double scri_radius_factor = 1e3;   ///< r beyond factor·r3 counts as ℐ
  double sample_dtau = 0.0;          ///< 0 keeps every accepted step
  double switch_fraction = 0.05;     ///< leave (t, r) when |f| < fraction·max|f|
};

enum class NullFamily { Yminus, Yplus };

/// Integral curve of ±Y∓ through an RNdS point. Closed form: u- (Y-) or u+
/// (Y+) is constant, dr/dτ = ±1 and the samples live in the matching EF chart.
/// direction +1 follows Y∓ itself, -1 its negative.
[[nodiscard]] GeodesicTrajectory radial_null_trace(const TortoiseMap& map,
                                                   const ChartPoint& start, NullFamily family,
                                                   int direction,
                                                   const IntegrationOptions& options = {},
                                                   std::size_t samples = 200);

/// Generator of the horizon r = r_i: U- = 0, U+ = u0 + τ/(2a_i) in Kruskal
/// chart i (or the mirror branch U+ = 0 when on_u_minus_axis is false).
[[nodiscard]] GeodesicTrajectory horizon_generator(const TortoiseMap& map, int i, double u0,
                                                   double tau_max = 1.0,
                                                   std::size_t samples = 101,
                                                   bool on_u_minus_axis = true);

/// Radial timelike geodesic from an RNdS point with (dt/dτ, dr/dτ).
/// Requires f ≠ 0 at the start and E = f t'² - r'²/f > 0. Crosses horizons
/// through EF or Kruskal charts and logs turning points of r'² = C - fE.
[[nodiscard]] GeodesicTrajectory radial_timelike_trace(const TortoiseMap& map,
                                                       const ChartPoint& start, double t_dot,
                                                       double r_dot,
                                                       const IntegrationOptions& options = {});

/// Circular null orbit r = P2, θ = π/2, tangent ∂t ± (√f/r)∂φ.
[[nodiscard]] GeodesicTrajectory photon_orbit(const TortoiseMap& map, int sense = 1,
                                              double tau_max = 10.0, std::size_t samples = 101);

/// Same construction at an arbitrary radius. DomainError unless f(r) > 0
/// and r f' - 2f vanishes there to 1e-10.
[[nodiscard]] GeodesicTrajectory photon_orbit_at(const TortoiseMap& map, double r,
                                                 int sense = 1, double tau_max = 10.0,
                                                 std::size_t samples = 101);

/// Largest root of C - f(r)E strictly below r_from inside region I, where
/// infalling radial timelike motion turns around.
[[nodiscard]] double turning_radius(const TortoiseMap& map, double killing, double energy,
                                    double r_from);

struct TimelikeStart {
  ChartPoint point;
  double t_dot = 0.0;
  double r_dot = 0.0;
};

/// Independent integrations spread over RNDS_ATLAS_THREADS workers
/// (hardware concurrency when unset). Results keep input order.
[[nodiscard]] std::vector<GeodesicTrajectory> radial_timelike_batch(
    const TortoiseMap& map, const std::vector<TimelikeStart>& starts,
    const IntegrationOptions& options = {});

/// Worker count honoring RNDS_ATLAS_THREADS.
[[nodiscard]] unsigned thread_limit() noexcept;

}  // namespace rnds
