#include "rnds/geodesics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "numeric.hpp"

namespace rnds {

namespace {

using State = std::array<double, 4>;
namespace odeint = boost::numeric::odeint;

int sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

double wrap_angle(double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  double out = std::fmod(phi, two_pi);
  if (out < 0.0) out += two_pi;
  return out;
}

// Label of the horizon axis crossed between two Kruskal sign pairs.
std::string crossing_label(const KruskalChart& chart, std::array<int, 2> before,
                           std::array<int, 2> after) {
  const int sm = before[0] == after[0] ? before[0] : 0;
  const int sp = before[1] == after[1] ? before[1] : 0;
  return label(locate(chart, sm, sp));
}

std::array<int, 2> kruskal_sign_pair(const ChartPoint& k) {
  if (k.log_coords) return {(*k.log_coords)[0].sign, (*k.log_coords)[1].sign};
  return {sgn(k.coords[0]), sgn(k.coords[1])};
}

enum class Mode { RNdS, Retarded, Advanced, Kruskal };

class TimelikeIntegrator {
 public:
  TimelikeIntegrator(const TortoiseMap& map, const IntegrationOptions& opt)
      : map_(map), p_(map.params()), opt_(opt), roots_(map.roots()) {
    for (int m = 1; m <= 4; ++m) {
      auto iv = map_.interval(RegionId{m});
      if (m == 1) iv[0] = 0.5 * roots_[1];
      if (m == 4) iv[1] = 2.0 * roots_[3];
      double best = 0.0;
      for (int k = 1; k < 400; ++k) {
        const double r = iv[0] + (iv[1] - iv[0]) * k / 400.0;
        best = std::max(best, std::abs(horizon_function(p_, r)));
      }
      scale_[static_cast<size_t>(m)] = best;
    }
    for (int i = 1; i <= 3; ++i) charts_.emplace_back(map_, i);
  }

  GeodesicTrajectory run(const ChartPoint& start, double t_dot, double r_dot) {
    if (start.kind != ChartKind::RNdS) throw DomainError("timelike trace starts from an RNdS point");
    const double r0 = start.coords[1];
    const RegionId region = map_.region_of(r0);
    if (!region.valid() || region.index != start.index) {
      throw DomainError("start radius is not inside region " +
                        std::string(roman(RegionId{start.index})) + " (or sits on a horizon)");
    }
    const double f = horizon_function(p_, r0);
    const double energy = f * t_dot * t_dot - r_dot * r_dot / f;
    if (!(energy > 0.0)) {
      throw DomainError("initial velocity is not timelike: E = f t'^2 - r'^2/f = " +
                        std::to_string(energy));
    }
    traj_.kind = "radial_timelike";
    traj_.energy = energy;
    traj_.killing = f * t_dot;
    omega_ = start.omega;

    mode_ = Mode::RNdS;
    region_ = start.index;
    primed_ = start.primed;
    x_ = {start.coords[0], r0, t_dot, r_dot};
    tau_ = 0.0;
    record();
    maybe_switch();

    double dt = 1e-3 * std::min(1.0, opt_.tau_max);
    auto stepper = make_stepper();
    std::size_t steps = 0;
    int turns = 0;
    double last_sample = 0.0;

    while (true) {
      if (tau_ >= opt_.tau_max) return finish(Termination::Budget);
      if (steps++ >= opt_.max_steps) return finish(Termination::Budget);
      dt = std::min(dt, opt_.tau_max - tau_);
      if (dt <= 1e-15 * std::max(1.0, std::abs(tau_))) {
        throw IntegrationError("step size underflow at tau = " + std::to_string(tau_), traj_);
      }
      const State before = x_;
      const double tau_before = tau_;
      const double r_before = radius();
      const double rdot_before = r_dot_now();
      const auto signs_before = horizon_signs();

      bool ok = false;
      try {
        ok = try_step(stepper, dt);
      } catch (const std::exception&) {
        ok = false;
        x_ = before;
        tau_ = tau_before;
        dt *= 0.5;
        stepper = make_stepper();
        continue;
      }
      if (!ok) continue;  // dt already reduced by the controller
      double r_after = 0.0;
      bool valid = true;
      try {
        r_after = radius();
        if (!(r_after > 0.0)) valid = false;
        if (mode_ == Mode::RNdS && map_.region_of(r_after).index != region_) valid = false;
      } catch (const std::exception&) {
        valid = false;
      }
      if (!valid) {
        x_ = before;
        tau_ = tau_before;
        dt *= 0.25;
        stepper = make_stepper();
        continue;
      }

      log_crossings(r_before, r_after, tau_before, signs_before);
      const double rdot_after = r_dot_now();
      if (rdot_before != 0.0 && sgn(rdot_before) != sgn(rdot_after) && rdot_after != 0.0) {
        log_turning(rdot_before < 0.0, std::min(r_before, r_after), std::max(r_before, r_after));
        ++turns;
      }

      if (r_after < 1e-9 * roots_[1]) {
        traj_.events.push_back({GeodesicEvent::Kind::Singularity, tau_, r_after, "r = 0"});
        record();
        return finish(Termination::Singularity);
      }
      if (r_after > opt_.scri_radius_factor * roots_[3]) {
        traj_.events.push_back({GeodesicEvent::Kind::Scri, tau_, r_after, "scri"});
        record();
        return finish(Termination::Scri);
      }
      if (opt_.sample_dtau <= 0.0 || tau_ - last_sample >= opt_.sample_dtau) {
        record();
        last_sample = tau_;
      }
      if (turns >= opt_.max_turns) {
        record();
        return finish(Termination::TurningLimit);
      }
      if (maybe_switch()) {
        stepper = make_stepper();
        record();
      } else if (tolerance_level() != level_) {
        stepper = make_stepper();
      }
    }
  }

 private:
  using Stepper = decltype(odeint::make_controlled(1.0, 1.0, odeint::runge_kutta_dopri5<State>()));

  // In (t, r) an error δṙ moves E by 2ṙδṙ/f and piles up over ~1/|f| steps,
  // so the tolerance shrinks like f².
  int tolerance_level() const {
    if (mode_ != Mode::RNdS) return 0;
    const double q = std::abs(horizon_function(p_, x_[1])) / scale_[static_cast<size_t>(region_)];
    return std::clamp(static_cast<int>(std::floor(-2.0 * std::log2(std::max(q, 1e-300)))), 0, 12);
  }

  Stepper make_stepper() {
    level_ = tolerance_level();
    const double q = std::ldexp(1.0, -level_);
    return odeint::make_controlled(q * opt_.tol_abs, q * opt_.tol_rel,
                                   odeint::runge_kutta_dopri5<State>());
  }

  bool try_step(Stepper& stepper, double& dt) {
    auto rhs = [this](const State& y, State& dy, double) { derivative(y, dy); };
    return stepper.try_step(rhs, x_, tau_, dt) == odeint::success;
  }

  const KruskalChart& chart() const { return charts_[static_cast<size_t>(region_ - 1)]; }

  void derivative(const State& y, State& dy) const {
    switch (mode_) {
      case Mode::RNdS: {
        const double f = horizon_function(p_, y[1]);
        const double fp = horizon_function_derivative(p_, y[1]);
        dy = {y[2], y[3], -y[2] * y[3] * fp / f, -0.5 * fp * (f * y[2] * y[2] - y[3] * y[3] / f)};
        return;
      }
      case Mode::Retarded: {
        const double f = horizon_function(p_, y[1]);
        const double fp = horizon_function_derivative(p_, y[1]);
        dy = {y[2], y[3], 0.5 * fp * y[2] * y[2],
              -0.5 * f * fp * y[2] * y[2] - fp * y[2] * y[3]};
        return;
      }
      case Mode::Advanced: {
        const double f = horizon_function(p_, y[1]);
        const double fp = horizon_function_derivative(p_, y[1]);
        dy = {y[2], y[3], -0.5 * fp * y[2] * y[2],
              -0.5 * f * fp * y[2] * y[2] + fp * y[2] * y[3]};
        return;
      }
      case Mode::Kruskal: {
        const KruskalChart& k = chart();
        const double r = k.radius(y[0] * y[1]);
        const double c = k.metric_coefficient_log_derivative(r) * k.metric_coefficient(r) /
                         (4.0 * k.coefficient());
        dy = {y[2], y[3], c * y[1] * y[2] * y[2], c * y[0] * y[3] * y[3]};
        return;
      }
    }
  }

  double radius() const {
    if (mode_ == Mode::Kruskal) return chart().radius(x_[0] * x_[1]);
    return x_[1];
  }

  double r_dot_now() const {
    if (mode_ != Mode::Kruskal) return x_[3];
    const KruskalChart& k = chart();
    const double g = k.metric_coefficient(radius());
    return -g / (4.0 * k.coefficient()) * (x_[3] * x_[0] + x_[1] * x_[2]);
  }

  std::array<double, 2> invariants() const {
    const double r = radius();
    switch (mode_) {
      case Mode::RNdS: {
        const double f = horizon_function(p_, r);
        return {f * x_[2] * x_[2] - x_[3] * x_[3] / f, f * x_[2]};
      }
      case Mode::Retarded: {
        const double f = horizon_function(p_, r);
        return {f * x_[2] * x_[2] + 2.0 * x_[2] * x_[3], f * x_[2] + x_[3]};
      }
      case Mode::Advanced: {
        const double f = horizon_function(p_, r);
        return {f * x_[2] * x_[2] - 2.0 * x_[2] * x_[3], f * x_[2] - x_[3]};
      }
      case Mode::Kruskal: {
        const KruskalChart& k = chart();
        const double g = k.metric_coefficient(r);
        return {g * x_[2] * x_[3], g * (x_[1] * x_[2] - x_[0] * x_[3]) / (4.0 * k.coefficient())};
      }
    }
    return {0.0, 0.0};
  }

  ChartPoint point() const {
    ChartPoint p;
    p.omega = omega_;
    switch (mode_) {
      case Mode::RNdS:
        p.kind = ChartKind::RNdS;
        break;
      case Mode::Retarded:
        p.kind = ChartKind::EFRetarded;
        break;
      case Mode::Advanced:
        p.kind = ChartKind::EFAdvanced;
        break;
      case Mode::Kruskal: {
        const double shift = t_offset_ / (2.0 * chart().coefficient());
        SignedLog um = SignedLog::from(x_[0]);
        SignedLog up = SignedLog::from(x_[1]);
        um.log_abs -= shift;
        up.log_abs += shift;
        return kruskal_point(region_, um, up, omega_);
      }
    }
    p.index = region_;
    p.primed = primed_;
    p.coords = {x_[0], x_[1]};
    return p;
  }

  void record() {
    GeodesicState s;
    s.tau = tau_;
    s.point = point();
    s.velocity = {x_[2], x_[3]};
    if (mode_ == Mode::Kruskal) {
      const double shift = t_offset_ / (2.0 * chart().coefficient());
      s.velocity = {x_[2] * std::exp(-shift), x_[3] * std::exp(shift)};
    }
    s.r = radius();
    s.r_dot = r_dot_now();
    const auto inv = invariants();
    s.energy = inv[0];
    s.killing = inv[1];
    traj_.samples.push_back(s);
  }

  GeodesicTrajectory finish(Termination t) {
    if (traj_.samples.empty() || traj_.samples.back().tau != tau_) record();
    traj_.termination = t;
    return std::move(traj_);
  }

  // Signs of (U-, U+) in every Kruskal chart that covers the current point.
  std::array<std::array<int, 2>, 3> horizon_signs() const {
    std::array<std::array<int, 2>, 3> out{};
    if (mode_ == Mode::RNdS) return out;
    const ChartPoint p = point();
    const double r = radius();
    for (int i = 1; i <= 3; ++i) {
      const auto dom = charts_[static_cast<size_t>(i - 1)].radius_domain();
      if (!(r > dom[0] && r < dom[1])) continue;
      if (mode_ == Mode::Kruskal) {
        if (i == region_) out[static_cast<size_t>(i - 1)] = kruskal_sign_pair(p);
        continue;
      }
      out[static_cast<size_t>(i - 1)] =
          kruskal_sign_pair(to_kruskal(p, charts_[static_cast<size_t>(i - 1)]));
    }
    return out;
  }

  void log_crossings(double r_before, double r_after, double tau_before,
                     const std::array<std::array<int, 2>, 3>& signs_before) {
    if (mode_ == Mode::RNdS) return;
    const auto signs_after = horizon_signs();
    for (int i = 1; i <= 3; ++i) {
      const double rh = roots_[static_cast<size_t>(i)];
      if ((r_before - rh) * (r_after - rh) > 0.0 || r_before == r_after) continue;
      if (r_before == rh) continue;
      const double w = (rh - r_before) / (r_after - r_before);
      const double tau = tau_before + w * (tau_ - tau_before);
      const auto& k = charts_[static_cast<size_t>(i - 1)];
      traj_.events.push_back({GeodesicEvent::Kind::HorizonCrossing, tau, rh,
                              crossing_label(k, signs_before[static_cast<size_t>(i - 1)],
                                             signs_after[static_cast<size_t>(i - 1)])});
    }
  }

  void log_turning(bool minimum, double r_lo, double r_hi) {
    const double c = traj_.killing * traj_.killing;
    const double e = traj_.energy;
    auto h = [&](double r) { return c - horizon_function(p_, r) * e; };
    double r_turn;
    try {
      // The extremum lies beyond both step endpoints; expand until C - fE < 0.
      if (minimum) {
        double hi = r_lo;
        double lo = r_lo;
        double delta = 1e-9 * r_lo;
        while (h(lo) >= 0.0) {
          hi = lo;
          lo = std::max(r_lo - delta, 0.5 * lo);
          delta *= 4.0;
        }
        r_turn = detail::bisect(h, lo, hi);
      } else {
        double lo = r_hi;
        double hi = r_hi;
        double delta = 1e-9 * r_hi;
        while (h(hi) >= 0.0) {
          lo = hi;
          hi = r_hi + delta;
          delta *= 4.0;
        }
        r_turn = detail::bisect(h, lo, hi);
      }
    } catch (const std::exception&) {
      r_turn = minimum ? r_lo : r_hi;
    }
    traj_.events.push_back({GeodesicEvent::Kind::TurningPoint, tau_, r_turn,
                            minimum ? "turning point (min r)" : "turning point (max r)"});
  }

  int nearest_horizon(int region, double r) const {
    int best = 0;
    double dist = INFINITY;
    for (int k : {region - 1, region}) {
      if (k < 1 || k > 3) continue;
      const double d = std::abs(r - roots_[static_cast<size_t>(k)]) / roots_[static_cast<size_t>(k)];
      if (d < dist) {
        dist = d;
        best = k;
      }
    }
    return best;
  }

  // RNdS state (t, r, t', r') with region/orientation from the current state.
  void to_rnds_state() {
    if (mode_ == Mode::RNdS) return;
    const double r = radius();
    if (mode_ == Mode::Kruskal) {
      const KruskalChart& k = chart();
      const double a_i = k.coefficient();
      const auto signs = kruskal_sign_pair(ChartPoint{ChartKind::Kruskal, region_, false,
                                                      {x_[0], x_[1]}, omega_, std::nullopt});
      const KruskalLocation loc = locate(k, signs[0], signs[1]);
      const double t = t_offset_ + a_i * (std::log(std::abs(x_[1])) - std::log(std::abs(x_[0])));
      const double t_dot = a_i * (x_[3] / x_[1] - x_[2] / x_[0]);
      const double r_dot = r_dot_now();
      region_ = loc.region.index;
      primed_ = loc.primed;
      x_ = {t, r, t_dot, r_dot};
    } else {
      const ChartPoint back = to_rnds(point(), map_);
      const double f = horizon_function(p_, r);
      const double t_dot = mode_ == Mode::Retarded ? x_[2] + x_[3] / f : x_[2] - x_[3] / f;
      region_ = back.index;
      primed_ = back.primed;
      x_ = {back.coords[0], r, t_dot, x_[3]};
    }
    mode_ = Mode::RNdS;
  }

  bool maybe_switch() {
    const double r = radius();
    const RegionId region = map_.region_of(r);
    if (!region.valid()) return false;
    const double f = horizon_function(p_, r);
    const double threshold = opt_.switch_fraction * scale_[static_cast<size_t>(region.index)];
    const auto inv = invariants();
    const double k = inv[1];
    const double e = traj_.energy;

    if (mode_ != Mode::RNdS) {
      bool leave = std::abs(f) >= 2.0 * threshold;
      // An EF chart only stays regular while K r' keeps its sign.
      if (!leave && mode_ != Mode::Kruskal && f > 0.0) {
        const double r_dot = r_dot_now();
        const bool retarded_ok = k * r_dot > 0.0;
        if (r_dot != 0.0 && retarded_ok != (mode_ == Mode::Retarded)) leave = true;
      }
      if (!leave) return false;
      to_rnds_state();
      if (std::abs(f) >= 2.0 * threshold) {
        traj_.events.push_back({GeodesicEvent::Kind::ChartSwitch, tau_, r, "rnds"});
        return true;
      }
    }
    if (std::abs(f) >= threshold) return false;

    // (t, r, t', r') → horizon-regular chart.
    const double t = x_[0];
    const double t_dot = x_[2];
    const double r_dot = x_[3];
    const int horizon = nearest_horizon(region_, r);
    if (k * k < 2.0 * std::abs(f) * e) {
      const KruskalChart& kc = charts_[static_cast<size_t>(horizon - 1)];
      const double a_i = kc.coefficient();
      const auto beta = kruskal_signs(horizon, RegionId{region_}, primed_);
      const double mag = std::exp(map_(r) / (2.0 * a_i));
      const double up = beta[0] * mag;
      const double um = beta[1] * mag;
      x_ = {um, up, -um * (t_dot - r_dot / f) / (2.0 * a_i), up * (t_dot + r_dot / f) / (2.0 * a_i)};
      t_offset_ = t;
      mode_ = Mode::Kruskal;
      region_ = horizon;
      traj_.events.push_back({GeodesicEvent::Kind::ChartSwitch, tau_, r,
                              "kruskal:" + std::to_string(horizon)});
      return true;
    }
    const double rs = map_(r);
    if (k * r_dot > 0.0) {
      x_ = {t - rs, r, t_dot - r_dot / f, r_dot};
      mode_ = Mode::Retarded;
      traj_.events.push_back({GeodesicEvent::Kind::ChartSwitch, tau_, r, "ef_retarded"});
    } else {
      x_ = {t + rs, r, t_dot + r_dot / f, r_dot};
      mode_ = Mode::Advanced;
      traj_.events.push_back({GeodesicEvent::Kind::ChartSwitch, tau_, r, "ef_advanced"});
    }
    return true;
  }

  const TortoiseMap& map_;
  const BlackHoleParams& p_;
  IntegrationOptions opt_;
  std::array<double, 4> roots_;
  std::array<double, 5> scale_{};
  int level_ = 0;
  std::vector<KruskalChart> charts_;

  GeodesicTrajectory traj_;
  Mode mode_ = Mode::RNdS;
  int region_ = 3;  // RNdS: region, EF: origin region, Kruskal: chart
  bool primed_ = false;
  double t_offset_ = 0.0;
  State x_{};
  double tau_ = 0.0;
  Angles omega_{};
};

GeodesicTrajectory circular_orbit(const TortoiseMap& map, double r, int sense, double tau_max,
                                  std::size_t samples) {
  const BlackHoleParams& p = map.params();
  const double f = horizon_function(p, r);
  if (!(f > 0.0)) {
    throw DomainError("f(" + std::to_string(r) + ") = " + std::to_string(f) +
                      " <= 0: no real null field ∂t ± (√f/r)∂φ exists there, so r = " +
                      std::to_string(r) + " is not a photon sphere");
  }
  const double residual = r * horizon_function_derivative(p, r) - 2.0 * f;
  if (std::abs(residual) > 1e-10 * std::max(1.0, std::abs(f))) {
    throw DomainError("r f' - 2f = " + std::to_string(residual) + " at r = " + std::to_string(r) +
                      ": not a circular null orbit");
  }
  const double omega_rate = (sense < 0 ? -1.0 : 1.0) * std::sqrt(f) / r;
  GeodesicTrajectory traj;
  traj.kind = "photon_orbit";
  traj.energy = 0.0;
  traj.killing = f;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = tau_max * static_cast<double>(k) / static_cast<double>(n - 1);
    GeodesicState s;
    s.tau = tau;
    s.point.kind = ChartKind::RNdS;
    s.point.index = map.region_of(r).index;
    s.point.coords = {tau, r};
    s.point.omega = {std::numbers::pi / 2.0, wrap_angle(omega_rate * tau)};
    s.velocity = {1.0, 0.0};
    s.angular_velocity = {0.0, omega_rate};
    s.r = r;
    s.r_dot = 0.0;
    s.energy = f - r * r * omega_rate * omega_rate;
    s.killing = f;
    traj.samples.push_back(s);
  }
  traj.termination = Termination::Budget;
  return traj;
}

}  // namespace

std::string_view to_string(GeodesicEvent::Kind kind) noexcept {
  switch (kind) {
    case GeodesicEvent::Kind::HorizonCrossing:
      return "horizon_crossing";
    case GeodesicEvent::Kind::TurningPoint:
      return "turning_point";
    case GeodesicEvent::Kind::ChartSwitch:
      return "chart_switch";
    case GeodesicEvent::Kind::Singularity:
      return "singularity";
    case GeodesicEvent::Kind::Scri:
      return "scri";
  }
  return "unknown";
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::Singularity:
      return "singularity";
    case Termination::Scri:
      return "scri";
    case Termination::Budget:
      return "budget";
    case Termination::TurningLimit:
      return "turning-limit";
  }
  return "budget";
}

GeodesicTrajectory radial_null_trace(const TortoiseMap& map, const ChartPoint& start,
                                     NullFamily family, int direction,
                                     const IntegrationOptions& options, std::size_t samples) {
  if (direction != 1 && direction != -1) throw DomainError("direction must be +1 or -1");
  const bool retarded = family == NullFamily::Yminus;
  const ChartPoint ef = retarded ? to_ef_retarded(start, map) : to_ef_advanced(start, map);
  const double sigma = retarded ? direction : -direction;  // dr/dτ
  const double r0 = ef.coords[1];
  const double r_scri = options.scri_radius_factor * map.roots()[3];

  GeodesicTrajectory traj;
  traj.kind = retarded ? "radial_null_yminus" : "radial_null_yplus";
  traj.energy = 0.0;
  traj.killing = retarded ? sigma : -sigma;

  double tau_end = options.tau_max;
  traj.termination = Termination::Budget;
  if (sigma < 0.0 && r0 <= options.tau_max) {
    tau_end = r0;
    traj.termination = Termination::Singularity;
  } else if (sigma > 0.0 && r_scri - r0 <= options.tau_max) {
    tau_end = std::max(0.0, r_scri - r0);
    traj.termination = Termination::Scri;
  }

  const std::size_t n = std::max<std::size_t>(samples, 2);
  const bool open_end = traj.termination == Termination::Singularity;
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = open_end ? tau_end * static_cast<double>(k) / static_cast<double>(n)
                                : tau_end * static_cast<double>(k) / static_cast<double>(n - 1);
    GeodesicState s;
    s.tau = tau;
    s.point = ef;
    s.r = r0 + sigma * tau;
    s.point.coords[1] = s.r;
    s.velocity = {0.0, sigma};
    s.r_dot = sigma;
    const double f = horizon_function(map.params(), s.r);
    s.energy = f * s.velocity[0] * s.velocity[0] +
               (retarded ? 2.0 : -2.0) * s.velocity[0] * s.velocity[1];
    s.killing = f * s.velocity[0] + (retarded ? sigma : -sigma);
    traj.samples.push_back(s);
  }

  const auto& roots = map.roots();
  std::vector<int> order = {1, 2, 3};
  if (sigma < 0.0) std::reverse(order.begin(), order.end());
  for (int i : order) {
    const double rh = roots[static_cast<size_t>(i)];
    const double tau = (rh - r0) / sigma;
    if (!(tau > 0.0 && tau <= tau_end)) continue;
    ChartPoint at = ef;
    at.coords[1] = rh;
    const KruskalChart chart(map, i);
    const auto signs = kruskal_sign_pair(to_kruskal(at, chart));
    traj.events.push_back({GeodesicEvent::Kind::HorizonCrossing, tau, rh,
                           label(locate(chart, signs[0], signs[1]))});
  }
  if (traj.termination == Termination::Singularity) {
    traj.events.push_back({GeodesicEvent::Kind::Singularity, tau_end, 0.0, "r = 0"});
  } else if (traj.termination == Termination::Scri) {
    traj.events.push_back({GeodesicEvent::Kind::Scri, tau_end, r0 + sigma * tau_end, "scri"});
  }
  return traj;
}

GeodesicTrajectory horizon_generator(const TortoiseMap& map, int i, double u0, double tau_max,
                                     std::size_t samples, bool on_u_minus_axis) {
  const KruskalChart chart(map, i);
  const double rate = 1.0 / (2.0 * chart.coefficient());
  const double rh = map.roots()[static_cast<size_t>(i)];
  GeodesicTrajectory traj;
  traj.kind = "horizon_generator";
  traj.energy = 0.0;
  traj.killing = 0.0;
  traj.termination = Termination::Budget;
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau = tau_max * static_cast<double>(k) / static_cast<double>(n - 1);
    const double u = u0 + rate * tau;
    GeodesicState s;
    s.tau = tau;
    s.point.kind = ChartKind::Kruskal;
    s.point.index = i;
    s.point.coords = on_u_minus_axis ? std::array<double, 2>{0.0, u} : std::array<double, 2>{u, 0.0};
    s.velocity = on_u_minus_axis ? std::array<double, 2>{0.0, rate}
                                 : std::array<double, 2>{rate, 0.0};
    s.r = rh;
    const double g = chart.metric_coefficient(rh);
    s.energy = g * s.velocity[0] * s.velocity[1];
    s.killing = g * (s.point.coords[1] * s.velocity[0] - s.point.coords[0] * s.velocity[1]) /
                (4.0 * chart.coefficient());
    traj.samples.push_back(s);
  }
  const double tau_cross = -u0 / rate;
  if (tau_cross > 0.0 && tau_cross < tau_max) {
    traj.events.push_back({GeodesicEvent::Kind::HorizonCrossing, tau_cross, rh,
                           "S" + std::to_string(i)});
  }
  return traj;
}

GeodesicTrajectory radial_timelike_trace(const TortoiseMap& map, const ChartPoint& start,
                                         double t_dot, double r_dot,
                                         const IntegrationOptions& options) {
  if (!(options.tol_rel > 0.0 && options.tol_abs > 0.0)) {
    throw DomainError("integration tolerances must be positive");
  }
  TimelikeIntegrator integrator(map, options);
  return integrator.run(start, t_dot, r_dot);
}

GeodesicTrajectory photon_orbit(const TortoiseMap& map, int sense, double tau_max,
                                std::size_t samples) {
  return circular_orbit(map, map.photon_sphere_radius(), sense, tau_max, samples);
}

GeodesicTrajectory photon_orbit_at(const TortoiseMap& map, double r, int sense, double tau_max,
                                   std::size_t samples) {
  return circular_orbit(map, r, sense, tau_max, samples);
}

double turning_radius(const TortoiseMap& map, double killing, double energy, double r_from) {
  const double r1 = map.roots()[1];
  if (!(r_from > 0.0 && r_from < r1)) throw DomainError("turning_radius needs r_from in region I");
  const BlackHoleParams& p = map.params();
  auto h = [&](double r) { return killing * killing - horizon_function(p, r) * energy; };
  double hi = r_from;
  double lo = 0.5 * r_from;
  while (h(lo) >= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw NumericalError("no turning point below r_from");
  }
  return detail::bisect(h, lo, hi);
}

unsigned thread_limit() noexcept {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RNDS_ATLAS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

std::vector<GeodesicTrajectory> radial_timelike_batch(const TortoiseMap& map,
                                                      const std::vector<TimelikeStart>& starts,
                                                      const IntegrationOptions& options) {
  std::vector<GeodesicTrajectory> out(starts.size());
  std::vector<std::exception_ptr> errors(starts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < starts.size(); i = next++) {
      try {
        out[i] = radial_timelike_trace(map, starts[i].point, starts[i].t_dot, starts[i].r_dot,
                                       options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(thread_limit(), static_cast<unsigned>(starts.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace rnds
