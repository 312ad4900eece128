#include "rnds/atlas.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rnds {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

int sgn(double x) noexcept { return (x > 0.0) - (x < 0.0); }

bool same_parity(long a, long b) noexcept { return ((a - b) % 2 + 2) % 2 == 0; }

BlockId block_from_half_centre(long mh, long nh) {
  return {static_cast<int>((mh - nh - 1) / 2), static_cast<int>((mh + nh + 1) / 2)};
}

std::array<SignedLog, 2> logs_of(const ChartPoint& p) {
  if (p.log_coords) return *p.log_coords;
  return {SignedLog::from(p.coords[0]), SignedLog::from(p.coords[1])};
}

}  // namespace

GlobalPoint GlobalPoint::from_lattice(double X, double Y, Angles omega) {
  return {(X - Y) / kSqrt2, (X + Y) / kSqrt2, omega};
}

double GlobalPoint::X() const noexcept { return (y + x) / kSqrt2; }
double GlobalPoint::Y() const noexcept { return (y - x) / kSqrt2; }

int CellId::chart() const noexcept {
  switch (kind) {
    case CellKind::A:
      return 1;
    case CellKind::B:
      return 2;
    case CellKind::C:
      return 3;
  }
  return 1;
}

std::array<double, 2> CellId::centre() const noexcept {
  const double m = l + k;
  const double n = l - k;
  switch (kind) {
    case CellKind::A:
      return {m * kPi, n * kPi};
    case CellKind::B:
      return {(m + 0.5) * kPi, (n + 0.5) * kPi};
    case CellKind::C:
      return {(m + 1.0) * kPi, n * kPi};
  }
  return {0.0, 0.0};
}

std::string CellId::name() const {
  const char* letter = kind == CellKind::A ? "A" : kind == CellKind::B ? "B" : "C";
  return std::string(letter) + "[" + std::to_string(k) + "," + std::to_string(l) + "]";
}

std::array<double, 2> BlockId::centre() const noexcept {
  return {(k + l + 0.5) * kPi, (l - k - 0.5) * kPi};
}

std::string BlockId::name() const {
  return "S[" + std::to_string(k) + "," + std::to_string(l) + "]";
}

Atlas::Atlas(const TortoiseMap& map, AtlasConfig config) : map_(map), config_(config) {
  for (int i = 1; i <= 3; ++i) charts_.emplace_back(map_, i);
  double lam = 0.0;
  for (int i = 1; i <= 3; ++i) lam = std::max(lam, std::abs(map_.coefficient(i)));
  lambda_ = config_.lambda.value_or(lam);
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw DomainError("atlas exponent scale λ must be positive and finite");
  }
  if (!(config_.margin >= 0.0)) throw DomainError("atlas margin must be nonnegative");
  mu_ = 0.5 * map_.a();
}

const KruskalChart& Atlas::chart(int i) const {
  if (i < 1 || i > 3) throw DomainError("Kruskal chart index must be 1, 2 or 3");
  return charts_[static_cast<size_t>(i - 1)];
}

double Atlas::exponent(int i) const { return lambda_ / std::abs(chart(i).coefficient()); }

double Atlas::singularity_level() const noexcept {
  return std::exp((2.0 * mu_ - map_.b()) / lambda_);
}

double Atlas::scri_level() const noexcept { return std::exp((2.0 * mu_ - map_.a()) / lambda_); }

bool Atlas::in_square(const CellId& cell, double X, double Y) const {
  const auto c = cell.centre();
  const double lim = 0.5 * kPi - config_.margin;
  return std::abs(X - c[0]) < lim && std::abs(Y - c[1]) < lim;
}

std::vector<CellId> Atlas::candidate_cells(const GlobalPoint& p) const {
  const double X = p.X();
  const double Y = p.Y();
  std::vector<CellId> out;
  const long m = std::lround(X / kPi);
  const long n = std::lround(Y / kPi);
  CellId whole;
  if (same_parity(m, n)) {
    whole = {CellKind::A, static_cast<int>((m - n) / 2), static_cast<int>((m + n) / 2)};
  } else {
    whole = {CellKind::C, static_cast<int>((m - 1 - n) / 2), static_cast<int>((m - 1 + n) / 2)};
  }
  if (in_square(whole, X, Y)) out.push_back(whole);
  const auto mh = static_cast<long>(std::floor(X / kPi));
  const auto nh = static_cast<long>(std::floor(Y / kPi));
  if (same_parity(mh, nh)) {
    const CellId half{CellKind::B, static_cast<int>((mh - nh) / 2), static_cast<int>((mh + nh) / 2)};
    if (in_square(half, X, Y)) out.push_back(half);
  }
  return out;
}

bool Atlas::contains(const CellId& cell, const GlobalPoint& p) const {
  const double X = p.X();
  const double Y = p.Y();
  if (!in_square(cell, X, Y)) return false;
  if (cell.kind == CellKind::B) return true;
  const auto c = cell.centre();
  const double sx = X - c[0];
  const double sy = Y - c[1];
  if (std::abs(sx) < config_.margin || std::abs(sy) < config_.margin) return true;
  const double level = std::log(std::abs(std::tan(sx))) + std::log(std::abs(std::tan(sy)));
  if (cell.kind == CellKind::A) {
    return sx * sy > 0.0 || level < std::log(singularity_level());
  }
  return sx * sy < 0.0 || level < std::log(scri_level());
}

ChartPoint Atlas::chart_point(const CellId& cell, const GlobalPoint& p) const {
  if (!contains(cell, p)) {
    throw DomainError("(x, y) = (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                      ") is not in " + cell.name());
  }
  const int i = cell.chart();
  const double a_i = chart(i).coefficient();
  const double p_i = exponent(i);
  const auto c = cell.centre();
  auto coordinate = [&](double s) -> SignedLog {
    if (std::abs(s) < config_.margin) return {0, -INFINITY};
    return {sgn(s), mu_ / a_i + p_i * std::log(std::abs(std::tan(s)))};
  };
  const SignedLog up = coordinate(p.X() - c[0]);
  const SignedLog um = coordinate(p.Y() - c[1]);
  return kruskal_point(i, um, up, p.omega);
}

GlobalPoint Atlas::plane_point(const CellId& cell, const ChartPoint& k) const {
  if (k.kind != ChartKind::Kruskal || k.index != cell.chart()) {
    throw DomainError("point is not in the Kruskal chart of " + cell.name());
  }
  const int i = cell.chart();
  const double a_i = chart(i).coefficient();
  const double p_i = exponent(i);
  const auto [um, up] = logs_of(k);
  auto offset = [&](const SignedLog& u) {
    if (u.sign == 0) return 0.0;
    return u.sign * std::atan(std::exp((u.log_abs - mu_ / a_i) / p_i));
  };
  const auto c = cell.centre();
  return GlobalPoint::from_lattice(c[0] + offset(up), c[1] + offset(um), k.omega);
}

std::optional<BlockId> Atlas::block_at(double X, double Y) const {
  const auto mh = static_cast<long>(std::floor(X / kPi));
  const auto nh = static_cast<long>(std::floor(Y / kPi));
  if (same_parity(mh, nh)) return std::nullopt;
  return block_from_half_centre(mh, nh);
}

AtlasResolution Atlas::resolve(const GlobalPoint& p) const {
  const double X = p.X();
  const double Y = p.Y();
  const double eps = config_.margin;

  // Block corners (mπ, (n+½)π) and ((m+½)π, nπ) are i±.
  {
    const long m = std::lround(X / kPi);
    const long n = std::lround(Y / kPi);
    const auto mh = static_cast<long>(std::floor(X / kPi));
    const auto nh = static_cast<long>(std::floor(Y / kPi));
    const bool x_int = std::abs(X - m * kPi) < eps;
    const bool y_int = std::abs(Y - n * kPi) < eps;
    const bool x_half = std::abs(X - (mh + 0.5) * kPi) < eps;
    const bool y_half = std::abs(Y - (nh + 0.5) * kPi) < eps;
    if (x_int && y_half) {
      const long block_m = same_parity(m - 1, nh) ? m : m - 1;
      const bool future = block_m == m - 1;
      const BlockId b = block_from_half_centre(block_m, nh);
      throw TimelikeInfinityError(std::string(future ? "i+" : "i-") + " corner of " + b.name(),
                                  b, future);
    }
    if (y_int && x_half) {
      const long block_n = same_parity(mh, n - 1) ? n : n - 1;
      const bool future = block_n == n - 1;
      const BlockId b = block_from_half_centre(mh, block_n);
      throw TimelikeInfinityError(std::string(future ? "i+" : "i-") + " corner of " + b.name(),
                                  b, future);
    }
  }

  AtlasResolution res;
  res.point = p;
  bool have_r = false;
  for (const CellId& cell : candidate_cells(p)) {
    if (!contains(cell, p)) continue;
    const ChartPoint k = chart_point(cell, p);
    const auto [um, up] = logs_of(k);
    double r;
    try {
      r = chart(cell.chart()).radius(um * up);
    } catch (const DomainError&) {
      continue;  // rounding at the r = 0 / ℐ cut
    }
    if (!have_r) {
      have_r = true;
      res.r = r;
      res.location = locate(chart(cell.chart()), um.sign, up.sign);
      res.label = label(res.location);
      if (res.location.kind == KruskalLocation::Kind::Region) {
        res.t = kruskal_time(chart(cell.chart()), k);
      }
    }
    res.memberships.push_back({cell, k});
  }
  if (res.memberships.empty()) {
    if (auto b = block_at(X, Y)) {
      throw ExcludedPointError("(x, y) = (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                   ") lies in the removed block " + b->name(),
                               *b);
    }
    throw NumericalError("no chart covers (x, y) = (" + std::to_string(p.x) + ", " +
                         std::to_string(p.y) + ")");
  }
  return res;
}

ChartPoint Atlas::transition(const CellId& from, const ChartPoint& k, const CellId& to) const {
  if (from == to) return k;
  const GlobalPoint g = plane_point(from, k);
  if (!contains(to, g)) {
    throw DomainError("point of " + from.name() + " is not in the overlap with " + to.name());
  }
  return chart_point(to, g);
}

double Atlas::radius_log_level(int i, double r) const {
  const SignedLog h = chart(i).log_H(r);
  return (h.log_abs - 2.0 * mu_ / chart(i).coefficient()) / exponent(i);
}

std::string region_label(const AtlasResolution& res) { return res.label; }

}  // namespace rnds
