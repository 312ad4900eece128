#include "rnds/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <tuple>

namespace rnds {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_parity(int a, int b) noexcept { return ((a - b) % 2 + 2) % 2 == 0; }

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

struct Window {
  double X0, X1, Y0, Y1;
  [[nodiscard]] bool inside(double X, double Y) const noexcept {
    constexpr double eps = 1e-12;
    return X >= X0 - eps && X <= X1 + eps && Y >= Y0 - eps && Y <= Y1 + eps;
  }
};

struct Offset {
  double sx;
  double sy;
  double r;
};

class Builder {
 public:
  Builder(const Atlas& atlas, const DiagramOptions& opt, DiagramDataset& out)
      : atlas_(atlas), opt_(opt), out_(out) {
    win_ = {opt.m_min * kPi, opt.m_max * kPi, opt.n_min * kPi, opt.n_max * kPi};
    for (int m = opt.m_min; m <= opt.m_max; ++m) {
      for (int n = opt.n_min; n <= opt.n_max; ++n) {
        if (same_parity(m, n)) {
          cells_.push_back({CellKind::A, (m - n) / 2, (m + n) / 2});
        } else {
          cells_.push_back({CellKind::C, (m - 1 - n) / 2, (m - 1 + n) / 2});
        }
      }
    }
    for (int m = opt.m_min; m < opt.m_max; ++m) {
      for (int n = opt.n_min; n < opt.n_max; ++n) {
        if (same_parity(m, n)) cells_.push_back({CellKind::B, (m - n) / 2, (m + n) / 2});
      }
    }
    std::sort(cells_.begin(), cells_.end(), [](const CellId& a, const CellId& b) {
      return a.centre() < b.centre();
    });
  }

  // Emit the part of a curve (offsets from a cell centre) inside the window.
  void emit(const std::string& layer, const std::string& label, double value,
            const std::array<double, 2>& centre, const std::vector<Offset>& pts) {
    Polyline current{layer, label, value, false, {}};
    auto flush = [&] {
      if (current.vertices.size() >= 2) out_.polylines.push_back(current);
      current.vertices.clear();
    };
    for (const Offset& o : pts) {
      const double X = centre[0] + o.sx;
      const double Y = centre[1] + o.sy;
      if (!win_.inside(X, Y)) {
        flush();
        continue;
      }
      const GlobalPoint g = GlobalPoint::from_lattice(X, Y);
      current.vertices.push_back({g.x, g.y, o.r});
    }
    flush();
  }

  // |tan sX tan sY| = e^{log_level} in the quadrant (σx, σy), from the
  // sX = 0 end (α = 0) to the sY = 0 end (α = π/2), endpoints included.
  static std::vector<Offset> level_curve(int sx, int sy, double log_level, int n, double r,
                                         double end_r) {
    std::vector<Offset> pts;
    for (int j = 0; j <= n; ++j) {
      const double alpha = kHalfPi * j / n;
      double beta;
      if (j == 0) {
        beta = kHalfPi;
      } else if (j == n) {
        beta = 0.0;
      } else {
        beta = std::atan(std::exp(log_level - std::log(std::tan(alpha))));
      }
      pts.push_back({sx * alpha, sy * beta, (j == 0 || j == n) ? end_r : r});
    }
    return pts;
  }

  void blocks() {
    const double log_a = std::log(atlas_.singularity_level());
    const double log_c = std::log(atlas_.scri_level());
    struct Side {
      double dx, dy;  // cell centre minus block centre
      bool singular;
      const char* name;
    };
    // Walking the block N, W, S, E: left r = 0, ℐ-, right r = 0, ℐ+.
    const Side sides[4] = {{-kHalfPi, kHalfPi, true, "r=0"},
                           {-kHalfPi, -kHalfPi, false, "scri-"},
                           {kHalfPi, -kHalfPi, true, "r=0"},
                           {kHalfPi, kHalfPi, false, "scri+"}};
    std::vector<std::tuple<std::string, std::string, std::array<double, 2>, std::vector<Offset>>>
        edges;
    for (const BlockId& b : out_.blocks) {
      const auto c = b.centre();
      const std::array<double, 2> start_vertex[4] = {
          {c[0], c[1] + kHalfPi}, {c[0] - kHalfPi, c[1]}, {c[0], c[1] - kHalfPi},
          {c[0] + kHalfPi, c[1]}};
      Polyline polygon{"block", b.name(), 0.0, true, {}};
      for (int s = 0; s < 4; ++s) {
        const Side& side = sides[s];
        const std::array<double, 2> cc{c[0] + side.dx, c[1] + side.dy};
        const int sx = side.dx > 0 ? -1 : 1;
        const int sy = side.dy > 0 ? -1 : 1;
        auto pts = level_curve(sx, sy, side.singular ? log_a : log_c, opt_.samples,
                               side.singular ? 0.0 : kInf, kNaN);
        const double dX = cc[0] + pts.front().sx - start_vertex[s][0];
        const double dY = cc[1] + pts.front().sy - start_vertex[s][1];
        if (std::abs(dX) + std::abs(dY) > 1e-9) std::reverse(pts.begin(), pts.end());
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
          const GlobalPoint g = GlobalPoint::from_lattice(cc[0] + pts[j].sx, cc[1] + pts[j].sy);
          polygon.vertices.push_back({g.x, g.y, pts[j].r});
        }
        edges.emplace_back(side.singular ? "singularity" : "scri",
                           std::string(side.name) + " " + b.name(), cc, std::move(pts));
      }
      out_.polylines.push_back(std::move(polygon));
    }
    for (const char* layer : {"singularity", "scri"}) {
      for (const auto& [l, name, cc, pts] : edges) {
        if (l == layer) emit(l, name, 0.0, cc, pts);
      }
    }
  }

  void horizons() {
    const int n = opt_.samples;
    for (const CellId& cell : cells_) {
      const KruskalChart& k = atlas_.chart(cell.chart());
      const double ri = atlas_.tortoise().roots()[static_cast<std::size_t>(cell.chart())];
      const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
      for (const auto& d : dirs) {
        // Along sY = 0 the point sits on U- = 0 with U+ of sign d[0].
        const KruskalLocation loc = locate(k, d[1], d[0]);
        std::vector<Offset> pts;
        for (int j = 0; j <= n; ++j) {
          const double s = kHalfPi * j / n;
          pts.push_back({d[0] * s, d[1] * s, j == n ? kNaN : ri});
        }
        emit("horizon", label(loc) + " " + cell.name(), ri, cell.centre(), pts);
      }
    }
  }

  static CellKind kind_for_region(int region) {
    if (region == 1) return CellKind::A;
    if (region == 4) return CellKind::C;
    return CellKind::B;
  }

  void radius_contour(const std::string& layer, double r) {
    const RegionId region = atlas_.tortoise().region_of(r);
    if (!region.valid()) {
      throw DomainError("contour radius " + format_value(r) +
                        " is not inside a region (r <= 0 or on a horizon)");
    }
    const CellKind kind = kind_for_region(region.index);
    const int n = opt_.samples;
    for (const CellId& cell : cells_) {
      if (cell.kind != kind) continue;
      const int i = cell.chart();
      const double level = atlas_.radius_log_level(i, r);
      for (bool primed : {false, true}) {
        const auto beta = kruskal_signs(i, region, primed);
        std::vector<Offset> pts;
        for (int j = 1; j <= n; ++j) {
          const double alpha = kHalfPi * j / (n + 1);
          const double b = std::atan(std::exp(level - std::log(std::tan(alpha))));
          pts.push_back({beta[0] * alpha, beta[1] * b, r});
        }
        emit(layer,
             "r=" + format_value(r) + " " + region_label(region, primed) + " " + cell.name(), r,
             cell.centre(), pts);
      }
    }
  }

  void time_contour(double t) {
    const int n = opt_.samples;
    for (int j = 1; j <= 4; ++j) {
      const RegionId region{j};
      const CellKind kind = kind_for_region(j);
      for (const CellId& cell : cells_) {
        if (cell.kind != kind) continue;
        const int i = cell.chart();
        const KruskalChart& k = atlas_.chart(i);
        const double p = atlas_.exponent(i);
        const double d = t / (k.coefficient() * p);
        double beta_max = kHalfPi;
        if (j == 1) beta_max = std::atan(std::sqrt(atlas_.singularity_level()));
        if (j == 4) beta_max = std::atan(std::sqrt(atlas_.scri_level()));
        for (bool primed : {false, true}) {
          const auto sign = kruskal_signs(i, region, primed);
          std::vector<Offset> pts;
          for (int q = 1; q <= n; ++q) {
            const double w = std::log(std::tan(beta_max * q / (n + 1)));
            const double log_product = 2.0 * atlas_.mu() / k.coefficient() + 2.0 * p * w;
            const double r = k.radius(SignedLog{sign[0] * sign[1], log_product});
            pts.push_back({sign[0] * std::atan(std::exp(w + 0.5 * d)),
                           sign[1] * std::atan(std::exp(w - 0.5 * d)), r});
          }
          emit("t_contour",
               "t=" + format_value(t) + " " + region_label(region, primed) + " " + cell.name(), t,
               cell.centre(), pts);
        }
      }
    }
  }

  void null_overlay(const NullOverlay& ray, std::size_t index) {
    (void)atlas_.resolve(ray.start);
    const double X0 = ray.start.X();
    const double Y0 = ray.start.Y();
    const double end = ray.hold_x ? win_.Y1 : win_.X1;
    const double from = ray.hold_x ? Y0 : X0;
    auto at = [&](double s) {
      return ray.hold_x ? GlobalPoint::from_lattice(X0, s, ray.start.omega)
                        : GlobalPoint::from_lattice(s, Y0, ray.start.omega);
    };
    auto radius_at = [&](double s) -> std::optional<double> {
      try {
        return atlas_.resolve(at(s)).r;
      } catch (const DomainError&) {
        return std::nullopt;
      }
    };
    Polyline line{"geodesic", "null " + std::string(ray.hold_x ? "X" : "Y") + " #" +
                                  std::to_string(index),
                  0.0, false, {}};
    const double h = kPi / opt_.samples;
    double good = from;
    for (double s = from; s <= end + 1e-12; s = std::min(s + h, end + 2e-12)) {
      if (s > end) s = end;
      const auto r = radius_at(s);
      if (!r) {
        double lo = good;
        double hi = s;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (radius_at(mid) ? lo : hi) = mid;
        }
        if (lo > good) {
          const GlobalPoint g = at(lo);
          line.vertices.push_back({g.x, g.y, *radius_at(lo)});
        }
        break;
      }
      const GlobalPoint g = at(s);
      line.vertices.push_back({g.x, g.y, *r});
      good = s;
      if (s >= end) break;
    }
    if (line.vertices.size() >= 2) out_.polylines.push_back(std::move(line));
  }

 private:
  const Atlas& atlas_;
  const DiagramOptions& opt_;
  DiagramDataset& out_;
  Window win_{};
  std::vector<CellId> cells_;
};

}  // namespace

std::size_t DiagramDataset::count(const std::string& layer) const {
  return static_cast<std::size_t>(std::count_if(
      polylines.begin(), polylines.end(), [&](const Polyline& p) { return p.layer == layer; }));
}

std::vector<BlockId> blocks_in_window(const DiagramOptions& o) {
  std::vector<BlockId> out;
  for (int m = o.m_min; m < o.m_max; ++m) {
    for (int n = o.n_min; n < o.n_max; ++n) {
      if (!same_parity(m, n)) out.push_back({(m - n - 1) / 2, (m + n + 1) / 2});
    }
  }
  return out;
}

DiagramDataset diagram_dataset(const Atlas& atlas, const DiagramOptions& options) {
  if (options.m_min >= options.m_max || options.n_min >= options.n_max) {
    throw DomainError("diagram window needs m_min < m_max and n_min < n_max");
  }
  if (options.samples < 2) throw DomainError("diagram needs at least 2 samples per curve");
  DiagramDataset out;
  out.options = options;
  out.blocks = blocks_in_window(options);
  const double X0 = options.m_min * kPi, X1 = options.m_max * kPi;
  const double Y0 = options.n_min * kPi, Y1 = options.n_max * kPi;
  const double s2 = std::sqrt(2.0);
  out.x_min = (X0 - Y1) / s2;
  out.x_max = (X1 - Y0) / s2;
  out.y_min = (X0 + Y0) / s2;
  out.y_max = (X1 + Y1) / s2;

  Builder b(atlas, options, out);
  b.blocks();
  b.horizons();
  for (double r : options.radii) b.radius_contour("r_contour", r);
  for (double t : options.times) {
    if (!std::isfinite(t)) throw DomainError("contour time must be finite");
    b.time_contour(t);
  }
  if (options.photon_sphere) {
    b.radius_contour("photon_sphere", atlas.tortoise().photon_sphere_radius());
  }
  std::size_t index = 0;
  for (const NullOverlay& ray : options.null_overlays) b.null_overlay(ray, index++);
  return out;
}

}  // namespace rnds
