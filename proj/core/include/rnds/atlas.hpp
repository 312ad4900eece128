#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rnds/charts.hpp"
#include "rnds/errors.hpp"

namespace rnds {

/// Point of the (x, y) plane of the maximal extension. Lattice coordinates
/// are X = (y + x)/√2, Y = (y - x)/√2.
struct GlobalPoint {
  double x = 0.0;
  double y = 0.0;
  Angles omega{};

  [[nodiscard]] static GlobalPoint from_lattice(double X, double Y, Angles omega = {});
  [[nodiscard]] double X() const noexcept;
  [[nodiscard]] double Y() const noexcept;
};

enum class CellKind { A, B, C };

/// A_{k,l} is centred at (mπ, nπ), B_{k,l} at ((m+½)π, (n+½)π), C_{k,l} at
/// ((m+1)π, nπ) in (X, Y), with m = l + k and n = l - k.
struct CellId {
  CellKind kind = CellKind::A;
  int k = 0;
  int l = 0;

  [[nodiscard]] int chart() const noexcept;  ///< Kruskal chart 1, 2, 3
  [[nodiscard]] std::array<double, 2> centre() const noexcept;  ///< (X, Y)
  [[nodiscard]] std::string name() const;
  friend bool operator==(const CellId&, const CellId&) = default;
};

/// Removed block S_{k,l}, centred at ((k+l+½)π, (l-k-½)π) in (X, Y).
struct BlockId {
  int k = 0;
  int l = 0;
  [[nodiscard]] std::array<double, 2> centre() const noexcept;
  [[nodiscard]] std::string name() const;
};

/// The point lies in the part of a removed block that no chart covers
/// (beyond r = 0 or beyond ℐ).
class ExcludedPointError : public DomainError {
 public:
  ExcludedPointError(const std::string& what, BlockId block)
      : DomainError(what), block_(block) {}
  [[nodiscard]] BlockId block() const noexcept { return block_; }

 private:
  BlockId block_;
};

/// The point is a corner of a removed block: i+ or i-.
class TimelikeInfinityError : public DomainError {
 public:
  TimelikeInfinityError(const std::string& what, BlockId block, bool future)
      : DomainError(what), block_(block), future_(future) {}
  [[nodiscard]] BlockId block() const noexcept { return block_; }
  [[nodiscard]] bool future() const noexcept { return future_; }

 private:
  BlockId block_;
  bool future_;
};

struct AtlasConfig {
  /// Common exponent scale λ; defaults to max|a_1|, |a_2|, |a_3|.
  std::optional<double> lambda;
  /// Distance in X, Y under which a point is snapped to a lattice line.
  double margin = 1e-12;
};

struct Membership {
  CellId cell;
  ChartPoint point;  ///< Kruskal coordinates in chart cell.chart()
};

struct AtlasResolution {
  GlobalPoint point;
  std::vector<Membership> memberships;
  KruskalLocation location;
  std::string label;
  double r = 0.0;
  std::optional<double> t;
};

/// Lattice of Kruskal charts gluing copies of regions I-IV.
///
/// Chart maps: U+ = sgn(sX) κ_i |tan sX|^{p_i}, U- = sgn(sY) κ_i |tan sY|^{p_i}
/// with (sX, sY) the offset from the cell centre, p_i = λ/|a_i| and
/// κ_i = e^{μ/a_i}, μ = a/2. With these exponents r_* = 2μ - λ ln|tan sX tan sY|
/// and t agree on every overlap, so r is a single-valued field on the plane.
/// ℐ sits on the straight block edges tan sX tan sY = 1; r = 0 bulges into
/// the block along |tan sX tan sY| = e^{(a-b)/λ}.
class Atlas {
 public:
  explicit Atlas(const TortoiseMap& map, AtlasConfig config = {});

  [[nodiscard]] const TortoiseMap& tortoise() const noexcept { return map_; }
  [[nodiscard]] const KruskalChart& chart(int i) const;
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] double mu() const noexcept { return mu_; }
  [[nodiscard]] double exponent(int i) const;  ///< p_i
  [[nodiscard]] double margin() const noexcept { return config_.margin; }
  /// r = 0 in A cells sits on |tan sX tan sY| = c_A.
  [[nodiscard]] double singularity_level() const noexcept;
  /// ℐ in C cells sits on |tan sX tan sY| = c_C.
  [[nodiscard]] double scri_level() const noexcept;

  /// Cells whose open square contains the point (ignoring the r = 0 and ℐ cuts).
  [[nodiscard]] std::vector<CellId> candidate_cells(const GlobalPoint& p) const;
  /// Whether the cell's chart covers the point.
  [[nodiscard]] bool contains(const CellId& cell, const GlobalPoint& p) const;
  /// Kruskal coordinates of p under the cell's chart map. DomainError when p
  /// is outside the cell.
  [[nodiscard]] ChartPoint chart_point(const CellId& cell, const GlobalPoint& p) const;
  /// Inverse chart map.
  [[nodiscard]] GlobalPoint plane_point(const CellId& cell, const ChartPoint& k) const;

  /// All memberships, r, t and label. Throws ExcludedPointError or
  /// TimelikeInfinityError.
  [[nodiscard]] AtlasResolution resolve(const GlobalPoint& p) const;

  /// Re-express a point of one cell's chart in another cell's chart.
  [[nodiscard]] ChartPoint transition(const CellId& from, const ChartPoint& k,
                                      const CellId& to) const;

  /// ln|tan sX tan sY| along the constant-r curve of Kruskal chart `chart`,
  /// valid in the quadrants holding r's region.
  [[nodiscard]] double radius_log_level(int chart, double r) const;

  /// The removed block containing (X, Y) in its open square, if any.
  [[nodiscard]] std::optional<BlockId> block_at(double X, double Y) const;

 private:
  [[nodiscard]] bool in_square(const CellId& cell, double X, double Y) const;

  TortoiseMap map_;
  AtlasConfig config_;
  std::vector<KruskalChart> charts_;
  double lambda_ = 1.0;
  double mu_ = 0.0;
};

/// Label of the resolution ("III", "II'", "H2+", "-H1-", "S1").
[[nodiscard]] std::string region_label(const AtlasResolution& res);

}  // namespace rnds
