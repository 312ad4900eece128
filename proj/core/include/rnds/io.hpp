#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rnds/charts.hpp"
#include "rnds/diagram.hpp"
#include "rnds/geodesics.hpp"
#include "rnds/horizons.hpp"

namespace rnds {

/// Everything a CLI run needs. Filled from defaults, then a JSON config
/// file, then command-line flags.
struct RunConfig {
  BlackHoleParams params{1.5, 1.0, 0.01};
  std::string format;  ///< json, csv, svg or text; empty picks the command's default
  std::string out;              ///< output path or prefix; empty writes to stdout
  double tol_rel = 1e-10;
  double tol_abs = 1e-12;
  std::uint64_t seed = 20240601;
  /// Affine-parameter budget (geodesic, default 100) or sample count (scan,
  /// default 10000).
  std::optional<double> budget;
  int samples = 64;             ///< vertices per diagram curve
  std::array<int, 4> window{-2, 2, -2, 2};  ///< m_min, m_max, n_min, n_max
  std::vector<double> radii;
  std::vector<double> times;
  bool photon_sphere = true;
};

/// Overwrites the fields named in a flat JSON object. Keys: M, Q, L,
/// format, out, tol_rel, tol_abs, seed, budget, samples, window, radii,
/// times, photon_sphere. DomainError on unknown keys or wrong types.
void apply_config_json(RunConfig& config, std::string_view text);

/// DomainError unless tolerances and budget are positive and the format is
/// one of the known selectors.
void validate(const RunConfig& config);

/// Shortest text that parses back to the same double; inf and nan spelled out.
[[nodiscard]] std::string format_shortest(double v);
/// Nine significant digits, as used for SVG geometry.
[[nodiscard]] std::string format_svg(double v);

[[nodiscard]] std::string classify_json(const BlackHoleParams& params);
[[nodiscard]] std::string classify_text(const BlackHoleParams& params);

/// {"chart": "kruskal", "index": 2, "primed": false, "coords": [..], ...}
[[nodiscard]] std::string chart_point_json(const ChartPoint& p);
/// Conversion record: source, target, r and label.
[[nodiscard]] std::string conversion_json(const ChartPoint& from, const ChartPoint& to,
                                          double r, const std::string& label);

/// One row per sample: tau, chart, index, primed, c0, c1, v0, v1, r, r_dot,
/// energy, killing, energy_residual, killing_residual.
[[nodiscard]] std::string trajectory_csv(const GeodesicTrajectory& traj);
[[nodiscard]] std::string events_json(const GeodesicTrajectory& traj);

/// One row per vertex: layer, polyline, x, y, r.
[[nodiscard]] std::string dataset_csv(const DiagramDataset& data);
[[nodiscard]] std::string dataset_manifest_json(const DiagramDataset& data,
                                                const BlackHoleParams& params);
[[nodiscard]] std::string dataset_svg(const DiagramDataset& data);

struct ScanRow {
  BlackHoleParams params;
  bool gc = false;
  bool degenerate = false;
  HorizonClass classification = HorizonClass::Invalid;
  int positive_roots = 0;
};

/// Random (M, Q, Λ) with Q ∈ (0, 2], Λ ∈ (0, 1/(8Q²)) and M spread around
/// the three-horizon window, drawn from a seeded mt19937_64.
[[nodiscard]] std::vector<ScanRow> scan_parameters(std::size_t count, std::uint64_t seed);
[[nodiscard]] std::string scan_csv(const std::vector<ScanRow>& rows);
[[nodiscard]] std::string scan_json(const std::vector<ScanRow>& rows);

}  // namespace rnds
