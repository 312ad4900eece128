#pragma once

#include <string>
#include <vector>

#include "rnds/atlas.hpp"

namespace rnds {

struct DiagramVertex {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;  ///< 0 on r = 0, inf on ℐ, NaN at i±
};

struct Polyline {
  std::string layer;  ///< block, singularity, scri, horizon, r_contour, t_contour, photon_sphere, geodesic
  std::string label;
  double value = 0.0;  ///< contour level (r or t); horizon radius; 0 otherwise
  bool closed = false;
  std::vector<DiagramVertex> vertices;
};

/// A future-directed radial null ray drawn from `start`. hold_x keeps X
/// fixed (the ray runs along increasing Y), otherwise Y is held.
struct NullOverlay {
  GlobalPoint start;
  bool hold_x = false;
};

/// The viewport is X ∈ [m_min π, m_max π], Y ∈ [n_min π, n_max π].
struct DiagramOptions {
  int m_min = -2;
  int m_max = 2;
  int n_min = -2;
  int n_max = 2;
  std::vector<double> radii;
  std::vector<double> times;
  bool photon_sphere = true;
  std::vector<NullOverlay> null_overlays;
  int samples = 64;  ///< vertices per curve
};

struct DiagramDataset {
  DiagramOptions options;
  std::vector<BlockId> blocks;
  std::vector<Polyline> polylines;
  /// Bounding box of the viewport in (x, y).
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  [[nodiscard]] std::size_t count(const std::string& layer) const;
};

/// Removed blocks whose centre lies in the viewport.
[[nodiscard]] std::vector<BlockId> blocks_in_window(const DiagramOptions& options);

/// Layers in a fixed order: block, singularity, scri, horizon, r_contour,
/// t_contour, photon_sphere, geodesic. Within a layer, cells are visited by
/// increasing (X, Y) of their centres.
[[nodiscard]] DiagramDataset diagram_dataset(const Atlas& atlas, const DiagramOptions& options);

}  // namespace rnds
