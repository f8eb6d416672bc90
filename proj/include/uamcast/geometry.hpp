#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uamcast {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct GridSpec {
  double cell_edge_km = 2.0;
};

/// One square cell on the integer lattice. The city center cell is (0, 0);
/// physical centers are (ix*s, iy*s) with s the cell edge length.
struct Cell {
  std::int32_t ix = 0;
  std::int32_t iy = 0;
};

/// Exact squared lattice offset between two cells. Two OD pairs belong to
/// the same distance class iff their keys are equal; no floating-point
/// bucketing is involved anywhere.
inline std::int64_t squared_offset(const Cell& a, const Cell& b) {
  const std::int64_t dx = static_cast<std::int64_t>(a.ix) - b.ix;
  const std::int64_t dy = static_cast<std::int64_t>(a.iy) - b.iy;
  return dx * dx + dy * dy;
}

/// The generic circular city: every lattice cell whose center lies inside
/// the circle of radius sqrt(area/pi). The center cell always qualifies,
/// so tiny areas degenerate to a single-cell grid rather than failing.
class CityGrid {
 public:
  CityGrid(GridSpec spec, double radius_km, std::vector<Cell> cells, std::size_t center_index,
           std::int64_t max_center_key)
      : spec_(spec),
        radius_km_(radius_km),
        cells_(std::move(cells)),
        center_index_(center_index),
        max_center_key_(max_center_key) {}

  const GridSpec& spec() const { return spec_; }
  double cell_edge_km() const { return spec_.cell_edge_km; }
  double radius_km() const { return radius_km_; }
  const std::vector<Cell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  std::size_t center_index() const { return center_index_; }

  Vec2 center_of(std::size_t i) const {
    const Cell& c = cells_[i];
    return {c.ix * spec_.cell_edge_km, c.iy * spec_.cell_edge_km};
  }

  /// Radial coordinate of cell i: distance of its center point from the
  /// city center. Derived from the exact key so equal keys give
  /// bit-identical distances; the center cell itself sits at 0. This is a
  /// position, not a trip length -- the intra-cell travel convention of
  /// key_distance_km does not apply here.
  double center_distance_km(std::size_t i) const {
    const std::int64_t key = squared_offset(cells_[i], cells_[center_index_]);
    return key == 0 ? 0.0 : spec_.cell_edge_km * std::sqrt(static_cast<double>(key));
  }

  std::int64_t pair_key(std::size_t i, std::size_t j) const {
    return squared_offset(cells_[i], cells_[j]);
  }

  /// Physical distance for a class key; key 0 is the intra-cell class at
  /// half a cell edge.
  double key_distance_km(std::int64_t key) const {
    if (key == 0) return spec_.cell_edge_km / 2.0;
    return spec_.cell_edge_km * std::sqrt(static_cast<double>(key));
  }

  /// Largest center-to-cell distance (0 for a single-cell grid).
  double max_center_distance_km() const {
    return max_center_key_ == 0 ? 0.0 : spec_.cell_edge_km * std::sqrt(static_cast<double>(max_center_key_));
  }

  std::int64_t max_center_key() const { return max_center_key_; }

  /// Upper bound on any pair key; sizes the key-indexed scratch tables.
  std::int64_t max_pair_key_bound() const { return 4 * max_center_key_ + 1; }

 private:
  GridSpec spec_;
  double radius_km_ = 0.0;
  std::vector<Cell> cells_;
  std::size_t center_index_ = 0;
  std::int64_t max_center_key_ = 0;
};

struct DistanceClass {
  std::int64_t key = 0;
  double distance_km = 0.0;
};

struct NearestVertiport {
  std::size_t index = 0;
  double distance_km = 0.0;
};

struct VertiportNetwork {
  std::vector<Vec2> positions;
  double radius_km = 0.0;

  std::size_t count() const { return positions.size(); }
};

inline CityGrid build_grid(double area_sqkm, const GridSpec& spec = {}) {
  if (!(area_sqkm > 0.0)) throw std::invalid_argument("build_grid: area_sqkm must be positive");
  if (!(spec.cell_edge_km > 0.0)) throw std::invalid_argument("build_grid: cell_edge_km must be positive");

  const double s = spec.cell_edge_km;
  const double radius_km = std::sqrt(area_sqkm / std::numbers::pi);
  const double q = radius_km / s;
  const double limit = q * q;  // include (ix, iy) iff ix^2 + iy^2 <= limit
  const auto m = static_cast<std::int32_t>(std::floor(q));

  std::vector<Cell> cells;
  std::size_t center_index = 0;
  std::int64_t max_key = 0;
  for (std::int32_t iy = -m; iy <= m; ++iy) {
    for (std::int32_t ix = -m; ix <= m; ++ix) {
      const std::int64_t key =
          static_cast<std::int64_t>(ix) * ix + static_cast<std::int64_t>(iy) * iy;
      if (static_cast<double>(key) > limit) continue;
      if (ix == 0 && iy == 0) center_index = cells.size();
      if (key > max_key) max_key = key;
      cells.push_back({ix, iy});
    }
  }
  // The center cell satisfies the rule for any positive area; the loop above
  // can only miss it if m underflowed, so restore the degenerate grid.
  if (cells.empty()) {
    cells.push_back({0, 0});
    center_index = 0;
    max_key = 0;
  }
  return CityGrid(spec, radius_km, std::move(cells), center_index, max_key);
}

/// All distance classes present among cell pairs, intra-cell class first,
/// sorted strictly ascending by distance.
inline std::vector<DistanceClass> distance_classes(const CityGrid& grid) {
  std::vector<char> seen(static_cast<std::size_t>(grid.max_pair_key_bound()) + 1, 0);
  seen[0] = 1;  // intra-cell class always exists
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      seen[static_cast<std::size_t>(grid.pair_key(i, j))] = 1;
    }
  }
  std::vector<DistanceClass> classes;
  for (std::size_t key = 0; key < seen.size(); ++key) {
    if (seen[key]) {
      classes.push_back({static_cast<std::int64_t>(key),
                         grid.key_distance_km(static_cast<std::int64_t>(key))});
    }
  }
  return classes;
}

/// Golden angle in radians: 2*pi*(1 - 1/phi).
inline constexpr double golden_angle_rad = 2.39996322972865332;

/// Sunflower (Vogel) layout: point i of n at polar radius R*sqrt((i-0.5)/n)
/// and angle i*golden_angle. Deterministic; all points strictly inside the
/// disk. A usable network needs at least five vertiports.
inline VertiportNetwork place_vertiports(double radius_km, int n) {
  if (n < 5) throw std::invalid_argument("place_vertiports: vertiport count must be at least 5");
  if (!(radius_km > 0.0)) throw std::invalid_argument("place_vertiports: radius_km must be positive");

  VertiportNetwork net;
  net.radius_km = radius_km;
  net.positions.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const double r = radius_km * std::sqrt((i - 0.5) / n);
    const double theta = i * golden_angle_rad;
    net.positions.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return net;
}

/// Nearest vertiport by Euclidean distance; ties resolve to the lowest index.
inline NearestVertiport nearest_vertiport(const Vec2& point, const VertiportNetwork& network) {
  if (network.positions.empty()) {
    throw std::invalid_argument("nearest_vertiport: network has no vertiports");
  }
  std::size_t best = 0;
  double best_d = distance(point, network.positions[0]);
  for (std::size_t i = 1; i < network.positions.size(); ++i) {
    const double d = distance(point, network.positions[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {best, best_d};
}

}  // namespace uamcast
