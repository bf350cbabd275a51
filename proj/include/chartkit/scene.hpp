#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "chartkit/common.hpp"

namespace chartkit {

struct Position3 {
  double x = 0.0;  // m
  double y = 0.0;  // m
  double z = 0.0;  // m
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct SceneConfig {
  double area_x = 1000.0;  // m
  double area_y = 500.0;   // m
  std::size_t n_ue = 2048;
  std::size_t n_vip = 234;
  double bs_height = 8.5;  // m
  std::uint64_t rng_seed = 1;

  /// Throws ConfigError on non-positive area/height or n_vip > n_ue.
  void validate() const;
};

/// Scene and chart coordinates are kept on a 1 micrometre grid, the
/// resolution of the CSV outputs.
inline constexpr double kCoordinateResolution = 1e-6;  // m
double snap_coordinate(double v);

/// Angle of arrival (degrees, measured from the +x array axis) and 3-D range.
struct Polar {
  double theta_deg = 0.0;
  double rho = 0.0;
};

/// Immutable deployment: one BS at the midpoint of the y = 0 edge, a ULA along
/// +x through it, and n_ue UEs on the ground plane z = 0.
class Scene {
 public:
  Scene(Position3 bs, std::vector<Position3> ues, std::vector<std::size_t> vip_indices,
        SceneConfig config);

  const Position3& bs() const { return bs_; }
  const std::vector<Position3>& ues() const { return ues_; }
  const Position3& ue(std::size_t i) const { return ues_.at(i); }
  std::size_t size() const { return ues_.size(); }
  const std::vector<std::size_t>& vip_indices() const { return vip_indices_; }
  bool is_vip(std::size_t i) const { return vip_mask_.at(i) != 0; }
  const SceneConfig& config() const { return config_; }

  /// UE position in the horizontal plane (scene frame).
  Point2 ground(std::size_t i) const { return {ues_.at(i).x, ues_.at(i).y}; }

 private:
  Position3 bs_;
  std::vector<Position3> ues_;
  std::vector<std::size_t> vip_indices_;
  std::vector<unsigned char> vip_mask_;
  SceneConfig config_;
};

/// Random UE placement with n_vip UEs laid out along the strokes of "VIP".
///
/// The VIP UEs occupy a random (seeded) subset of indices so that any
/// prefix of the UE list, such as a regression training set, mixes both
/// populations. All other UEs are uniform over the rectangle.
Scene generate_scene(const SceneConfig& cfg);

/// n points at equal arc-length spacing along the glyph polylines of "VIP",
/// centred at (cx, cy) with letter height `height`.
std::vector<Point2> vip_glyph_points(std::size_t n, double cx, double cy, double height);

/// Ground-truth angle of arrival and 3-D BS-UE distance.
Polar true_polar(const Scene& scene, std::size_t ue_index);

/// CSV: ue_id,x,y,z,is_vip with 6 fractional digits.
void write_scene_csv(const Scene& scene, std::ostream& out);

}  // namespace chartkit
