#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "chartkit/scene.hpp"

namespace chartkit {

struct UeEstimate {
  std::size_t ue_id = 0;
  double theta_deg = 0.0;
  double rho = 0.0;
};

struct ChartPoint {
  std::size_t ue_id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Estimated and true positions in scene coordinates, both in UE order.
struct Chart {
  std::vector<ChartPoint> points;
  std::vector<Point2> truth;
  std::vector<unsigned char> is_vip;

  std::size_t size() const { return points.size(); }
  std::vector<Point2> estimated() const;
};

/// Maps an angle/range estimate to the ground plane, relative to the BS.
///
/// With `metric` set, rho is a slant range: the ground range is
/// sqrt(rho^2 - h^2) and x = rho * cos(theta) is the along-array offset, which
/// inverts true_polar exactly. Without it rho is treated as an unscaled
/// radius in the plane: (rho cos theta, rho sin theta).
Point2 polar_to_chart(double theta_deg, double rho, double bs_height, bool metric = true);

/// Both point sets are snapped to kCoordinateResolution.
/// Throws AssemblyError when an id is out of range, repeated or missing.
Chart build_chart(std::span<const UeEstimate> estimates, const Scene& scene, bool metric_rho);

/// CSV: ue_id,true_x,true_y,est_x,est_y,is_vip with 6 fractional digits.
void write_chart_csv(const Chart& chart, std::ostream& out);

}  // namespace chartkit
