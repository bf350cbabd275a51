#include "chartkit/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace chartkit {

std::vector<Point2> Chart::estimated() const {
  std::vector<Point2> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p.x, p.y});
  return out;
}

Point2 polar_to_chart(double theta_deg, double rho, double bs_height, bool metric) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw DomainError("polar_to_chart: theta outside [0, 180] degrees");
  }
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("polar_to_chart: rho must be finite and non-negative");
  }
  const double t = theta_deg * std::numbers::pi / 180.0;
  if (!metric) return {rho * std::cos(t), rho * std::sin(t)};

  const double ground = std::sqrt(std::max(rho * rho - bs_height * bs_height, 0.0));
  if (ground == 0.0) return {0.0, 0.0};
  const double x = std::clamp(rho * std::cos(t), -ground, ground);
  return {x, std::sqrt(std::max(ground * ground - x * x, 0.0))};
}

Chart build_chart(std::span<const UeEstimate> estimates, const Scene& scene, bool metric_rho) {
  const std::size_t n = scene.size();
  std::vector<const UeEstimate*> by_ue(n, nullptr);
  for (const auto& e : estimates) {
    if (e.ue_id >= n) {
      throw AssemblyError("build_chart: UE id " + std::to_string(e.ue_id) + " out of range");
    }
    if (by_ue[e.ue_id] != nullptr) {
      throw AssemblyError("build_chart: duplicate estimate for UE " + std::to_string(e.ue_id));
    }
    by_ue[e.ue_id] = &e;
  }

  const Position3& bs = scene.bs();
  Chart chart;
  chart.points.reserve(n);
  chart.truth.reserve(n);
  chart.is_vip.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (by_ue[i] == nullptr) {
      throw AssemblyError("build_chart: missing estimate for UE " + std::to_string(i));
    }
    const Point2 local = polar_to_chart(by_ue[i]->theta_deg, by_ue[i]->rho, bs.z, metric_rho);
    chart.points.push_back({i, snap_coordinate(bs.x + local.x), snap_coordinate(bs.y + local.y)});
    const Point2 g = scene.ground(i);
    chart.truth.push_back({snap_coordinate(g.x), snap_coordinate(g.y)});
    chart.is_vip.push_back(scene.is_vip(i) ? 1 : 0);
  }
  return chart;
}

void write_chart_csv(const Chart& chart, std::ostream& out) {
  out << "ue_id,true_x,true_y,est_x,est_y,is_vip\n";
  char line[192];
  for (std::size_t i = 0; i < chart.size(); ++i) {
    const ChartPoint& p = chart.points[i];
    const Point2& t = chart.truth[i];
    std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f,%.6f,%d\n", p.ue_id, t.x, t.y, p.x, p.y,
                  chart.is_vip[i] != 0 ? 1 : 0);
    out << line;
  }
}

}  // namespace chartkit
