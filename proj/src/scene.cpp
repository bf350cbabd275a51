#include "chartkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>

#include "chartkit/rng.hpp"

namespace chartkit {

namespace {

using Polyline = std::vector<Point2>;

// Glyph strokes in letter-height units; the word spans x in [0, 1.75].
std::vector<Polyline> vip_strokes() {
  std::vector<Polyline> strokes;
  // V
  strokes.push_back({{0.0, 1.0}, {0.3, 0.0}, {0.6, 1.0}});
  // I
  strokes.push_back({{0.9, 0.0}, {0.9, 1.0}});
  // P: stem, then the bowl as a half circle closed back onto the stem.
  strokes.push_back({{1.2, 0.0}, {1.2, 1.0}});
  Polyline bowl{{1.2, 1.0}, {1.5, 1.0}};
  constexpr int kArcSegments = 16;
  for (int s = 1; s <= kArcSegments; ++s) {
    const double a = std::numbers::pi / 2.0 - std::numbers::pi * s / kArcSegments;
    bowl.push_back({1.5 + 0.25 * std::cos(a), 0.75 + 0.25 * std::sin(a)});
  }
  bowl.push_back({1.2, 0.5});
  strokes.push_back(std::move(bowl));
  return strokes;
}

constexpr double kWordWidth = 1.75;

double segment_length(const Point2& a, const Point2& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace

void SceneConfig::validate() const {
  if (!(area_x > 0.0) || !(area_y > 0.0) || !std::isfinite(area_x) || !std::isfinite(area_y)) {
    throw ConfigError("scene: area dimensions must be positive and finite");
  }
  if (!(bs_height >= 0.0) || !std::isfinite(bs_height)) {
    throw ConfigError("scene: bs_height must be finite and non-negative");
  }
  if (n_vip > n_ue) {
    throw ConfigError("scene: n_vip (" + std::to_string(n_vip) + ") exceeds n_ue (" +
                      std::to_string(n_ue) + ")");
  }
}

Scene::Scene(Position3 bs, std::vector<Position3> ues, std::vector<std::size_t> vip_indices,
             SceneConfig config)
    : bs_(bs),
      ues_(std::move(ues)),
      vip_indices_(std::move(vip_indices)),
      vip_mask_(ues_.size(), 0),
      config_(config) {
  for (std::size_t i : vip_indices_) {
    vip_mask_.at(i) = 1;
  }
}

std::vector<Point2> vip_glyph_points(std::size_t n, double cx, double cy, double height) {
  std::vector<Point2> out;
  if (n == 0) {
    return out;
  }
  const auto strokes = vip_strokes();
  double total = 0.0;
  for (const auto& line : strokes) {
    for (std::size_t k = 1; k < line.size(); ++k) {
      total += segment_length(line[k - 1], line[k]);
    }
  }

  const double x0 = cx - 0.5 * kWordWidth * height;
  const double y0 = cy - 0.5 * height;
  const double spacing = total / static_cast<double>(n);

  // Walk the concatenated strokes, emitting a point at arc length (i + 1/2) * spacing.
  out.reserve(n);
  double walked = 0.0;
  std::size_t next = 0;
  for (const auto& line : strokes) {
    for (std::size_t k = 1; k < line.size() && next < n; ++k) {
      const Point2& a = line[k - 1];
      const Point2& b = line[k];
      const double len = segment_length(a, b);
      while (next < n) {
        const double target = (static_cast<double>(next) + 0.5) * spacing;
        if (target > walked + len) {
          break;
        }
        const double t = len > 0.0 ? (target - walked) / len : 0.0;
        out.push_back({x0 + height * (a.x + t * (b.x - a.x)), y0 + height * (a.y + t * (b.y - a.y))});
        ++next;
      }
      walked += len;
    }
  }
  // Rounding at the very end of the path can leave the last target unmatched.
  while (out.size() < n) {
    const Point2& last = strokes.back().back();
    out.push_back({x0 + height * last.x, y0 + height * last.y});
  }
  return out;
}

double snap_coordinate(double v) { return std::nearbyint(v / kCoordinateResolution) * kCoordinateResolution; }

Scene generate_scene(const SceneConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);

  // Partial Fisher-Yates picks which indices carry the VIP glyph.
  std::vector<std::size_t> order(cfg.n_ue);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < cfg.n_vip; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(cfg.n_ue - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::size_t> vip(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cfg.n_vip));
  std::sort(vip.begin(), vip.end());

  const double height = std::min(0.48 * cfg.area_y, 0.8 * cfg.area_x / kWordWidth);
  const auto glyph = vip_glyph_points(cfg.n_vip, 0.5 * cfg.area_x, 0.5 * cfg.area_y, height);

  std::vector<Position3> ues(cfg.n_ue);
  std::vector<unsigned char> is_vip(cfg.n_ue, 0);
  for (std::size_t k = 0; k < vip.size(); ++k) {
    ues[vip[k]] = {snap_coordinate(glyph[k].x), snap_coordinate(glyph[k].y), 0.0};
    is_vip[vip[k]] = 1;
  }
  for (std::size_t i = 0; i < cfg.n_ue; ++i) {
    if (is_vip[i] == 0) {
      const double x = rng.uniform(0.0, cfg.area_x);
      const double y = rng.uniform(0.0, cfg.area_y);
      ues[i] = {snap_coordinate(x), snap_coordinate(y), 0.0};
    }
  }

  const Position3 bs{0.5 * cfg.area_x, 0.0, cfg.bs_height};
  return Scene(bs, std::move(ues), std::move(vip), cfg);
}

Polar true_polar(const Scene& scene, std::size_t ue_index) {
  const Position3& bs = scene.bs();
  const Position3& ue = scene.ue(ue_index);
  const double dx = ue.x - bs.x;
  const double dy = ue.y - bs.y;
  const double dz = ue.z - bs.z;
  const double rho = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (rho == 0.0) {
    return {90.0, 0.0};
  }
  const double c = std::clamp(dx / rho, -1.0, 1.0);
  return {std::acos(c) * 180.0 / std::numbers::pi, rho};
}

void write_scene_csv(const Scene& scene, std::ostream& out) {
  out << "ue_id,x,y,z,is_vip\n";
  char line[160];
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const Position3& p = scene.ue(i);
    std::snprintf(line, sizeof line, "%zu,%.6f,%.6f,%.6f,%d\n", i, p.x, p.y, p.z,
                  scene.is_vip(i) ? 1 : 0);
    out << line;
  }
}

}  // namespace chartkit
