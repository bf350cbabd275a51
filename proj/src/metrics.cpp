#include "chartkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "json.hpp"

#include "chartkit/parallel.hpp"

namespace chartkit {

namespace {

// Neighbors of i sorted by squared distance, ties by index; i itself excluded.
void neighbour_order(std::span<const Point2> pts, std::size_t i, std::vector<double>& dist,
                     std::vector<std::uint32_t>& order) {
  const std::size_t n = pts.size();
  dist.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = pts[j].x - pts[i].x;
    const double dy = pts[j].y - pts[i].y;
    dist[j] = dx * dx + dy * dy;
  }
  order.clear();
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) order.push_back(static_cast<std::uint32_t>(j));
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  });
}

void check_points(std::span<const Point2> pts, const char* who) {
  for (const auto& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError(std::string(who) + ": non-finite coordinate");
    }
  }
}

void check_pair(std::span<const Point2> truth, std::span<const Point2> chart, std::size_t k) {
  if (truth.size() != chart.size()) {
    throw DomainError("metrics: truth and chart differ in length");
  }
  if (!valid_k(truth.size(), k)) {
    throw DomainError("metrics: K = " + std::to_string(k) + " is invalid for n = " +
                      std::to_string(truth.size()) + " (need 1 <= K and 2n - 3K - 1 > 0)");
  }
  check_points(truth, "metrics");
  check_points(chart, "metrics");
}

double score(std::size_t n, std::size_t k, std::int64_t penalty) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return 1.0 - 2.0 * static_cast<double>(penalty) / (nn * kk * (2.0 * nn - 3.0 * kk - 1.0));
}

struct PenaltySums {
  std::vector<std::int64_t> tw;  // index K-1
  std::vector<std::int64_t> ct;
};

// For each K <= k_max: sum over i of the rank excess of i's K-neighbors in one
// space, measured by ranks in the other space.
PenaltySums penalty_sums(std::span<const Point2> truth, std::span<const Point2> chart,
                         std::size_t k_max, unsigned threads) {
  const std::size_t n = truth.size();
  std::vector<std::int64_t> rows_tw(n * k_max, 0);
  std::vector<std::int64_t> rows_ct(n * k_max, 0);

  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<double> dist;
    std::vector<std::uint32_t> t_order;
    std::vector<std::uint32_t> c_order;
    neighbour_order(truth, i, dist, t_order);
    neighbour_order(chart, i, dist, c_order);
    std::vector<std::uint32_t> t_rank(n, 0);
    std::vector<std::uint32_t> c_rank(n, 0);
    for (std::size_t m = 0; m < t_order.size(); ++m) {
      t_rank[t_order[m]] = static_cast<std::uint32_t>(m + 1);
      c_rank[c_order[m]] = static_cast<std::uint32_t>(m + 1);
    }
    for (std::size_t k = 1; k <= k_max; ++k) {
      std::int64_t tw = 0;
      std::int64_t ct = 0;
      const auto kk = static_cast<std::int64_t>(k);
      for (std::size_t m = 0; m < k; ++m) {
        tw += std::max<std::int64_t>(t_rank[c_order[m]] - kk, 0);
        ct += std::max<std::int64_t>(c_rank[t_order[m]] - kk, 0);
      }
      rows_tw[i * k_max + (k - 1)] = tw;
      rows_ct[i * k_max + (k - 1)] = ct;
    }
  });

  PenaltySums out{std::vector<std::int64_t>(k_max, 0), std::vector<std::int64_t>(k_max, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < k_max; ++k) {
      out.tw[k] += rows_tw[i * k_max + k];
      out.ct[k] += rows_ct[i * k_max + k];
    }
  }
  return out;
}

}  // namespace

RankMatrix rank_matrix(std::span<const Point2> points) {
  const std::size_t n = points.size();
  if (n < 2) throw DomainError("rank_matrix: need at least two points");
  check_points(points, "rank_matrix");
  std::vector<std::uint32_t> ranks(n * n, 0);
  std::vector<double> dist;
  std::vector<std::uint32_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    neighbour_order(points, i, dist, order);
    for (std::size_t m = 0; m < order.size(); ++m) {
      ranks[i * n + order[m]] = static_cast<std::uint32_t>(m + 1);
    }
  }
  return RankMatrix(n, std::move(ranks));
}

bool valid_k(std::size_t n, std::size_t k) {
  return k >= 1 && 3 * k + 1 < 2 * n;
}

std::size_t max_valid_k(std::size_t n) {
  if (2 * n < 5) return 0;
  return (2 * n - 2) / 3;
}

double trustworthiness(std::span<const Point2> truth, std::span<const Point2> chart, std::size_t k) {
  check_pair(truth, chart, k);
  return score(truth.size(), k, penalty_sums(truth, chart, k, 1).tw.back());
}

double continuity(std::span<const Point2> truth, std::span<const Point2> chart, std::size_t k) {
  check_pair(truth, chart, k);
  return score(truth.size(), k, penalty_sums(truth, chart, k, 1).ct.back());
}

double QualityReport::tw_at(std::size_t k) const {
  const auto it = std::find(k_values.begin(), k_values.end(), k);
  if (it == k_values.end()) throw DomainError("quality report has no K = " + std::to_string(k));
  return tw[static_cast<std::size_t>(it - k_values.begin())];
}

double QualityReport::ct_at(std::size_t k) const {
  const auto it = std::find(k_values.begin(), k_values.end(), k);
  if (it == k_values.end()) throw DomainError("quality report has no K = " + std::to_string(k));
  return ct[static_cast<std::size_t>(it - k_values.begin())];
}

QualityReport quality_curve(std::span<const Point2> truth, std::span<const Point2> chart,
                            std::size_t k_max, unsigned threads) {
  check_pair(truth, chart, k_max);
  const PenaltySums sums = penalty_sums(truth, chart, k_max, threads);
  QualityReport report;
  report.n = truth.size();
  for (std::size_t k = 1; k <= k_max; ++k) {
    report.k_values.push_back(k);
    report.tw.push_back(score(report.n, k, sums.tw[k - 1]));
    report.ct.push_back(score(report.n, k, sums.ct[k - 1]));
  }
  return report;
}

void write_metrics_json(const QualityReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["k"] = report.k_values;
  j["tw"] = report.tw;
  j["ct"] = report.ct;
  out << j.dump(2) << '\n';
}

}  // namespace chartkit
