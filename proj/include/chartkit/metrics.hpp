#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "chartkit/scene.hpp"

namespace chartkit {

/// rank(i, j): position of j among all points other than i, ordered by
/// distance from i and then by index, starting at 1. rank(i, i) = 0.
class RankMatrix {
 public:
  RankMatrix(std::size_t n, std::vector<std::uint32_t> ranks) : n_(n), ranks_(std::move(ranks)) {}

  std::size_t size() const { return n_; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return ranks_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> ranks_;
};

RankMatrix rank_matrix(std::span<const Point2> points);

/// True when 1 <= k and 2n - 3k - 1 > 0.
bool valid_k(std::size_t n, std::size_t k);

/// Largest valid K for n points (0 if none).
std::size_t max_valid_k(std::size_t n);

double trustworthiness(std::span<const Point2> truth, std::span<const Point2> chart, std::size_t k);
double continuity(std::span<const Point2> truth, std::span<const Point2> chart, std::size_t k);

struct QualityReport {
  std::size_t n = 0;
  std::vector<std::size_t> k_values;
  std::vector<double> tw;
  std::vector<double> ct;

  double tw_at(std::size_t k) const;
  double ct_at(std::size_t k) const;
};

/// TW and CT for K = 1..k_max, computed from one pass over both rank tables.
QualityReport quality_curve(std::span<const Point2> truth, std::span<const Point2> chart,
                            std::size_t k_max = 102, unsigned threads = 1);

/// {"n": ..., "k": [...], "tw": [...], "ct": [...]}
void write_metrics_json(const QualityReport& report, std::ostream& out);

}  // namespace chartkit
