#include "drd/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "drd/rng.hpp"

namespace drd {

namespace {

using Point = std::vector<double>;

double squared_distance(const Point& a, const Point& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

std::size_t nearest(const Point& p, const std::vector<Point>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

constexpr std::uint64_t kTagPoints = 1;
constexpr std::uint64_t kTagLloyd = 2;
constexpr std::uint64_t kTagTests = 3;
constexpr std::uint64_t kTagDecisions = 4;

}  // namespace

void ClusteredParams::validate() const {
  if (num_points < 1 || dim < 1 || num_clusters < 1 || num_tests < 1) {
    throw std::invalid_argument("clustered: counts must be >= 1");
  }
  if (assign_alpha < 1 || assign_alpha > num_clusters) {
    throw std::invalid_argument("clustered: alpha must be in [1, clusters]");
  }
  if (num_clusters > num_points) {
    throw std::invalid_argument("clustered: more clusters than points");
  }
  if (num_points < 2) throw std::invalid_argument("clustered: tests need two points");
  if (!(cluster_spread > 0.0)) throw std::invalid_argument("clustered: spread must be > 0");
  if (lloyd_iterations < 0) throw std::invalid_argument("clustered: negative iterations");
}

void Localization2dParams::validate() const {
  if (num_hypotheses < 1 || num_decisions < 1 || num_guarded_moves < 1 || num_bins < 1) {
    throw std::invalid_argument("localization2d: counts must be >= 1");
  }
  if (!(gaussian_sigma > 0.0)) throw std::invalid_argument("localization2d: sigma must be > 0");
  if (!(decision_radius > 0.0)) throw std::invalid_argument("localization2d: radius must be > 0");
}

Clustering lloyd(const std::vector<Point>& points, std::size_t clusters, int iterations,
                 std::uint64_t seed) {
  if (clusters == 0 || clusters > points.size()) {
    throw std::invalid_argument("lloyd: need 1 <= clusters <= points");
  }
  CounterRng rng = CounterRng(seed).derive({kTagLloyd});
  Clustering result;
  // Farthest-point seeding; ties go to the lowest point index.
  result.centroids.push_back(points[rng.below(points.size())]);
  std::vector<double> closest(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    closest[i] = squared_distance(points[i], result.centroids[0]);
  }
  while (result.centroids.size() < clusters) {
    const std::size_t far = static_cast<std::size_t>(
        std::max_element(closest.begin(), closest.end()) - closest.begin());
    result.centroids.push_back(points[far]);
    for (std::size_t i = 0; i < points.size(); ++i) {
      closest[i] = std::min(closest[i], squared_distance(points[i], points[far]));
    }
  }

  const std::size_t dim = points.front().size();
  result.assignment.assign(points.size(), 0);
  for (int iter = 0; iter < iterations; ++iter) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      result.assignment[i] = nearest(points[i], result.centroids);
    }
    std::vector<Point> sums(clusters, Point(dim, 0.0));
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = result.assignment[i];
      ++counts[c];
      for (std::size_t j = 0; j < dim; ++j) sums[c][j] += points[i][j];
    }
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) result.centroids[c][j] = sums[c][j] / counts[c];
        continue;
      }
      // Empty cluster: move it onto the worst-served point.
      std::size_t worst = 0;
      double worst_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = squared_distance(points[i], result.centroids[result.assignment[i]]);
        if (d > worst_d) {
          worst_d = d;
          worst = i;
        }
      }
      result.centroids[c] = points[worst];
      result.assignment[worst] = c;
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.assignment[i] = nearest(points[i], result.centroids);
  }
  return result;
}

InstanceDocument generate_clustered_from_points(const std::vector<Point>& points,
                                                const ClusteredParams& params,
                                                std::uint64_t seed) {
  ClusteredParams p = params;
  p.num_points = points.size();
  if (!points.empty()) p.dim = points.front().size();
  p.validate();
  for (const Point& x : points) {
    if (x.size() != p.dim) throw std::invalid_argument("clustered: ragged point dimensions");
  }
  const std::size_t n = points.size();
  const Clustering clustering = lloyd(points, p.num_clusters, p.lloyd_iterations, seed);

  InstanceDocument doc;
  doc.coverage = CoverageMode::kStrict;
  InstanceData& data = doc.data;
  data.weights.assign(n, 1.0);
  data.regions.assign(p.num_clusters, {});
  std::vector<std::pair<double, std::size_t>> order(p.num_clusters);
  for (HypothesisId h = 0; h < n; ++h) {
    for (std::size_t c = 0; c < p.num_clusters; ++c) {
      order[c] = {squared_distance(points[h], clustering.centroids[c]), c};
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(p.assign_alpha),
                      order.end());
    for (std::size_t a = 0; a < p.assign_alpha; ++a) data.regions[order[a].second].push_back(h);
  }
  for (auto& region : data.regions) std::sort(region.begin(), region.end());

  // Distinct unordered point pairs; capped by the number of pairs available.
  CounterRng rng = CounterRng(seed).derive({kTagTests});
  const std::size_t max_pairs = n * (n - 1) / 2;
  const std::size_t num_tests = std::min(p.num_tests, max_pairs);
  std::set<std::pair<std::size_t, std::size_t>> used;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  while (pairs.size() < num_tests) {
    std::size_t a = rng.below(n);
    std::size_t b = rng.below(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (used.insert({a, b}).second) pairs.emplace_back(a, b);
  }
  data.arities.assign(pairs.size(), 2);
  data.outcomes.assign(n, std::vector<Outcome>(pairs.size()));
  nlohmann::ordered_json test_labels = nlohmann::ordered_json::array();
  nlohmann::ordered_json outcome_labels = nlohmann::ordered_json::array();
  for (TestId t = 0; t < pairs.size(); ++t) {
    const auto [a, b] = pairs[t];
    for (HypothesisId h = 0; h < n; ++h) {
      // Ties go to the first element of the pair.
      data.outcomes[h][t] =
          squared_distance(points[h], points[a]) <= squared_distance(points[h], points[b]) ? 0 : 1;
    }
    test_labels.push_back("which is closer: item " + std::to_string(a) + " or item " +
                          std::to_string(b) + "?");
    outcome_labels.push_back({"item " + std::to_string(a), "item " + std::to_string(b)});
  }

  doc.metadata = {
      {"generator", "clustered"},
      {"seed", seed},
      {"params",
       {{"num_points", n},
        {"dim", p.dim},
        {"num_clusters", p.num_clusters},
        {"assign_alpha", p.assign_alpha},
        {"num_tests", p.num_tests},
        {"cluster_spread", p.cluster_spread},
        {"lloyd_iterations", p.lloyd_iterations}}},
      {"labels", {{"tests", test_labels}, {"outcomes", outcome_labels}}},
  };
  return doc;
}

InstanceDocument generate_clustered(const ClusteredParams& params, std::uint64_t seed) {
  params.validate();
  CounterRng rng = CounterRng(seed).derive({kTagPoints});
  std::vector<Point> means(params.num_clusters, Point(params.dim));
  for (Point& m : means) {
    for (double& x : m) x = params.cluster_spread * rng.normal();
  }
  std::vector<Point> points(params.num_points, Point(params.dim));
  for (Point& x : points) {
    const Point& m = means[rng.below(params.num_clusters)];
    for (std::size_t j = 0; j < params.dim; ++j) x[j] = m[j] + rng.normal();
  }
  InstanceDocument doc = generate_clustered_from_points(points, params, seed);
  doc.metadata["params"]["num_points"] = params.num_points;
  return doc;
}

InstanceDocument generate_localization_2d(const Localization2dParams& params,
                                          std::uint64_t seed) {
  params.validate();
  const double sigma = params.gaussian_sigma;
  CounterRng rng = CounterRng(seed).derive({kTagPoints});
  std::vector<std::array<double, 2>> positions(params.num_hypotheses);
  for (auto& p : positions) p = {sigma * rng.normal(), sigma * rng.normal()};

  InstanceDocument doc;
  doc.coverage = CoverageMode::kWrap;
  InstanceData& data = doc.data;
  data.weights.assign(params.num_hypotheses, 1.0);

  CounterRng decision_rng = CounterRng(seed).derive({kTagDecisions});
  nlohmann::ordered_json centers = nlohmann::ordered_json::array();
  const double r2 = params.decision_radius * params.decision_radius;
  for (std::size_t d = 0; d < params.num_decisions; ++d) {
    const double cx = sigma * decision_rng.normal();
    const double cy = sigma * decision_rng.normal();
    std::vector<HypothesisId> members;
    for (HypothesisId h = 0; h < positions.size(); ++h) {
      const double dx = positions[h][0] - cx;
      const double dy = positions[h][1] - cy;
      if (dx * dx + dy * dy <= r2) members.push_back(h);
    }
    data.regions.push_back(std::move(members));
    centers.push_back({cx, cy});
  }

  // Each probing line passes near the prior mean with a random heading. The
  // contact coordinate is the signed position along the line where the
  // object is closest; it is binned over [-2 sigma, 2 sigma] around the
  // line's anchor, outer bins absorbing the tails.
  CounterRng test_rng = CounterRng(seed).derive({kTagTests});
  const int bins = params.num_bins;
  const double half_span = 2.0 * sigma;
  data.arities.assign(params.num_guarded_moves, bins);
  data.outcomes.assign(params.num_hypotheses, std::vector<Outcome>(params.num_guarded_moves));
  nlohmann::ordered_json test_labels = nlohmann::ordered_json::array();
  for (TestId t = 0; t < params.num_guarded_moves; ++t) {
    const double ax = sigma * test_rng.normal();
    const double ay = sigma * test_rng.normal();
    const double theta = test_rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);
    for (HypothesisId h = 0; h < positions.size(); ++h) {
      const double s = (positions[h][0] - ax) * ux + (positions[h][1] - ay) * uy;
      const double unit = (s + half_span) / (2.0 * half_span);
      const int bin = static_cast<int>(std::floor(unit * bins));
      data.outcomes[h][t] = std::clamp(bin, 0, bins - 1);
    }
    test_labels.push_back("guarded move " + std::to_string(t));
  }

  doc.metadata = {
      {"generator", "localization2d"},
      {"seed", seed},
      {"params",
       {{"num_hypotheses", params.num_hypotheses},
        {"gaussian_sigma", params.gaussian_sigma},
        {"num_decisions", params.num_decisions},
        {"decision_radius", params.decision_radius},
        {"num_guarded_moves", params.num_guarded_moves},
        {"num_bins", params.num_bins}}},
      {"decision_centers", centers},
      {"labels", {{"tests", test_labels}}},
  };
  return doc;
}

}  // namespace drd
