#pragma once

// Synthetic instance families. Both generators are pure functions of their
// parameters and seed.
//
// clustered: points from a Gaussian mixture are clustered with a fixed number
// of Lloyd iterations; region c holds every point that has centroid c among
// its alpha nearest centroids. A test compares two points and each hypothesis
// answers which of the two it is closer to.
//
// localization2d: hypotheses are 2D object positions drawn from an isotropic
// Gaussian; regions are discs around sampled decision centers; a test is a
// straight probing line and the outcome is the bin of the position along the
// line at which the object is met.

#include <cstdint>
#include <vector>

#include "drd/io.hpp"

namespace drd {

struct ClusteredParams {
  std::size_t num_points = 200;
  std::size_t dim = 10;
  std::size_t num_clusters = 12;
  std::size_t assign_alpha = 2;
  std::size_t num_tests = 100;
  double cluster_spread = 3.0;  // std. dev. of mixture means; points have unit variance
  int lloyd_iterations = 25;

  void validate() const;
};

struct Localization2dParams {
  std::size_t num_hypotheses = 2000;
  double gaussian_sigma = 0.2;
  std::size_t num_decisions = 50;
  double decision_radius = 0.06;
  std::size_t num_guarded_moves = 150;
  int num_bins = 4;

  void validate() const;
};

/// Lloyd clustering result: centroids and the final assignment.
struct Clustering {
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> assignment;
};

/// Farthest-point seeding from a seeded first point, then exactly
/// `iterations` assign/update rounds. An empty cluster is reseeded at the
/// point farthest from its own centroid.
Clustering lloyd(const std::vector<std::vector<double>>& points, std::size_t clusters,
                 int iterations, std::uint64_t seed);

InstanceDocument generate_clustered(const ClusteredParams& params, std::uint64_t seed);

/// Clustered instance over given points (e.g. read by read_embeddings_csv).
InstanceDocument generate_clustered_from_points(const std::vector<std::vector<double>>& points,
                                                const ClusteredParams& params,
                                                std::uint64_t seed);

/// Declared coverage is wrap: positions outside every disc get their own
/// singleton region on build.
InstanceDocument generate_localization_2d(const Localization2dParams& params,
                                          std::uint64_t seed);

}  // namespace drd
