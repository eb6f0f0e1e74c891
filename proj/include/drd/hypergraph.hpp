#pragma once

// Splitting hypergraph over subregions. Hyperedges are never materialized:
// the index keeps the subregions, the cardinality k and every set of
// subregions that shares a region (the sets whose multisets are *not*
// hyperedges). Weights come from the CHP algebra in chp.hpp.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "drd/arith.hpp"
#include "drd/core.hpp"

namespace drd {

using SubregionId = std::size_t;

struct Subregion {
  SubregionId id = 0;
  std::vector<RegionId> signature;     // ascending region ids
  std::vector<HypothesisId> members;   // ascending
  double mass = 0.0;                   // prior mass of members
};

struct SharedRegionSet {
  std::vector<SubregionId> members;  // ascending, distinct
  RegionId witness_region = 0;       // lowest region containing all members

  friend bool operator==(const SharedRegionSet&, const SharedRegionSet&) = default;
};

/// Hypotheses grouped by region-membership signature, ordered
/// lexicographically by signature.
std::vector<Subregion> compute_subregions(const ProblemInstance& instance);

/// min(max regions per hypothesis, max subregions per region) + 1.
int cardinality_k(const ProblemInstance& instance);

/// Compact prefix-tree node for a shared-region set: the set is the parent's
/// set plus `last`, which exceeds every member of the parent.
struct SharedSetNode {
  static constexpr std::uint32_t kNoParent = UINT32_MAX;
  std::uint32_t parent = kNoParent;
  std::uint32_t last = 0;
  RegionId witness_region = 0;
};

class SubregionIndex {
 public:
  /// Upper bound on the number of shared-region sets an index may hold.
  static constexpr std::size_t kDefaultSharedSetLimit = 20'000'000;

  /// Groups subregions, fixes k and enumerates the shared-region sets once.
  /// A `k_override` below the formula value is rejected because "all edges
  /// cut" would no longer imply "solved".
  static SubregionIndex build(const ProblemInstance& instance,
                              std::optional<int> k_override = std::nullopt,
                              std::size_t shared_set_limit = kDefaultSharedSetLimit);

  int k() const { return k_; }
  std::size_t size() const { return subregions_.size(); }
  std::size_t num_regions() const { return num_regions_; }
  const std::vector<Subregion>& subregions() const { return subregions_; }
  SubregionId subregion_of(HypothesisId h) const { return subregion_of_[h]; }

  /// Shared sets in (size, members) order; level m occupies
  /// [level_begin(m), level_begin(m + 1)).
  std::span<const SharedSetNode> shared_set_nodes() const { return nodes_; }
  std::size_t level_begin(int m) const { return level_begin_[m - 1]; }
  int max_level() const { return static_cast<int>(level_begin_.size()) - 1; }
  std::size_t num_shared_sets() const { return nodes_.size(); }

  /// True iff some region contains every listed subregion.
  bool share_region(std::span<const SubregionId> subregions) const;

 private:
  friend std::vector<SharedRegionSet> enumerate_shared_sets(const SubregionIndex&);

  std::vector<Subregion> subregions_;
  std::vector<SubregionId> subregion_of_;
  std::size_t num_regions_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> signature_bits_;  // words_ per subregion
  int k_ = 2;
  std::vector<SharedSetNode> nodes_;
  std::vector<std::size_t> level_begin_;
};

/// Every set of distinct subregions of size 1..k that shares a region, in
/// (size, members) order, each with its lowest witness region.
std::vector<SharedRegionSet> enumerate_shared_sets(const SubregionIndex& index);

/// Hyperedge predicate on a cardinality-k multiset of subregion ids: true iff no
/// single region contains all of them.
bool is_hyperedge(std::span<const SubregionId> multiset, const SubregionIndex& index);

struct SolvedCheck {
  bool solved_direct = false;
  bool edges_empty = false;
};

/// Evaluates the direct containment check and the "all hyperedges cut" check
/// side by side. Rational mode is exact; float mode treats weights at or
/// below 1e-12 of the surviving CHP_k mass as zero.
SolvedCheck solved_iff_edges_cut(const ProblemInstance& instance,
                                 const Evidence& evidence,
                                 const SubregionIndex& index,
                                 ArithMode arith = ArithMode::kRational);

}  // namespace drd
