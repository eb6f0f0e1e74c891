#include "drd/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "drd/chp.hpp"

namespace drd {

std::vector<Subregion> compute_subregions(const ProblemInstance& instance) {
  std::map<std::vector<RegionId>, std::vector<HypothesisId>> groups;
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    groups[instance.regions_of(h)].push_back(h);
  }
  std::vector<Subregion> result;
  result.reserve(groups.size());
  for (auto& [signature, members] : groups) {
    Subregion g;
    g.id = result.size();
    g.signature = signature;
    g.members = std::move(members);
    for (HypothesisId h : g.members) g.mass += instance.prior(h);
    result.push_back(std::move(g));
  }
  return result;
}

int cardinality_k(const ProblemInstance& instance) {
  std::size_t max_degree = 0;
  for (HypothesisId h = 0; h < instance.num_hypotheses(); ++h) {
    max_degree = std::max(max_degree, instance.regions_of(h).size());
  }
  std::vector<std::size_t> subregions_per_region(instance.num_regions(), 0);
  for (const auto& g : compute_subregions(instance)) {
    for (RegionId r : g.signature) ++subregions_per_region[r];
  }
  std::size_t max_subregions = 0;
  for (std::size_t n : subregions_per_region) max_subregions = std::max(max_subregions, n);
  return static_cast<int>(std::min(max_degree, max_subregions)) + 1;
}

namespace {

std::optional<RegionId> lowest_bit(const std::uint64_t* words, std::size_t count) {
  for (std::size_t w = 0; w < count; ++w) {
    if (words[w] != 0) return w * 64 + std::countr_zero(words[w]);
  }
  return std::nullopt;
}

}  // namespace

SubregionIndex SubregionIndex::build(const ProblemInstance& instance,
                                     std::optional<int> k_override,
                                     std::size_t shared_set_limit) {
  SubregionIndex index;
  index.subregions_ = compute_subregions(instance);
  index.num_regions_ = instance.num_regions();
  index.words_ = std::max<std::size_t>(1, (index.num_regions_ + 63) / 64);

  index.subregion_of_.assign(instance.num_hypotheses(), 0);
  index.signature_bits_.assign(index.subregions_.size() * index.words_, 0);
  for (const auto& g : index.subregions_) {
    for (HypothesisId h : g.members) index.subregion_of_[h] = g.id;
    for (RegionId r : g.signature) {
      index.signature_bits_[g.id * index.words_ + r / 64] |= std::uint64_t{1} << (r % 64);
    }
  }

  const int formula_k = cardinality_k(instance);
  if (k_override && *k_override < formula_k) {
    throw std::invalid_argument("k override " + std::to_string(*k_override) +
                                " is below the formula value " +
                                std::to_string(formula_k));
  }
  index.k_ = k_override.value_or(formula_k);

  // Level 1: every subregion on its own (each lies in its own signature).
  const std::size_t words = index.words_;
  std::vector<std::uint64_t> level_bits;
  index.level_begin_.push_back(0);
  for (const auto& g : index.subregions_) {
    const std::uint64_t* bits = &index.signature_bits_[g.id * words];
    const auto witness = lowest_bit(bits, words);
    if (!witness) continue;  // uncovered subregion shares no region
    index.nodes_.push_back({SharedSetNode::kNoParent, static_cast<std::uint32_t>(g.id), *witness});
    level_bits.insert(level_bits.end(), bits, bits + words);
  }

  // Level m + 1 only extends surviving level-m sets (downward closure).
  std::vector<std::uint64_t> next_bits;
  std::vector<std::uint64_t> scratch(words);
  for (int m = 1; m < index.k_; ++m) {
    const std::size_t begin = index.level_begin_.back();
    const std::size_t end = index.nodes_.size();
    index.level_begin_.push_back(end);
    next_bits.clear();
    for (std::size_t i = begin; i < end; ++i) {
      const std::uint64_t* parent_bits = &level_bits[(i - begin) * words];
      for (SubregionId g = index.nodes_[i].last + 1; g < index.subregions_.size(); ++g) {
        const std::uint64_t* bits = &index.signature_bits_[g * words];
        bool any = false;
        for (std::size_t w = 0; w < words; ++w) {
          scratch[w] = parent_bits[w] & bits[w];
          any = any || scratch[w] != 0;
        }
        if (!any) continue;
        if (index.nodes_.size() >= shared_set_limit) {
          throw LimitExceeded("shared-region set enumeration exceeded " +
                              std::to_string(shared_set_limit) + " sets (k = " +
                              std::to_string(index.k_) + ")");
        }
        index.nodes_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(g),
                                *lowest_bit(scratch.data(), words)});
        next_bits.insert(next_bits.end(), scratch.begin(), scratch.end());
      }
    }
    level_bits.swap(next_bits);
    if (index.nodes_.size() == end) break;
  }
  index.level_begin_.push_back(index.nodes_.size());
  return index;
}

bool SubregionIndex::share_region(std::span<const SubregionId> subregions) const {
  if (subregions.empty()) return true;
  std::vector<std::uint64_t> acc(signature_bits_.begin() + subregions[0] * words_,
                                 signature_bits_.begin() + (subregions[0] + 1) * words_);
  for (SubregionId g : subregions.subspan(1)) {
    for (std::size_t w = 0; w < words_; ++w) acc[w] &= signature_bits_[g * words_ + w];
  }
  return lowest_bit(acc.data(), words_).has_value();
}

std::vector<SharedRegionSet> enumerate_shared_sets(const SubregionIndex& index) {
  std::vector<SharedRegionSet> result;
  result.reserve(index.nodes_.size());
  for (const auto& node : index.nodes_) {
    SharedRegionSet set;
    set.witness_region = node.witness_region;
    if (node.parent != SharedSetNode::kNoParent) set.members = result[node.parent].members;
    set.members.push_back(node.last);
    result.push_back(std::move(set));
  }
  return result;
}

bool is_hyperedge(std::span<const SubregionId> multiset, const SubregionIndex& index) {
  if (multiset.size() != static_cast<std::size_t>(index.k())) {
    throw std::invalid_argument("multiset has cardinality " + std::to_string(multiset.size()) +
                                ", expected k = " + std::to_string(index.k()));
  }
  std::vector<SubregionId> distinct(multiset.begin(), multiset.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (SubregionId g : distinct) {
    if (g >= index.size()) throw std::out_of_range("unknown subregion " + std::to_string(g));
  }
  return !index.share_region(distinct);
}

namespace {

template <class Scalar>
SolvedCheck solved_check(const ProblemInstance& instance, const Evidence& evidence,
                         const SubregionIndex& index) {
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  const auto masses = subregion_masses<Scalar>(instance, index, vs.consistent);
  const Scalar weight = hyperedge_weight<Scalar>(masses, index);
  SolvedCheck check;
  check.solved_direct = containing_region(instance, vs.consistent).has_value();
  if constexpr (std::is_same_v<Scalar, Rational>) {
    check.edges_empty = weight == 0;
  } else {
    check.edges_empty = weight <= 1e-12 * chp<double>(masses, index.k());
  }
  return check;
}

}  // namespace

SolvedCheck solved_iff_edges_cut(const ProblemInstance& instance, const Evidence& evidence,
                                 const SubregionIndex& index, ArithMode arith) {
  return arith == ArithMode::kRational ? solved_check<Rational>(instance, evidence, index)
                                       : solved_check<double>(instance, evidence, index);
}

}  // namespace drd
