#include "drd/chp.hpp"

#include <algorithm>
#include <string>

namespace drd {

template <class Scalar>
std::vector<Scalar> power_sums(std::span<const Scalar> values, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("negative power-sum degree");
  std::vector<Scalar> result(max_degree + 1, Scalar(0));
  result[0] = Scalar(static_cast<long>(values.size()));
  for (const Scalar& x : values) {
    Scalar power = x;
    for (int j = 1; j <= max_degree; ++j) {
      result[j] += power;
      power *= x;
    }
  }
  return result;
}

template <class Scalar>
std::vector<Scalar> chp_from_power_sums(std::span<const Scalar> ps, int degree) {
  if (degree < 0) throw std::invalid_argument("negative CHP degree");
  if (static_cast<int>(ps.size()) <= degree) {
    throw std::invalid_argument("not enough power sums for CHP degree " + std::to_string(degree));
  }
  std::vector<Scalar> table(degree + 1, Scalar(0));
  table[0] = Scalar(1);
  for (int i = 1; i <= degree; ++i) {
    Scalar sum(0);
    for (int j = 1; j <= i; ++j) sum += table[i - j] * ps[j];
    table[i] = sum / Scalar(i);
  }
  return table;
}

template <class Scalar>
std::vector<Scalar> chp_table(std::span<const Scalar> values, int degree) {
  const auto ps = power_sums<Scalar>(values, degree);
  return chp_from_power_sums<Scalar>(ps, degree);
}

template <class Scalar>
Scalar chp(std::span<const Scalar> values, int degree) {
  return chp_table<Scalar>(values, degree).back();
}

template <class Scalar>
Scalar zeta_weight(std::span<const Scalar> members, int k) {
  const int m = static_cast<int>(members.size());
  if (m > k) throw std::invalid_argument("shared set larger than k");
  Scalar product(1);
  for (const Scalar& x : members) product *= x;
  return product * chp<Scalar>(members, k - m);
}

namespace {

/// CHP_degree from a row of power sums stored at row[1..degree].
template <class Scalar>
Scalar chp_of_row(const Scalar* row, int degree, std::vector<Scalar>& table) {
  table[0] = Scalar(1);
  for (int i = 1; i <= degree; ++i) {
    Scalar sum(0);
    for (int j = 1; j <= i; ++j) sum += table[i - j] * row[j];
    table[i] = sum / Scalar(i);
  }
  return table[degree];
}

}  // namespace

template <class Scalar>
Scalar hyperedge_weight(std::span<const Scalar> masses, const SubregionIndex& index) {
  if (masses.size() != index.size()) {
    throw std::invalid_argument("mass vector has " + std::to_string(masses.size()) +
                                " entries, index has " + std::to_string(index.size()) +
                                " subregions");
  }
  const int k = index.k();
  const std::size_t stride = static_cast<std::size_t>(k) + 1;
  const Scalar all_multisets = chp<Scalar>(masses, k);
  Scalar weight = all_multisets;

  // Shared sets are processed level by level in (size, members) order. Each
  // node extends its parent by one subregion, so products and power sums are
  // carried forward; a zero-mass member zeroes the whole subtree.
  const auto nodes = index.shared_set_nodes();
  std::vector<char> prev_alive, alive;
  std::vector<Scalar> prev_prod, prod, prev_ps, ps;
  std::vector<Scalar> table(stride);
  for (int m = 1; m <= index.max_level(); ++m) {
    const std::size_t begin = index.level_begin(m);
    const std::size_t end = index.level_begin(m + 1);
    const std::size_t parent_begin = m > 1 ? index.level_begin(m - 1) : 0;
    const int degree = k - m;
    alive.assign(end - begin, 0);
    prod.resize(end - begin);
    ps.resize((end - begin) * stride);
    for (std::size_t i = 0; i < end - begin; ++i) {
      const SharedSetNode& node = nodes[begin + i];
      const Scalar& x = masses[node.last];
      if (x == 0) continue;
      Scalar* row = &ps[i * stride];
      if (m == 1) {
        prod[i] = x;
        Scalar power = x;
        for (int j = 1; j <= degree; ++j) {
          row[j] = power;
          power *= x;
        }
      } else {
        const std::size_t p = node.parent - parent_begin;
        if (!prev_alive[p]) continue;
        prod[i] = prev_prod[p] * x;
        const Scalar* parent_row = &prev_ps[p * stride];
        Scalar power = x;
        for (int j = 1; j <= degree; ++j) {
          row[j] = parent_row[j] + power;
          power *= x;
        }
      }
      alive[i] = 1;
      if (degree == 0) {
        weight -= prod[i];
      } else {
        weight -= prod[i] * chp_of_row(row, degree, table);
      }
    }
    prev_alive.swap(alive);
    prev_prod.swap(prod);
    prev_ps.swap(ps);
  }

  if (weight < 0) {
    if constexpr (std::is_same_v<Scalar, double>) {
      if (weight < -1e-9 * std::max(1.0, all_multisets)) {
        throw InternalInconsistency("negative hyperedge weight " + std::to_string(weight));
      }
      weight = 0.0;
    } else {
      throw InternalInconsistency("negative exact hyperedge weight");
    }
  }
  return weight;
}

template <class Scalar>
std::vector<Scalar> subregion_masses(const ProblemInstance& instance,
                                     const SubregionIndex& index,
                                     std::span<const HypothesisId> hypotheses) {
  const auto priors = priors_as<Scalar>(instance);
  std::vector<Scalar> masses(index.size(), Scalar(0));
  for (HypothesisId h : hypotheses) masses[index.subregion_of(h)] += priors[h];
  return masses;
}

template <class Scalar>
Scalar total_hyperedge_weight(const ProblemInstance& instance, const SubregionIndex& index) {
  std::vector<HypothesisId> all(instance.num_hypotheses());
  for (HypothesisId h = 0; h < all.size(); ++h) all[h] = h;
  return hyperedge_weight<Scalar>(subregion_masses<Scalar>(instance, index, all), index);
}

template <class Scalar>
Scalar objective_f(const ProblemInstance& instance, const Evidence& evidence,
                   const SubregionIndex& index) {
  const VersionSpace vs = consistent_hypotheses(instance, evidence);
  const Scalar total = total_hyperedge_weight<Scalar>(instance, index);
  const auto masses = subregion_masses<Scalar>(instance, index, vs.consistent);
  Scalar cut = total - hyperedge_weight<Scalar>(masses, index);
  if constexpr (std::is_same_v<Scalar, double>) cut = std::clamp(cut, 0.0, total);
  return cut;
}

#define DRD_INSTANTIATE_CHP(Scalar)                                                           \
  template std::vector<Scalar> power_sums<Scalar>(std::span<const Scalar>, int);              \
  template std::vector<Scalar> chp_from_power_sums<Scalar>(std::span<const Scalar>, int);     \
  template std::vector<Scalar> chp_table<Scalar>(std::span<const Scalar>, int);               \
  template Scalar chp<Scalar>(std::span<const Scalar>, int);                                  \
  template Scalar zeta_weight<Scalar>(std::span<const Scalar>, int);                          \
  template Scalar hyperedge_weight<Scalar>(std::span<const Scalar>, const SubregionIndex&);   \
  template std::vector<Scalar> subregion_masses<Scalar>(                                      \
      const ProblemInstance&, const SubregionIndex&, std::span<const HypothesisId>);          \
  template Scalar total_hyperedge_weight<Scalar>(const ProblemInstance&,                      \
                                                 const SubregionIndex&);                      \
  template Scalar objective_f<Scalar>(const ProblemInstance&, const Evidence&,                \
                                      const SubregionIndex&);

DRD_INSTANTIATE_CHP(double)
DRD_INSTANTIATE_CHP(Rational)

#undef DRD_INSTANTIATE_CHP

}  // namespace drd
