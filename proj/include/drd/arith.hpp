#pragma once

// Scalar types used by the weight computations. Float mode is the default;
// rational mode is exact and used by the oracle checks.

#include <gmpxx.h>

#include <string>
#include <type_traits>
#include <vector>

#include "drd/core.hpp"

namespace drd {

using Rational = mpq_class;

enum class ArithMode { kFloat, kRational };

std::string to_string(ArithMode mode);
ArithMode parse_arith_mode(const std::string& text);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

/// Every prior in the requested scalar type.
template <class Scalar>
std::vector<Scalar> priors_as(const ProblemInstance& instance) {
  std::vector<Scalar> result;
  result.reserve(instance.num_hypotheses());
  if constexpr (std::is_same_v<Scalar, Rational>) {
    Rational total = 0;
    for (HypothesisId i = 0; i < instance.num_hypotheses(); ++i) {
      total += Rational(instance.raw_weight(i));
    }
    for (HypothesisId i = 0; i < instance.num_hypotheses(); ++i) {
      Rational value = Rational(instance.raw_weight(i)) / total;
      value.canonicalize();
      result.push_back(value);
    }
  } else {
    for (HypothesisId i = 0; i < instance.num_hypotheses(); ++i) {
      result.push_back(instance.prior(i));
    }
  }
  return result;
}

}  // namespace drd
