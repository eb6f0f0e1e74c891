#include "drd/arith.hpp"

#include <stdexcept>

namespace drd {

std::string to_string(ArithMode mode) {
  return mode == ArithMode::kFloat ? "float" : "rational";
}

ArithMode parse_arith_mode(const std::string& text) {
  if (text == "float") return ArithMode::kFloat;
  if (text == "rational") return ArithMode::kRational;
  throw std::invalid_argument("unknown arithmetic mode: " + text +
                              " (expected float or rational)");
}

}  // namespace drd
