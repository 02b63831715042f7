#pragma once

#include <string>

namespace wwqe {

struct WeightedTerm {
  std::string term;
  double weight = 0.0;

  friend bool operator==(const WeightedTerm&, const WeightedTerm&) = default;
};

}  // namespace wwqe
