#pragma once

#include <string>
#include <vector>

#include "scpp/types.hpp"

namespace scpp {

// (1/N) sum over clusters of the largest single-class count.
double purity(const std::vector<int>& labels, const std::vector<std::string>& truth);

struct VMeasureResult {
  double homogeneity = 0.0;
  double completeness = 0.0;
  double v = 0.0;
};

// Entropy-based homogeneity/completeness (natural log) and their harmonic
// mean; a 0/0 entropy ratio scores 1, and v = 0 when either part is 0.
VMeasureResult v_measure(const std::vector<int>& labels, const std::vector<std::string>& truth);

}  // namespace scpp
