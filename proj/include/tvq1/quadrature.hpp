#pragma once

#include <vector>

namespace tvq1 {

// Gauss-Legendre rule mapped to [0,1]. Weights sum to 1, so integrals over a
// cell are the weighted sum times the cell area.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rule with `points` nodes, exact for polynomials of degree 2*points - 1.
// Cached; the returned reference is valid for the program lifetime.
const GaussRule& gauss_rule(int points);

} // namespace tvq1
