#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace nvreg::quadrature {

struct Node {
  double x;
  double w;
};

// Composite Gauss-Legendre rule (10 points per panel) on [a, b].
inline std::vector<Node> composite_gauss(double a, double b, int panels) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto& xs = Rule::abscissa();
  const auto& ws = Rule::weights();
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(panels) * 2 * xs.size());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = width / 2.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      nodes.push_back({mid - half * xs[i], half * ws[i]});
      nodes.push_back({mid + half * xs[i], half * ws[i]});
    }
  }
  return nodes;
}

}  // namespace nvreg::quadrature
