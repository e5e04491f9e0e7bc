#pragma once

#include <memory>
#include <vector>

namespace lgset {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point rule. Rules are computed once per n and shared;
/// safe to call from multiple threads.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n);

}  // namespace lgset
