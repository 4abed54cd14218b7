#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace helico::testing {

template <class V>
double directed_hausdorff(const std::vector<V>& a, const std::vector<V>& b)
{
    double worst = 0.0;
    for (const auto& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : b)
            best = std::min(best, (p - q).norm());
        worst = std::max(worst, best);
    }
    return worst;
}

template <class V>
double hausdorff(const std::vector<V>& a, const std::vector<V>& b)
{
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

} // namespace helico::testing
