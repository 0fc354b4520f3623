#pragma once

#include <map>
#include <memory>
#include <utility>

#include "kinetic_harris/collision.hpp"

namespace kh::testing {

// Operators are built once per (gamma, d); the d = 2 tables take seconds.
inline std::shared_ptr<const CollisionOperator> shared_operator(double gamma, int d)
{
    static std::map<std::pair<double, int>, std::shared_ptr<const CollisionOperator>> cache;
    auto& op = cache[{gamma, d}];
    if (!op)
        op = std::make_shared<CollisionOperator>(CollisionKernelSpec::hard_spheres(gamma), d);
    return op;
}

} // namespace kh::testing
