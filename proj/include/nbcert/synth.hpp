#pragma once

#include <cstdint>
#include <vector>

#include "nbcert/dataset.hpp"

namespace nbcert {

// Seeded synthetic categorical dataset for benchmarks: uniform values
// "v0".."v<domain-1>" per attribute, labels "l0".."l<labels-1>".
Dataset make_synthetic(long long rows, int attrs, int labels, int domain,
                       std::uint64_t seed);

// Draws k distinct row indices and returns their feature tokens.
std::vector<std::vector<std::string>> sample_points(const Dataset& dataset, int k,
                                                    std::uint64_t seed);

}  // namespace nbcert
