#pragma once

#include <cstdint>
#include <string>

#include "uot/types.hpp"

namespace uot {

// Two 1-D Gaussian histograms on a shared grid of bin centers: random mean in
// [0.25, 0.75]*bins, random sigma in [0.05, 0.2]*bins, unit mass each. Cost is
// the squared bin-center distance normalized so ||c||_inf = 1. Defaults to the
// l2 penalty with lambda = 0.1; solvers may override both.
ProblemSpec gen_gaussian_pair(Index bins, std::uint64_t seed);

// IDX-format MNIST loader: big-endian magic 2051 for images, 2049 for labels.
// Builds a transport problem between images index_a and index_b: zero pixels
// are dropped (shrinking n and m), masses normalized to 1, cost is the squared
// Euclidean distance between the retained pixel grid coordinates with
// ||c||_inf = 1. Parse failures report the byte offset.
ProblemSpec load_mnist_idx(const std::string& images_path, const std::string& labels_path,
                           Index index_a, Index index_b);

}  // namespace uot
