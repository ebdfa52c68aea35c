#pragma once

#include <cstddef>
#include <string>

#include "accd/data/topk.hpp"

// Canonical DDSL sources for the three supported program shapes, sized for given data.

namespace accd::ddsl {

/// Iterates on a status flag, like the K-means listing: k clusters over n points.
std::string kmeans_source(std::size_t n, std::size_t k, std::size_t d,
                          const std::string& metric = "Unweighted L2");

/// One-shot top-K of m source points over n target points.
std::string knn_source(std::size_t m, std::size_t n, std::size_t d, std::size_t k,
                       const std::string& metric = "Unweighted L2",
                       data::Scope scope = data::Scope::Smallest);

/// `steps` rounds of radius search over n particles followed by a position update.
std::string nbody_source(std::size_t n, std::size_t d, std::size_t steps, double radius,
                         const std::string& metric = "Unweighted L2");

}  // namespace accd::ddsl
