#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "idla/site.hpp"

namespace idla::oracle {

// exit distribution of one explorer: site -> probability
using SettleDistribution = std::map<Site, double>;

// distribution over occupied sets (explicit sorted site lists; growth from the
// origin is not translation invariant, so no symmetry quotient is taken)
using ShapeDistribution = std::map<std::vector<Site>, double>;

// Ground-truth settle distribution on a finite cluster via the absorption
// linear system: from an occupied site the walk moves to a uniform neighbor;
// unoccupied neighbors absorb. A start outside the cluster settles in place.
// Clusters of at most `exact_limit` sites are solved in exact rational
// arithmetic; larger ones use dense LU with a residual check of 1e-10.
SettleDistribution settle_distribution_exact(const std::vector<Site>& cluster, const Site& start,
                                             std::size_t exact_limit = 20);

// Exact distribution over occupied sets after k origin-started explorers,
// by recursing settle_distribution_exact over every reachable shape.
ShapeDistribution cluster_distribution_exact(int k, int dim);

// Empirical counterpart: grows `samples` independent k-explorer aggregates
// (replica r uses stream r of `seed`) and tallies shape frequencies.
ShapeDistribution cluster_distribution_mc(int k, int dim, std::int64_t samples, std::uint64_t seed);

// total variation distance, 1/2 * sum |p - q| over the union of supports
double tv_distance(const ShapeDistribution& p, const ShapeDistribution& q);

}  // namespace idla::oracle
