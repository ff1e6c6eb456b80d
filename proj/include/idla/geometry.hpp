#pragma once

#include <cstdint>
#include <vector>

#include "idla/site.hpp"

// Lattice geometry on Z^d. Balls are open: B(x, r) = { y : |y - x| < r }.
// All membership decisions compare the integer squared norm against an
// integer threshold derived once from r, so rational-square radii can never
// be misclassified by floating-point ties.
namespace idla::geom {

// Largest integer q with q < r^2, i.e. y in B(0, r) iff |y|^2 <= q.
// r <= 0 (or r^2 <= 0) gives -1: the empty ball.
std::int64_t ball_norm2_bound(double r);

// floor(sqrt(v)) for v >= 0.
std::int64_t isqrt64(std::int64_t v);

// |{ y in Z^dim : |y|^2 <= bound }|. Cached per (dim, bound); thread-safe.
// Throws std::overflow_error when the count would not fit in 64 bits (checked
// up front from the volume estimate) and std::invalid_argument for bad dim.
std::int64_t ball_count_norm2(int dim, std::int64_t bound);

// |B(0, radius)| in Z^dim.
std::int64_t ball_count(int dim, double radius);

// b(n) counts for integer radii drive the inverse: rho(volume) is the largest
// integer n >= 0 with ball_count(dim, n) <= volume. volume must be >= 0.
std::int64_t rho(int dim, double volume);

// |B(0, r_outer) \ B(0, r_inner)| with r_inner <= r_outer.
std::int64_t shell_count(int dim, double r_inner, double r_outer);

// All sites with |y|^2 <= bound, lexicographically sorted.
std::vector<Site> ball_sites(int dim, std::int64_t bound);

// Outer site boundary of { |y|^2 <= bound }: sites outside with a
// nearest-neighbour inside. Lexicographically sorted. Empty ball -> empty.
std::vector<Site> ball_boundary(int dim, std::int64_t bound);

// Outer site boundary of an arbitrary finite set. Lexicographically sorted.
std::vector<Site> outer_boundary(const std::vector<Site>& sites);

// Sigma(z): outer boundary of B(0, |z|). Always contains z itself. z != 0.
std::vector<Site> sphere_shell(const Site& z);

struct CapSplit {
  std::vector<Site> cap;         // Sigma(z) ∩ B(z, radius)
  std::vector<Site> complement;  // Sigma(z) \ cap
};

// Split Sigma(z) into the cap within distance `radius` of z and the rest.
CapSplit cap_and_complement(const Site& z, double radius);

}  // namespace idla::geom
