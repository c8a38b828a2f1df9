#pragma once

#include <cstdint>
#include <vector>

#include "bdatp/features.hpp"

namespace bdatp {

// Seeded orthonormal projection: the cancelable, revocable secret. Only the
// seed (plus d, k) is ever stored; the matrix is regenerated on demand, so
// generation must be deterministic. The integer stream (std::mt19937_64) is
// portable by specification; the normal transform and Gram-Schmidt assume
// IEEE-754 double arithmetic.
struct ProjectionKey {
  std::uint64_t seed = 0;
  std::uint32_t d = 0;  // input dimension
  std::uint32_t k = 0;  // output dimension, k <= d
  std::vector<double> rows;  // k x d, row-major, orthonormal rows
};

struct RealTemplate {
  std::vector<double> values;  // length k
  std::uint64_t key_seed = 0;
};

// Draws k*d i.i.d. standard normals row by row, orthonormalizes with
// modified Gram-Schmidt, re-orthogonalizes once if any off-diagonal of
// rows*rows^T exceeds 1e-9. A degenerate row (residual norm < 1e-12) is
// redrawn from the same stream, which keeps the result deterministic.
ProjectionKey gen_matrix(std::uint64_t seed, std::uint32_t d, std::uint32_t k);

RealTemplate project(const ProjectionKey& key, const std::vector<double>& v);
RealTemplate project(const ProjectionKey& key, const FeatureVector& v);

// Largest |(rows * rows^T - I)_ij|; the orthonormality defect.
double orthonormality_defect(const ProjectionKey& key);

// Johnson-Lindenstrauss distance-preservation diagnostic:
// sqrt(d/k) * ||P(u) - P(v)|| / ||u - v||. Concentrates near 1 for random
// inputs; the sqrt(d/k) factor compensates for the energy an orthonormal
// (non-scaled) projection drops with the discarded d-k dimensions.
double distance_ratio(const ProjectionKey& key, const std::vector<double>& u,
                      const std::vector<double>& v);

}  // namespace bdatp
