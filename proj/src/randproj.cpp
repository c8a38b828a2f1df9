#include "bdatp/randproj.hpp"

#include <cmath>

#include "bdatp/rng.hpp"

namespace bdatp {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// One modified Gram-Schmidt sweep against rows [0, upto).
void orthogonalize_row(std::vector<double>& rows, std::size_t row,
                       std::size_t upto, std::size_t d) {
  double* r = rows.data() + row * d;
  for (std::size_t j = 0; j < upto; ++j) {
    const double* q = rows.data() + j * d;
    double proj = dot(r, q, d);
    for (std::size_t i = 0; i < d; ++i) r[i] -= proj * q[i];
  }
}

}  // namespace

ProjectionKey gen_matrix(std::uint64_t seed, std::uint32_t d, std::uint32_t k) {
  if (d == 0 || k == 0) throw InvalidArgument("gen_matrix: d and k must be > 0");
  if (k > d)
    throw InvalidArgument("gen_matrix: k > d, cannot orthogonalize " +
                          std::to_string(k) + " rows in " + std::to_string(d) +
                          " dimensions");
  ProjectionKey key{seed, d, k, std::vector<double>(std::size_t(k) * d)};
  SeededRng rng(seed);

  for (std::size_t row = 0; row < k; ++row) {
    while (true) {
      double* r = key.rows.data() + row * d;
      for (std::size_t i = 0; i < d; ++i) r[i] = rng.normal();
      orthogonalize_row(key.rows, row, row, d);
      double norm = std::sqrt(dot(r, r, d));
      if (norm < 1e-12) continue;  // degenerate draw, take the next one
      for (std::size_t i = 0; i < d; ++i) r[i] /= norm;
      break;
    }
  }

  if (orthonormality_defect(key) > 1e-9) {
    for (std::size_t row = 0; row < k; ++row) {
      orthogonalize_row(key.rows, row, row, d);
      double* r = key.rows.data() + row * d;
      double norm = std::sqrt(dot(r, r, d));
      for (std::size_t i = 0; i < d; ++i) r[i] /= norm;
    }
  }
  return key;
}

RealTemplate project(const ProjectionKey& key, const std::vector<double>& v) {
  if (v.size() != key.d)
    throw InvalidArgument("project: vector length " + std::to_string(v.size()) +
                          " != key dimension " + std::to_string(key.d));
  RealTemplate out;
  out.key_seed = key.seed;
  out.values.resize(key.k);
  for (std::size_t row = 0; row < key.k; ++row)
    out.values[row] = dot(key.rows.data() + row * key.d, v.data(), key.d);
  return out;
}

RealTemplate project(const ProjectionKey& key, const FeatureVector& v) {
  return project(key, v.values);
}

double orthonormality_defect(const ProjectionKey& key) {
  double worst = 0;
  for (std::size_t i = 0; i < key.k; ++i) {
    for (std::size_t j = i; j < key.k; ++j) {
      double g = dot(key.rows.data() + i * key.d, key.rows.data() + j * key.d,
                     key.d);
      double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(g - target));
    }
  }
  return worst;
}

double distance_ratio(const ProjectionKey& key, const std::vector<double>& u,
                      const std::vector<double>& v) {
  if (u.size() != key.d || v.size() != key.d)
    throw InvalidArgument("distance_ratio: dimension mismatch");
  std::vector<double> diff(key.d);
  for (std::size_t i = 0; i < key.d; ++i) diff[i] = u[i] - v[i];
  double before = std::sqrt(dot(diff.data(), diff.data(), key.d));
  if (before == 0) throw InvalidArgument("distance_ratio: identical inputs");
  auto projected = project(key, diff);
  double after =
      std::sqrt(dot(projected.values.data(), projected.values.data(), key.k));
  return std::sqrt(double(key.d) / double(key.k)) * after / before;
}

}  // namespace bdatp
