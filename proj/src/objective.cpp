#include "qvsum/objective.hpp"

#include <cmath>
#include <string>

#include "qvsum/error.hpp"
#include "qvsum/simd/kernels.hpp"

namespace qvsum::objective {

void LossParams::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2)) {
    throw ConfigError("lambda1 and lambda2 must be finite and non-negative");
  }
  if (lambda1 == 0.0 && lambda2 == 0.0) throw ConfigError("lambda1 and lambda2 cannot both be zero");
}

ObjectiveMatrices build_matrices(std::span<const double> rows, std::size_t n, std::size_t dim,
                                 std::span<const double> relevance) {
  if (n == 0) throw InputError("build_matrices: empty feature matrix");
  if (rows.size() != n * dim) throw DimensionError("build_matrices: feature block size mismatch");
  if (relevance.size() != n) {
    throw DimensionError("build_matrices: " + std::to_string(n) + " feature rows but " +
                         std::to_string(relevance.size()) + " relevance scores");
  }
  const auto& k = simd::kernels();
  ObjectiveMatrices m{n, std::vector<double>(n), std::vector<double>(n * n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = rows.data() + i * dim;
    m.p[i] = k.dot(xi, xi, dim);
    m.q[i * n + i] = m.p[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = k.dot(xi, rows.data() + j * dim, dim);
      m.q[i * n + j] = v;
      m.q[j * n + i] = v;
    }
    m.r[i] = relevance[i] * relevance[i];
  }
  return m;
}

ObjectiveMatrices build_matrices(const ingest::FeatureMatrix& x, const query::DistanceVector& dv) {
  return build_matrices(x.data, x.n, ingest::kFeatureDim, dv.s);
}

namespace {

void check_length(const ObjectiveMatrices& m, std::span<const double> z, const char* what) {
  if (z.size() != m.n) {
    throw DimensionError(std::string(what) + ": selection vector has length " + std::to_string(z.size()) +
                         ", expected " + std::to_string(m.n));
  }
}

double quad_diag(std::span<const double> diag, std::span<const double> z) {
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) acc += diag[i] * z[i] * z[i];
  return acc;
}

double quad_gram(const ObjectiveMatrices& m, std::span<const double> z) {
  const auto& k = simd::kernels();
  std::vector<double> qz(m.n);
  k.matvec(m.q.data(), z.data(), qz.data(), m.n);
  return k.dot(z.data(), qz.data(), m.n);
}

}  // namespace

double summary_variance_trace(const ObjectiveMatrices& m, std::span<const double> z) {
  check_length(m, z, "summary_variance_trace");
  return quad_diag(m.p, z) - quad_gram(m, z);
}

double query_trace(const ObjectiveMatrices& m, std::span<const double> z) {
  check_length(m, z, "query_trace");
  return quad_diag(m.r, z);
}

double loss(const ObjectiveMatrices& m, const LossParams& params, std::span<const double> z) {
  check_length(m, z, "loss");
  return params.lambda1 * quad_diag(m.p, z) -
         (params.lambda1 * quad_gram(m, z) + params.lambda2 * quad_diag(m.r, z));
}

}  // namespace qvsum::objective
