#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qvsum/ingest.hpp"
#include "qvsum/query_distance.hpp"

namespace qvsum::objective {

// Weights of the summary-variance and query-relevance terms.
struct LossParams {
  double lambda1 = 1.0;
  double lambda2 = 1.0;

  void validate() const;
};

// P = diag(||x_i||^2), Q = X X^T (Gram), R = diag(s_i^2). P and R are kept as
// their diagonals; Q is dense row-major.
struct ObjectiveMatrices {
  std::size_t n = 0;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> r;

  double q_at(std::size_t i, std::size_t j) const { return q[i * n + j]; }
};

ObjectiveMatrices build_matrices(const ingest::FeatureMatrix& x, const query::DistanceVector& dv);

// Same construction from an arbitrary row-major n x dim feature block.
ObjectiveMatrices build_matrices(std::span<const double> rows, std::size_t n, std::size_t dim,
                                 std::span<const double> relevance);

// Z^T (P - Q) Z
double summary_variance_trace(const ObjectiveMatrices& m, std::span<const double> z);

// Z^T R Z = sum z_i^2 s_i^2
double query_trace(const ObjectiveMatrices& m, std::span<const double> z);

// lambda1 Z^T P Z - Z^T (lambda1 Q + lambda2 R) Z
double loss(const ObjectiveMatrices& m, const LossParams& params, std::span<const double> z);

}  // namespace qvsum::objective
