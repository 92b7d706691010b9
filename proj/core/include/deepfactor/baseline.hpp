#pragma once

#include <vector>

#include <Eigen/Core>

#include "deepfactor/sample.hpp"

namespace deepfactor::baseline {

// Pooled linear factor model: target = intercept + coefficients . input.
struct LinearModel {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
};

// Least squares with optional ridge penalty on the coefficients (the
// intercept is never penalized): minimizes sum (y - a - x.b)^2 + lambda |b|^2
// via centered normal equations and a Cholesky solve. lambda = 0 is plain
// OLS; a rank-deficient design at lambda = 0 throws SingularDesignError.
LinearModel ols_fit(const std::vector<Sample>& samples, double ridge_lambda = 0.0);

// Matrix form used internally and by tests.
LinearModel ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                    double ridge_lambda = 0.0);

// intercept + dot(coefficients, x); throws DimensionError on length mismatch.
double linear_predict(const LinearModel& model, const Eigen::VectorXd& x);

}  // namespace deepfactor::baseline
