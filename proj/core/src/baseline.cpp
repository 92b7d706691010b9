#include "deepfactor/baseline.hpp"

#include <Eigen/Cholesky>

#include "deepfactor/error.hpp"

namespace deepfactor::baseline {

LinearModel ols_fit(const std::vector<Sample>& samples, double ridge_lambda) {
  if (samples.size() < 2) {
    throw std::invalid_argument("ols_fit: need at least 2 samples");
  }
  const int n = static_cast<int>(samples.size());
  const int p = static_cast<int>(samples.front().input.size());
  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd targets(n);
  for (int i = 0; i < n; ++i) {
    if (samples[i].input.size() != p) {
      throw DimensionError("ols_fit: inconsistent sample input lengths");
    }
    design.row(i) = samples[i].input.transpose();
    targets(i) = samples[i].target;
  }
  return ols_fit(design, targets, ridge_lambda);
}

LinearModel ols_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                    double ridge_lambda) {
  if (design.rows() < 2) throw std::invalid_argument("ols_fit: need at least 2 samples");
  if (design.rows() != targets.size()) {
    throw DimensionError("ols_fit: design rows != target length");
  }
  if (!design.allFinite() || !targets.allFinite()) {
    throw std::invalid_argument("ols_fit: non-finite design or targets");
  }
  if (ridge_lambda < 0.0) throw std::invalid_argument("ols_fit: ridge_lambda must be >= 0");

  // Centering keeps the intercept out of the penalty and conditions the
  // normal equations.
  const Eigen::RowVectorXd x_mean = design.colwise().mean();
  const double y_mean = targets.mean();
  const Eigen::MatrixXd centered = design.rowwise() - x_mean;
  const Eigen::VectorXd y_centered = targets.array() - y_mean;

  Eigen::MatrixXd normal = centered.transpose() * centered;
  normal.diagonal().array() += ridge_lambda;

  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  bool singular = llt.info() != Eigen::Success;
  if (!singular && ridge_lambda == 0.0) {
    // A Cholesky factor can squeak through on a numerically singular matrix;
    // treat a collapsed pivot ratio as rank deficiency.
    const auto diag = llt.matrixLLT().diagonal();
    const double max_pivot = diag.maxCoeff();
    const double min_pivot = diag.minCoeff();
    if (!(min_pivot > 0.0) || (min_pivot / max_pivot) * (min_pivot / max_pivot) < 1e-12) {
      singular = true;
    }
  }
  if (singular) {
    throw SingularDesignError(
        "ols_fit: design is rank deficient at lambda = 0; pass ridge_lambda > 0");
  }

  LinearModel model;
  model.coefficients = llt.solve(centered.transpose() * y_centered);
  model.intercept = y_mean - x_mean.dot(model.coefficients);
  return model;
}

double linear_predict(const LinearModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.coefficients.size()) {
    throw DimensionError("linear_predict: input length " + std::to_string(x.size()) +
                         " != coefficient length " + std::to_string(model.coefficients.size()));
  }
  return model.intercept + model.coefficients.dot(x);
}

}  // namespace deepfactor::baseline
