#pragma once

#include <string>

#include <Eigen/Core>

#include "deepfactor/month.hpp"

namespace deepfactor {

// One training pair: an 80-dim stacked lagged-descriptor input and the
// next-month return realized after as_of.
struct Sample {
  std::string stock_id;
  Month as_of;
  Eigen::VectorXd input;  // kInputDim entries, lag-block layout
  double target = 0.0;    // return over the month following as_of
};

}  // namespace deepfactor
