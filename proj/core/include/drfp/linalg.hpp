#pragma once

#include <Eigen/Dense>

namespace drfp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace drfp
