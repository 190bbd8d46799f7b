#pragma once

#include <Eigen/Core>

namespace bifrb {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace bifrb
