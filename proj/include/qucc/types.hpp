// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace qucc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace qucc
