#pragma once

#include <Eigen/Dense>

namespace sdecomp {

/// Natural cubic spline through (knots[i], values.row(i)), evaluated at every
/// query point. Each column of values is interpolated independently; knots must
/// be strictly increasing. Two knots degrade to linear interpolation.
Eigen::MatrixXd natural_spline(const Eigen::VectorXd& knots, const Eigen::MatrixXd& values,
                               const Eigen::VectorXd& query);

inline Eigen::VectorXd natural_spline(const Eigen::VectorXd& knots, const Eigen::VectorXd& values,
                                      const Eigen::VectorXd& query) {
    return natural_spline(knots, Eigen::MatrixXd(values), query).col(0);
}

}  // namespace sdecomp
