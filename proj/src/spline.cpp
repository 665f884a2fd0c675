#include "sdecomp/spline.hpp"

#include <algorithm>

#include "sdecomp/error.hpp"

namespace sdecomp {

Eigen::MatrixXd natural_spline(const Eigen::VectorXd& knots, const Eigen::MatrixXd& values,
                               const Eigen::VectorXd& query) {
    const Eigen::Index n = knots.size();
    require(n >= 2, "spline needs at least two knots");
    require(values.rows() == n, "spline knot/value count mismatch");
    for (Eigen::Index i = 1; i < n; ++i) require(knots[i] > knots[i - 1], "spline knots must increase strictly");

    const Eigen::Index cols = values.cols();
    Eigen::VectorXd h = knots.tail(n - 1) - knots.head(n - 1);

    // Second derivatives M with M0 = M(n-1) = 0; Thomas algorithm on the interior.
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, cols);
    if (n > 2) {
        const Eigen::Index m = n - 2;
        Eigen::VectorXd diag(m), upper(m), lower(m);
        Eigen::MatrixXd rhs(m, cols);
        for (Eigen::Index i = 0; i < m; ++i) {
            lower[i] = h[i];
            diag[i] = 2.0 * (h[i] + h[i + 1]);
            upper[i] = h[i + 1];
            rhs.row(i) = 6.0 * ((values.row(i + 2) - values.row(i + 1)) / h[i + 1] -
                                (values.row(i + 1) - values.row(i)) / h[i]);
        }
        for (Eigen::Index i = 1; i < m; ++i) {
            const double w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs.row(i) -= w * rhs.row(i - 1);
        }
        second.row(m) = rhs.row(m - 1) / diag[m - 1];
        for (Eigen::Index i = m - 2; i >= 0; --i) {
            second.row(i + 1) = (rhs.row(i) - upper[i] * second.row(i + 2)) / diag[i];
        }
    }

    Eigen::MatrixXd out(query.size(), cols);
    Eigen::Index seg = 0;
    for (Eigen::Index q = 0; q < query.size(); ++q) {
        const double x = query[q];
        // query points are usually sorted; fall back to binary search otherwise
        if (seg >= n - 1 || x < knots[seg] || x > knots[seg + 1]) {
            const double* begin = knots.data();
            const double* it = std::upper_bound(begin, begin + n, x);
            seg = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(it - begin) - 1, 0, n - 2);
        }
        const double hi = h[seg];
        const double a = (knots[seg + 1] - x) / hi;
        const double b = (x - knots[seg]) / hi;
        out.row(q) = a * values.row(seg) + b * values.row(seg + 1) +
                     ((a * a * a - a) * second.row(seg) + (b * b * b - b) * second.row(seg + 1)) * (hi * hi / 6.0);
    }
    return out;
}

}  // namespace sdecomp
