#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "natcurve/error.hpp"
#include "natcurve/vec3.hpp"

namespace natcurve {

/// Least-squares quadric x^T A x + b.x + c = 0 through a point cloud.
struct QuadricFit {
    /// Unit-norm coefficients [xx, yy, zz, xy, xz, yz, x, y, z, 1] in normalized
    /// coordinates (centroid removed, unit RMS radius).
    std::array<double, 10> coefficients{};
    double residual = 0.0;       ///< max |Q(x_i)| over the normalized points
    double singular_gap = 0.0;   ///< second-smallest / largest singular value
    std::array<int, 3> signature{}; ///< signs of the eigenvalues of A after centering, descending
    bool one_sheet = false;      ///< signature (+, +, -)
};

struct QuadricConfig {
    std::size_t min_points = 100;
    double rank_tol = 1e-8;      ///< relative; below this the quadric is not unique
    double eigen_tol = 1e-9;     ///< relative zero for the eigenvalue signature
};

inline QuadricFit fit_quadric(std::span<const Vec3> points, const QuadricConfig& cfg = {}) {
    const std::size_t n = points.size();
    if (n < cfg.min_points) {
        throw Error(ErrorCode::GridTooSmall, "quadric fit needs at least " + std::to_string(cfg.min_points) + " points");
    }
    Vec3 centre{0, 0, 0};
    for (const Vec3& p : points) centre += p;
    centre = centre / static_cast<double>(n);
    double rms = 0.0;
    for (const Vec3& p : points) rms += dot(p - centre, p - centre);
    rms = std::sqrt(rms / static_cast<double>(n));
    if (!(rms > 0.0)) throw Error(ErrorCode::DegenerateFit, "all points coincide");

    Eigen::MatrixXd D(n, 10);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 q = (points[i] - centre) / rms;
        D.row(static_cast<Eigen::Index>(i)) << q.x * q.x, q.y * q.y, q.z * q.z, q.x * q.y, q.x * q.z, q.y * q.z, q.x,
            q.y, q.z, 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    QuadricFit fit;
    fit.singular_gap = sv(8) / largest;
    if (!(fit.singular_gap > cfg.rank_tol)) {
        throw Error(ErrorCode::DegenerateFit, "design matrix is rank-deficient; the points lie on many quadrics");
    }
    const Eigen::VectorXd v = svd.matrixV().col(9);
    for (int k = 0; k < 10; ++k) fit.coefficients[static_cast<std::size_t>(k)] = v(k);
    fit.residual = (D * v).cwiseAbs().maxCoeff();

    Eigen::Matrix3d A;
    A << v(0), v(3) / 2, v(4) / 2, v(3) / 2, v(1), v(5) / 2, v(4) / 2, v(5) / 2, v(2);
    const Eigen::Vector3d b(v(6), v(7), v(8));
    double c = v(9);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(A);
    Eigen::Vector3d lambda = eig.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    if (std::fabs(A.determinant()) > cfg.eigen_tol * scale * scale * scale) {
        // Centre x_c = -A^{-1} b / 2 gives Q = (x - x_c)^T A (x - x_c) + c'.
        const Eigen::Vector3d xc = -0.5 * A.ldlt().solve(b);
        c += 0.5 * b.dot(xc);
    }
    // Normalize so the centred form reads x^T A x = -c' with -c' > 0.
    if (c > 0.0) lambda = -lambda;
    std::array<double, 3> sorted{lambda(0), lambda(1), lambda(2)};
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    int pos = 0, neg = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        const double l = sorted[k];
        fit.signature[k] = l > cfg.eigen_tol * scale ? 1 : (l < -cfg.eigen_tol * scale ? -1 : 0);
        pos += fit.signature[k] > 0;
        neg += fit.signature[k] < 0;
    }
    fit.one_sheet = pos == 2 && neg == 1;
    return fit;
}

} // namespace natcurve
