// =============================================================================
// wavectl - internal: cached Hessenberg frequency-response solver
// =============================================================================
//
// One orthogonal Hessenberg reduction A = Q H Q^T turns every subsequent
// (jw I - A)^{-1} solve into an O(n^2) banded elimination, which is what makes
// dense frequency sweeps over high-order discretizations affordable.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace wavectl::detail {

class HessFreqSolver {
public:
    HessFreqSolver(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                   const Eigen::MatrixXd& C, const Eigen::MatrixXd& D)
        : D_(D) {
        Eigen::HessenbergDecomposition<Eigen::MatrixXd> hd(A);
        H_ = hd.matrixH();
        const Eigen::MatrixXd Q = hd.matrixQ();
        QtB_ = Q.transpose() * B;
        CQ_ = C * Q;
    }

    /// C (jw I - A)^{-1} B + D.
    Eigen::MatrixXcd response(double omega) const {
        return response_at({0.0, omega});
    }

    /// C (s I - A)^{-1} B + D at an arbitrary complex point s.
    Eigen::MatrixXcd response_at(std::complex<double> s) const {
        const int n = static_cast<int>(H_.rows());
        const int m = static_cast<int>(QtB_.cols());
        if (n == 0) return D_.cast<std::complex<double>>();

        // M = s I - H is complex upper Hessenberg; eliminate the single
        // subdiagonal with adjacent-row partial pivoting.
        Eigen::MatrixXcd M = (-H_).cast<std::complex<double>>();
        M.diagonal().array() += s;
        Eigen::MatrixXcd X = QtB_.cast<std::complex<double>>();

        for (int k = 0; k + 1 < n; ++k) {
            if (std::abs(M(k + 1, k)) > std::abs(M(k, k))) {
                M.row(k).tail(n - k).swap(M.row(k + 1).tail(n - k));
                X.row(k).swap(X.row(k + 1));
            }
            const std::complex<double> f = M(k + 1, k) / M(k, k);
            M.row(k + 1).tail(n - k - 1) -= f * M.row(k).tail(n - k - 1);
            M(k + 1, k) = 0.0;
            X.row(k + 1) -= f * X.row(k);
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int j = 0; j < m; ++j) {
                std::complex<double> acc = X(i, j);
                for (int k = i + 1; k < n; ++k) acc -= M(i, k) * X(k, j);
                X(i, j) = acc / M(i, i);
            }
        }
        return CQ_ * X + D_.cast<std::complex<double>>();
    }

private:
    Eigen::MatrixXd H_, QtB_, CQ_, D_;
};

}  // namespace wavectl::detail
