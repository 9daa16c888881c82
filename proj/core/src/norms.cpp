// =============================================================================
// wavectl - norms implementation
// =============================================================================

#include "wavectl/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dense_freq.hpp"
#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double gain_of(const Eigen::MatrixXcd& R) {
    if (R.rows() == 1 && R.cols() == 1) return std::abs(R(0, 0));
    return R.jacobiSvd().singularValues()(0);
}

/// Golden-section maximization of g over [lo, hi] in log-frequency.
std::pair<double, double> golden_refine(
    const std::function<double(double)>& gain, double omega_lo,
    double omega_hi) {
    const double gr = 0.6180339887498949;
    double a = std::log(std::max(omega_lo, 1e-12));
    double b = std::log(omega_hi);
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = gain(std::exp(x1));
    double f2 = gain(std::exp(x2));
    while (b - a > 1e-7) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = gain(std::exp(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = gain(std::exp(x1));
        }
    }
    return f1 > f2 ? std::make_pair(std::exp(x1), f1)
                   : std::make_pair(std::exp(x2), f2);
}

/// Shared grid-then-polish peak search over a scalar gain function.
NormResult peak_search(const std::function<double(double)>& gain,
                       double omega_lo, double omega_hi, int grid_points,
                       bool octave_extend) {
    std::vector<double> omegas(grid_points), gains(grid_points);
    const double l0 = std::log10(omega_lo), l1 = std::log10(omega_hi);
    for (int i = 0; i < grid_points; ++i) {
        omegas[i] = std::pow(10.0, l0 + (l1 - l0) * i / (grid_points - 1.0));
        gains[i] = gain(omegas[i]);
    }

    // Local maxima (endpoints included), strongest three polished.
    std::vector<int> cands;
    for (int i = 0; i < grid_points; ++i) {
        const bool up = i == 0 || gains[i] >= gains[i - 1];
        const bool down = i == grid_points - 1 || gains[i] >= gains[i + 1];
        if (up && down) cands.push_back(i);
    }
    std::sort(cands.begin(), cands.end(),
              [&](int a, int b) { return gains[a] > gains[b]; });
    if (cands.size() > 3) cands.resize(3);

    double best_val = 0.0, best_omega = omegas[0];
    for (int i : cands) {
        const double lo = omegas[std::max(i - 1, 0)];
        const double hi = omegas[std::min(i + 1, grid_points - 1)];
        const auto [w, v] = golden_refine(gain, lo, hi);
        if (v > best_val) {
            best_val = v;
            best_omega = w;
        }
    }

    // Static gain can dominate everything on the grid.
    const double g0 = gain(0.0);
    if (g0 > best_val) {
        best_val = g0;
        best_omega = 0.0;
    }

    if (octave_extend) {
        for (double w = omega_hi * 2.0; w <= 1e7; w *= 2.0) {
            const double g = gain(w);
            if (g > best_val * (1.0 + 1e-9)) {
                const auto [wr, vr] = golden_refine(gain, w / 2.0, w * 2.0);
                if (vr > best_val) {
                    best_val = vr;
                    best_omega = wr;
                }
            }
        }
    }

    NormResult out;
    out.value = best_val;
    out.argmax = best_omega;
    out.method = NormMethod::grid_refine;
    out.tolerance = 1e-6 * best_val;
    return out;
}

}  // namespace

const char* to_string(NormMethod m) {
    switch (m) {
        case NormMethod::grid_refine: return "grid_refine";
        case NormMethod::gramian: return "gramian";
        case NormMethod::impulse_trapezoid: return "impulse_trapezoid";
    }
    return "?";
}

double spectral_abscissa(const Eigen::MatrixXd& A) {
    if (A.rows() == 0) return -std::numeric_limits<double>::infinity();
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

NormResult hinf(const StateSpace& ss, std::optional<double> abscissa_hint) {
    ss.validate();
    const double absc =
        abscissa_hint ? *abscissa_hint : spectral_abscissa(ss.A);
    if (!(absc < 0.0))
        throw UnstableSystem("hinf: spectral abscissa is not negative");
    detail::HessFreqSolver solver(ss.A, ss.B, ss.C, ss.D);
    NormResult out = peak_search(
        [&](double w) { return gain_of(solver.response(w)); }, 1e-4, 1e5, 400,
        /*octave_extend=*/true);
    // The supremum of a rational gain can sit at omega = infinity, where
    // only the feedthrough survives (reachable for weighted cascades whose
    // weight keeps rising past the grid).
    const double g_inf = gain_of(ss.D.cast<std::complex<double>>().eval());
    if (g_inf > out.value) {
        out.value = g_inf;
        out.argmax = std::numeric_limits<double>::infinity();
        out.tolerance = 1e-6 * g_inf;
    }
    return out;
}

NormResult hinf_scalar_scan(
    const std::function<std::complex<double>(double)>& g, double omega_lo,
    double omega_hi, int grid_points, bool octave_extend) {
    return peak_search([&](double w) { return std::abs(g(w)); }, omega_lo,
                       omega_hi, grid_points, octave_extend);
}

NormResult h2(const StateSpace& ss, std::optional<double> abscissa_hint) {
    ss.validate();
    if (ss.D.cwiseAbs().maxCoeff() > 1e-12)
        throw NotStrictlyProper("h2: the channel has a direct feedthrough");
    const int n = ss.order();
    if (n == 0) return {0.0, kNaN, NormMethod::gramian, 0.0};

    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(
        ss.A.cast<std::complex<double>>());
    const Eigen::MatrixXcd& T = schur.matrixT();
    const Eigen::MatrixXcd& U = schur.matrixU();
    const double absc = abscissa_hint
                            ? *abscissa_hint
                            : T.diagonal().real().maxCoeff();
    if (!(absc < 0.0))
        throw UnstableSystem("h2: spectral abscissa is not negative");

    // Controllability Gramian: A P + P A^T = -B B^T, reduced to triangular
    // form T Y + Y T^H = Q and solved column-by-column from the last.
    const Eigen::MatrixXcd BBt =
        (ss.B * ss.B.transpose()).cast<std::complex<double>>();
    const Eigen::MatrixXcd Q = -(U.adjoint() * BBt * U);
    Eigen::MatrixXcd Y(n, n);
    Eigen::VectorXcd rhs(n), y(n);
    for (int j = n - 1; j >= 0; --j) {
        rhs = Q.col(j);
        for (int k = j + 1; k < n; ++k) rhs -= std::conj(T(j, k)) * Y.col(k);
        const std::complex<double> shift = std::conj(T(j, j));
        for (int i = n - 1; i >= 0; --i) {
            std::complex<double> acc = rhs(i);
            for (int k = i + 1; k < n; ++k) acc -= T(i, k) * y(k);
            y(i) = acc / (T(i, i) + shift);
        }
        Y.col(j) = y;
    }
    const Eigen::MatrixXd P = (U * Y * U.adjoint()).real();
    const double tr = (ss.C * P * ss.C.transpose()).trace();

    NormResult out;
    out.value = std::sqrt(std::max(tr, 0.0));
    out.argmax = kNaN;
    out.method = NormMethod::gramian;
    out.tolerance = 1e-8 * out.value + 1e-14;
    return out;
}

NormResult peak_gain(const StateSpace& ss, const PeakGainOptions& opts) {
    ss.validate();
    if (ss.num_inputs() != 1 || ss.num_outputs() != 1)
        throw Error("peak_gain: channel must be SISO");
    const double absc = spectral_abscissa(ss.A);
    if (!(absc < 0.0))
        throw UnstableSystem("peak_gain: spectral abscissa is not negative");
    const int n = ss.order();
    if (n == 0)
        return {std::abs(ss.D(0, 0)), kNaN, NormMethod::impulse_trapezoid,
                0.0};

    const Eigen::MatrixXd E = (ss.A * opts.dt).exp();
    const Eigen::RowVectorXd c = ss.C.row(0);
    const double c_norm = c.norm();

    Eigen::VectorXd x = ss.B.col(0);
    const double b_norm = std::max(x.norm(), 1e-300);

    double integral = 0.0;
    double prev_abs = std::abs(c.dot(x));
    double peak_t = 0.0, peak_g = prev_abs;
    double kappa = 1.0;
    double tail = std::numeric_limits<double>::infinity();
    double t = 0.0;
    const int chunk = 1000;

    while (t < opts.horizon_cap) {
        for (int k = 0; k < chunk && t < opts.horizon_cap; ++k) {
            x = E * x;
            t += opts.dt;
            const double g = std::abs(c.dot(x));
            integral += 0.5 * (prev_abs + g) * opts.dt;
            prev_abs = g;
            if (g > peak_g) {
                peak_g = g;
                peak_t = t;
            }
            if (absc * t > -600.0)
                kappa = std::max(kappa,
                                 x.norm() / (b_norm * std::exp(absc * t)));
        }
        // |C e^{A tau} x(t)| <= ||C|| kappa e^{absc tau} ||x(t)||, integrated.
        tail = c_norm * 10.0 * kappa * x.norm() / (-absc);
        if (tail < opts.tail_rel_target * std::max(integral, 1e-300)) break;
    }

    // Slow systems: the fast transients are integrated, but the tail bound is
    // still dominated by a lightly damped mode.  Keep marching with a coarse
    // step (the remaining response is smooth), tracking the trapezoid error
    // through the sampled second derivative c A^2 x.
    double quad_err = 0.0;
    if (tail >= opts.tail_rel_target * std::max(integral, 1e-300) &&
        opts.coarse_dt > opts.dt && opts.long_horizon_cap > t) {
        const Eigen::MatrixXd E2 = (ss.A * opts.coarse_dt).exp();
        const Eigen::RowVectorXd cA2 = c * ss.A * ss.A;
        double prev_curv = std::abs(cA2.dot(x));
        const double err_coef =
            opts.coarse_dt * opts.coarse_dt * opts.coarse_dt / 12.0;
        while (t < opts.long_horizon_cap) {
            for (int k = 0; k < chunk && t < opts.long_horizon_cap; ++k) {
                x = E2 * x;
                t += opts.coarse_dt;
                const double g = std::abs(c.dot(x));
                integral += 0.5 * (prev_abs + g) * opts.coarse_dt;
                prev_abs = g;
                if (g > peak_g) {
                    peak_g = g;
                    peak_t = t;
                }
                const double curv = std::abs(cA2.dot(x));
                quad_err +=
                    err_coef * 2.0 * std::max(prev_curv, curv);
                prev_curv = curv;
            }
            tail = c_norm * 10.0 * kappa * x.norm() / (-absc);
            if (tail < opts.tail_rel_target * std::max(integral, 1e-300))
                break;
        }
    }

    NormResult out;
    out.value = integral + std::abs(ss.D(0, 0));
    out.argmax = peak_t;
    out.method = NormMethod::impulse_trapezoid;
    out.tolerance = tail + quad_err + 1e-6 * out.value;
    return out;
}

}  // namespace wavectl
