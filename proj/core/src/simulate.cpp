// =============================================================================
// wavectl - simulate implementation
// =============================================================================

#include "wavectl/simulate.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "wavectl/errors.hpp"
#include "wavectl/xfer.hpp"

namespace wavectl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double Disturbance::value(double t) const {
    if (shape == DisturbanceShape::none) return 0.0;
    if (t < t_start || t >= t_start + duration) return 0.0;
    const double tau = t - t_start;
    switch (shape) {
        case DisturbanceShape::square: return magnitude;
        case DisturbanceShape::pulse:
            return duration > 0.0
                       ? magnitude * std::sin(kPi * tau / duration)
                       : 0.0;
        case DisturbanceShape::exp_decaying:
            return magnitude * std::exp(-rate * tau);
        case DisturbanceShape::oscillatory:
            return magnitude * std::sin(rate * tau);
        case DisturbanceShape::none: break;
    }
    return 0.0;
}

namespace {

/// Maximal spans where |v| stays below eps_v for at least min_duration.
std::vector<StickInterval> scan_sticks(const std::vector<double>& t,
                                       const std::vector<double>& v,
                                       double eps_v, double min_duration) {
    std::vector<StickInterval> sticks;
    bool in_stick = false;
    double begin = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const bool slow = std::abs(v[i]) < eps_v;
        if (slow && !in_stick) {
            in_stick = true;
            begin = t[i];
        } else if (!slow && in_stick) {
            in_stick = false;
            if (t[i] - begin >= min_duration)
                sticks.push_back({begin, t[i]});
        }
    }
    if (in_stick && !t.empty() && t.back() - begin >= min_duration)
        sticks.push_back({begin, t.back()});
    return sticks;
}

/// One integration phase (loop open or closed): linear part prefactored so
/// the rank-one nonlinear stage reduces to a scalar equation per step.
struct Phase {
    Eigen::MatrixXd A;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;  // I - (dt/2) A
    Eigen::VectorXd Minv_b;                   // M^{-1} b_w
    double c_Minv_b = 0.0;                    // c_y1 M^{-1} b_w

    void factor(double dt, const Eigen::VectorXd& b_w,
                const Eigen::RowVectorXd& c_y1) {
        const Eigen::Index n = A.rows();
        Eigen::MatrixXd M =
            Eigen::MatrixXd::Identity(n, n) - (dt / 2.0) * A;
        lu.compute(M);
        Minv_b = lu.solve(b_w);
        c_Minv_b = c_y1.dot(Minv_b);
    }
};

}  // namespace

TimeSeries simulate(const ScenarioParams& sp, const Controller* K,
                    const SimConfig& cfg) {
    if (cfg.N < 50) throw Error("simulate: N must be at least 50");
    if (cfg.dt <= 0.0 || cfg.t_final <= 0.0)
        throw Error("simulate: dt and t_final must be positive");
    const bool closes = std::isfinite(cfg.controller_on_at);
    if (closes && K == nullptr)
        throw Error("simulate: controller_on_at is finite but no controller "
                    "was given");

    const DimParams dp = derive_dimensionless(sp);
    const XferParams xp{dp.q, dp.alpha, dp.lambda};
    const StateSpace plant = discretize_deflated(xp, cfg.N).ss;

    const int np = plant.order();
    const int nk = K ? K->order() : 0;
    const int n = np + nk;

    Eigen::VectorXd b_w = Eigen::VectorXd::Zero(n);
    b_w.head(np) = plant.B.col(0);
    Eigen::RowVectorXd c_y1 = Eigen::RowVectorXd::Zero(n);
    c_y1.head(np) = plant.C.row(1);
    Eigen::RowVectorXd c_y2 = Eigen::RowVectorXd::Zero(n);
    c_y2.head(np) = plant.C.row(2);

    // Off phase: plant drifts, controller states frozen.
    Phase off;
    off.A = Eigen::MatrixXd::Zero(n, n);
    off.A.topLeftCorner(np, np) = plant.A;
    off.factor(cfg.dt, b_w, c_y1);

    // On phase: u = -(C_K xK + D_K y) folded into the linear part.
    Phase on;
    Eigen::RowVectorXd u_row = Eigen::RowVectorXd::Zero(n);
    if (K) {
        const Eigen::VectorXd b_u = plant.B.col(1);
        Eigen::MatrixXd Cy(2, np);
        Cy.row(0) = plant.C.row(1);
        Cy.row(1) = plant.C.row(2);
        on.A = Eigen::MatrixXd::Zero(n, n);
        on.A.topLeftCorner(np, np) = plant.A - b_u * K->ss.D * Cy;
        on.A.topRightCorner(np, nk) = -b_u * K->ss.C;
        on.A.bottomLeftCorner(nk, np) = K->ss.B * Cy;
        on.A.bottomRightCorner(nk, nk) = K->ss.A;
        if (closes) on.factor(cfg.dt, b_w, c_y1);
        u_row.head(np) = -(K->ss.D * Cy).row(0);
        u_row.tail(nk) = -K->ss.C.row(0);
    }

    // Initial condition: uniform velocity offset toward the kink, zero
    // relative displacement, controller at rest.
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x.segment(cfg.N, cfg.N + 1).setConstant(
        -cfg.initial_offset * std::abs(dp.kink));

    const double ts = dp.time_scale;
    const long steps = std::lround(cfg.t_final / cfg.dt);

    TimeSeries out;
    const long rec = std::max(cfg.record_stride, 1);
    out.t.reserve(steps / rec + 2);

    // Bit speed is tracked at full step resolution (record_stride only
    // thins the returned series) so stick detection never misses a sample.
    std::vector<double> t_full, speed_full;
    t_full.reserve(steps + 1);
    speed_full.reserve(steps + 1);
    auto track_speed = [&](double t, double theta_dot) {
        t_full.push_back(t);
        speed_full.push_back(theta_dot);
    };

    auto record = [&](double t, bool on_now) {
        const double y1 = c_y1.dot(x);
        const double y2 = c_y2.dot(x);
        const double u = on_now ? u_row.dot(x) : 0.0;
        out.t.push_back(t);
        out.y1.push_back(y1);
        out.y2.push_back(y2);
        out.u.push_back(u);
        out.theta_dot_bit.push_back(sp.Omega + ts * y1);
        out.omega_cmd.push_back(control_backmap(sp, u, y2));
    };

    record(0.0, false);
    track_speed(0.0, sp.Omega + ts * c_y1.dot(x));
    Eigen::VectorXd v(n), x_mid(n);

    for (long k = 0; k < steps; ++k) {
        const double t0 = k * cfg.dt;
        const double t_mid = t0 + cfg.dt / 2.0;
        const bool on_now = closes && t0 >= cfg.controller_on_at;
        const Phase& ph = on_now ? on : off;
        const double w_mid = cfg.disturbance.value(t_mid);

        // The midpoint stage satisfies  M x_mid = x + (dt/2) b_w f(y1_mid)
        // with M = I - (dt/2) A, so the whole implicit step collapses to a
        // scalar root problem in y = y1_mid:
        //     g(y) = y - c_y1 M^{-1} x - (dt/2) (c_y1 M^{-1} b_w) (psi(y)+w).
        // Solving that scalar equation with a safeguarded Newton/bisection is
        // robust even on the near-vertical regularized friction segment,
        // where a full-state Newton iteration cycles across the kink.
        v = ph.lu.solve(x);
        const double cv = c_y1.dot(v);
        const double gain = (cfg.dt / 2.0) * ph.c_Minv_b;
        auto fnl = [&](double y) {
            return (cfg.linearize ? 0.0 : psi(sp, y)) + w_mid;
        };
        auto g = [&](double y) { return y - cv - gain * fnl(y); };

        double y = cv + gain * fnl(c_y1.dot(x));  // one fixed-point warm-up
        bool converged = false;
        double lo = 0.0, hi = 0.0;  // bisection bracket once sign change found
        bool have_bracket = false;
        for (int it = 0; it < cfg.newton_max_iter; ++it) {
            const double gy = g(y);
            if (std::abs(gy) <= cfg.newton_tol * (1.0 + std::abs(y))) {
                converged = true;
                break;
            }
            if (!have_bracket) {
                // Expand around the current iterate until g changes sign;
                // g is increasing (psi' stays far above -1/gain), so a sign
                // change brackets the unique root.
                double span = std::max(1.0, std::abs(y));
                for (int e = 0; e < 80 && !have_bracket; ++e) {
                    lo = y - span;
                    hi = y + span;
                    if (g(lo) < 0.0 && g(hi) > 0.0)
                        have_bracket = true;
                    else
                        span *= 2.0;
                }
                if (!have_bracket) break;
            }
            if (gy > 0.0)
                hi = y;
            else
                lo = y;
            const double slope =
                1.0 - gain * (cfg.linearize ? 0.0 : psi_deriv(sp, y));
            double y_next = std::abs(slope) > 1e-12 ? y - gy / slope : y;
            if (!(y_next > lo && y_next < hi))
                y_next = 0.5 * (lo + hi);  // Newton left the bracket: bisect
            y = y_next;
        }
        if (!converged) {
            std::ostringstream os;
            os << "simulate: implicit stage failed to converge at t = "
               << t0 + cfg.dt;
            throw StepTooLarge(os.str());
        }

        x_mid = v + (cfg.dt / 2.0) * fnl(y) * ph.Minv_b;
        x = 2.0 * x_mid - x;
        const double t1 = (k + 1) * cfg.dt;
        if (x.lpNorm<Eigen::Infinity>() > cfg.blowup_norm)
            throw BlowUp("state norm exceeded the blow-up bound at t = " +
                             std::to_string(t1),
                         t1);

        track_speed(t1, sp.Omega + ts * c_y1.dot(x));
        if ((k + 1) % rec == 0 || k + 1 == steps) record(t1, on_now);
    }
    out.stick_intervals = scan_sticks(
        t_full, speed_full, cfg.stick_eps_frac * sp.Omega,
        cfg.stick_min_duration);
    return out;
}

std::vector<StickInterval> detect_stick(const TimeSeries& ts, double eps_v,
                                        double min_duration) {
    return scan_sticks(ts.t, ts.theta_dot_bit, eps_v, min_duration);
}

LinearComparison linear_vs_nonlinear(const ScenarioParams& sp,
                                     const Controller* K, SimConfig cfg) {
    LinearComparison cmp;
    cfg.linearize = false;
    cmp.nonlinear = simulate(sp, K, cfg);
    cfg.linearize = true;
    cmp.linear = simulate(sp, K, cfg);
    const std::size_t m =
        std::min(cmp.nonlinear.y1.size(), cmp.linear.y1.size());
    for (std::size_t i = 0; i < m; ++i) {
        cmp.max_deviation =
            std::max(cmp.max_deviation,
                     std::abs(cmp.nonlinear.y1[i] - cmp.linear.y1[i]));
        cmp.amplitude = std::max(cmp.amplitude, std::abs(cmp.nonlinear.y1[i]));
    }
    return cmp;
}

}  // namespace wavectl
