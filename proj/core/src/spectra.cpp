// =============================================================================
// wavectl - spectra implementation
// =============================================================================

#include "wavectl/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace detail {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kMaxContourPoints = 3'000'000;

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

struct Node {
    double t;
    double arg;
    double log_abs;
};

}  // namespace

Complex contour_point(double t, double R) {
    if (t <= 0.5) {
        // Graded axis segment.  The tanh grading crowds samples toward the
        // |omega| = R ends (matching the arc density at the joins) and is
        // coarsest at omega = 0, where the step reaches ~12 R / n in omega.
        const double omega = R * std::tanh(3.0 * (4.0 * t - 1.0)) / std::tanh(3.0);
        return Complex(0.0, omega);
    }
    const double theta = kPi / 2.0 - 2.0 * kPi * (t - 0.5);
    return Complex(R * std::cos(theta), R * std::sin(theta));
}

WindingResult winding_closed_contour(const std::function<ArgLog(Complex)>& f,
                                     const ContourSpec& spec,
                                     double zero_tol) {
    if (!(spec.R > 0.0)) throw Error("winding: contour radius must be positive");

    const double log_floor = std::log(zero_tol);
    double min_log = std::numeric_limits<double>::infinity();

    auto eval = [&](double t) {
        const ArgLog al = f(contour_point(t, spec.R));
        min_log = std::min(min_log, al.second);
        return Node{t, al.first, al.second};
    };

    // Both the arc phase and the axis phase advance at a rate ~R, and the
    // graded axis is coarsest at omega = 0 (step ~12 R / n).  The floor of
    // 20 R keeps every drift-only increment below ~0.6 rad, so a localized
    // pi-swing from a zero just off the contour cannot combine with drift
    // into a wrapped step that slips under the refinement cap (which is how
    // whole turns alias away).
    const std::size_t n0 = static_cast<std::size_t>(std::max(
        static_cast<double>(std::max(spec.base_samples, 16)),
        std::ceil(20.0 * spec.R)));

    std::vector<Node> nodes;
    nodes.reserve(n0 + 1024);
    for (std::size_t i = 0; i < n0; ++i)
        nodes.push_back(eval(static_cast<double>(i) / static_cast<double>(n0 - 1)));

    bool refined = false;
    const double cap = spec.phase_cap * (1.0 + 1e-12);
    // A zero at distance delta from the contour swings the phase by ~pi
    // within a window of width ~delta; |f| at nearby samples is ~|f'| delta.
    // Segments whose chord exceeds that scale can hide the whole swing
    // between two samples, so split them until the chord resolves it.
    const double mod_gate = std::log(0.5);
    auto near_zero_unresolved = [&](const Node& a, const Node& b) {
        const double lo = std::min(a.log_abs, b.log_abs);
        if (lo >= mod_gate) return false;
        const double chord = std::abs(contour_point(b.t, spec.R) -
                                      contour_point(a.t, spec.R));
        return chord > 0.5 * std::exp(lo);
    };
    int round = 0;
    for (; round < spec.max_refinements; ++round) {
        std::vector<std::size_t> bad;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            if (std::abs(wrap_pi(nodes[i + 1].arg - nodes[i].arg)) > cap ||
                near_zero_unresolved(nodes[i], nodes[i + 1]))
                bad.push_back(i);
        if (bad.empty()) break;
        refined = true;
        if (nodes.size() + bad.size() > kMaxContourPoints)
            throw ZeroCrossingOnContour(
                "winding: refinement exploded; the image passes too close to "
                "the origin");
        std::vector<Node> next;
        next.reserve(nodes.size() + bad.size());
        std::size_t b = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            next.push_back(nodes[i]);
            if (b < bad.size() && bad[b] == i) {
                next.push_back(eval(0.5 * (nodes[i].t + nodes[i + 1].t)));
                ++b;
            }
        }
        nodes.swap(next);
        if (min_log < log_floor)
            throw ZeroCrossingOnContour(
                "winding: contour modulus fell below the zero tolerance");
    }
    if (round == spec.max_refinements)
        throw ZeroCrossingOnContour(
            "winding: phase increments failed to settle under refinement");
    if (min_log < log_floor)
        throw ZeroCrossingOnContour(
            "winding: contour modulus fell below the zero tolerance");

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        total += wrap_pi(nodes[i + 1].arg - nodes[i].arg);
    total += wrap_pi(nodes.front().arg - nodes.back().arg);

    const double w_real = total / (2.0 * kPi);
    const long w = std::lround(w_real);
    if (std::abs(w_real - static_cast<double>(w)) > 0.1)
        throw Error("winding: accumulated phase is not an integer multiple of "
                    "2*pi");

    WindingResult out;
    out.winding = static_cast<int>(w);
    out.samples_used = nodes.size();
    out.min_modulus = min_log > 700.0 ? std::numeric_limits<double>::infinity()
                                      : std::exp(min_log);
    out.refined = refined;
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Winding of d and pole counts
// ---------------------------------------------------------------------------

WindingResult winding_of_d(const XferParams& p, const ContourSpec& spec) {
    auto f = [&p](Complex s) -> detail::ArgLog {
        const LogValue lv = eval_d_log(p, s);
        return {lv.arg, lv.log_abs};
    };
    return detail::winding_closed_contour(f, spec);
}

int count_unstable_poles(const XferParams& p, const ContourSpec& spec) {
    const WindingResult w1 = winding_of_d(p, spec);
    ContourSpec doubled = spec;
    doubled.R = 2.0 * spec.R;
    const WindingResult w2 = winding_of_d(p, doubled);
    if (w1.winding != w2.winding)
        throw RadiusTooSmall(
            "count_unstable_poles: winding changes when the radius doubles");
    const int n_p = -w1.winding;
    if (n_p < 0)
        throw RadiusTooSmall(
            "count_unstable_poles: negative count; roots lie outside the "
            "contour");
    return n_p;
}

namespace detail {

std::pair<double, int> stabilized_radius_and_winding(const XferParams& p) {
    double R = pole_exclusion_radius_analytic(p);

    auto winding_at = [&](double radius) {
        const double nudges[] = {1.0, 1.01, 0.99, 1.023};
        for (double f : nudges) {
            try {
                ContourSpec cs;
                cs.R = radius * f;
                return winding_of_d(p, cs).winding;
            } catch (const ZeroCrossingOnContour&) {
                continue;
            }
        }
        throw ZeroCrossingOnContour(
            "count_unstable_poles: zero persists on contour after radius "
            "nudges");
    };

    int w0 = winding_at(R);
    int w1 = winding_at(2.0 * R);
    for (int iter = 0; iter < 8; ++iter) {
        const int w2 = winding_at(4.0 * R);
        if (w0 == w1 && w1 == w2) return {R, w0};
        R *= 2.0;
        w0 = w1;
        w1 = w2;
    }
    throw RadiusTooSmall(
        "count_unstable_poles: winding number failed to stabilize under "
        "doubling");
}

}  // namespace detail

int count_unstable_poles(const XferParams& p) {
    const auto [R, w] = detail::stabilized_radius_and_winding(p);
    (void)R;
    const int n_p = -w;
    if (n_p < 0)
        throw RadiusTooSmall(
            "count_unstable_poles: negative count; roots lie outside the "
            "contour");
    return n_p;
}

// ---------------------------------------------------------------------------
// Crossing set and zone boundaries
// ---------------------------------------------------------------------------

std::vector<CrossingPoint> zero_crossing_pairs(
    double lambda, const std::vector<double>& omega_grid) {
    std::vector<CrossingPoint> out;
    out.reserve(omega_grid.size());
    for (double omega : omega_grid) {
        if (!(omega > 0.0)) continue;
        Complex phi;
        try {
            phi = eval_Phi(lambda, Complex(0.0, omega));
        } catch (const NumericalPole&) {
            continue;
        }
        const double q = 1.0 + phi.real();
        const double alpha = -phi.imag() / omega;
        if (q > 0.0 && alpha > 0.0) out.push_back({q, alpha, omega});
    }
    return out;
}

std::optional<double> lambda_crit(double q) {
    if (q > 1.0) return (q - 1.0) / 2.0;
    if (q == 1.0) return 0.0;
    return std::nullopt;
}

CrossingDirection crossing_direction(double q, double alpha) {
    const double D = (q - 1.0) + (q - 1.0) * (q - 1.0) / 3.0 - alpha;
    if (std::abs(D) < 1e-12) return CrossingDirection::degenerate;
    return D > 0.0 ? CrossingDirection::left_to_right
                   : CrossingDirection::right_to_left;
}

const char* to_string(Zone z) {
    switch (z) {
        case Zone::gray: return "gray";
        case Zone::blue: return "blue";
        case Zone::red: return "red";
        case Zone::magenta: return "magenta";
        case Zone::green: return "green";
    }
    return "?";
}

namespace {

double real_root_parabola(double q) {
    return (q - 1.0) + (q - 1.0) * (q - 1.0) / 3.0;
}

/// Upper envelope of the imaginary-axis crossing set, traced once by sweeping
/// lambda and omega, binned over q with 1e-3 resolution.
struct EnvelopeCurve {
    double q_min = 0.90;
    double q_max = 3.95;
    double dq = 1e-3;
    std::vector<double> max_alpha;  // NaN where the crossing set is empty

    int bins() const {
        return static_cast<int>(std::ceil((q_max - q_min) / dq));
    }

    // Linear interpolation of the binned polyline at q; NaN when the two
    // nearest populated bins are missing.
    double at(double q) const {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        if (!(q >= q_min) || !(q <= q_max)) return nan;
        const double x = (q - q_min) / dq;
        int lo = static_cast<int>(std::floor(x));
        lo = std::clamp(lo, 0, bins() - 1);
        // Walk to the nearest populated bins on each side (gaps are rare and
        // one bin wide at the sweep resolution).
        int a = lo, b = lo + 1;
        while (a >= 0 && std::isnan(max_alpha[a])) --a;
        while (b < static_cast<int>(max_alpha.size()) && std::isnan(max_alpha[b]))
            ++b;
        if (a < 0 && b >= static_cast<int>(max_alpha.size())) return nan;
        if (a < 0) return max_alpha[b];
        if (b >= static_cast<int>(max_alpha.size())) return max_alpha[a];
        const double qa = q_min + (a + 0.5) * dq;
        const double qb = q_min + (b + 0.5) * dq;
        const double w = std::clamp((q - qa) / (qb - qa), 0.0, 1.0);
        return (1.0 - w) * max_alpha[a] + w * max_alpha[b];
    }
};

EnvelopeCurve build_envelope() {
    EnvelopeCurve c;
    c.max_alpha.assign(c.bins() + 1,
                       std::numeric_limits<double>::quiet_NaN());
    const int n_lambda = 800;
    const int n_omega = 3000;
    std::vector<double> omega_grid(n_omega);
    for (int j = 0; j < n_omega; ++j)
        omega_grid[j] = std::pow(10.0, -3.0 + (std::log10(60.0) + 3.0) * j /
                                            (n_omega - 1.0));
    for (int i = 0; i < n_lambda; ++i) {
        const double lam = std::pow(
            10.0, -3.0 + (std::log10(8.0) + 3.0) * i / (n_lambda - 1.0));
        for (const CrossingPoint& cp : zero_crossing_pairs(lam, omega_grid)) {
            if (cp.q < c.q_min || cp.q > c.q_max) continue;
            const int bin = std::min(
                static_cast<int>((cp.q - c.q_min) / c.dq), c.bins());
            double& slot = c.max_alpha[bin];
            if (std::isnan(slot) || cp.alpha > slot) slot = cp.alpha;
        }
    }
    return c;
}

const EnvelopeCurve& envelope() {
    static const EnvelopeCurve curve = build_envelope();
    return curve;
}

std::vector<int> expected_pattern(Zone z) {
    switch (z) {
        case Zone::gray: return {0};
        case Zone::blue: return {0, 2, 0};
        case Zone::red: return {1, 2, 0};
        case Zone::magenta: return {1, 0, 2, 0};
        case Zone::green: return {1, 0};
    }
    return {};
}

}  // namespace

// ---------------------------------------------------------------------------
// classify_zone
// ---------------------------------------------------------------------------

ZonePattern classify_zone(double q, double alpha, double boundary_tol) {
    if (!(alpha > 0.0))
        throw Error("classify_zone: alpha must be positive");
    if (!(q >= 0.0) || q > 3.9)
        throw Error("classify_zone: q outside the traced range [0, 3.9]");

    Zone zone;
    if (q > 1.0) {
        const double pb = real_root_parabola(q);
        if (std::abs(alpha - pb) <= boundary_tol)
            throw OnBoundary("classify_zone: (q, alpha) lies on the real-root "
                             "crossing parabola");
        if (alpha < pb) {
            zone = Zone::red;
        } else {
            const double env = envelope().at(q);
            if (std::isnan(env))
                throw Error("classify_zone: crossing envelope unavailable at "
                            "this q");
            if (std::abs(alpha - env) <= boundary_tol)
                throw OnBoundary("classify_zone: (q, alpha) lies on the "
                                 "crossing-set envelope");
            zone = alpha < env ? Zone::magenta : Zone::green;
        }
    } else {
        const double env = envelope().at(q);
        if (std::isnan(env)) {
            zone = Zone::gray;  // no imaginary-axis crossing reaches this q
        } else {
            if (std::abs(alpha - env) <= boundary_tol)
                throw OnBoundary("classify_zone: (q, alpha) lies on the "
                                 "crossing-set envelope");
            zone = alpha < env ? Zone::blue : Zone::gray;
        }
    }

    // Trace n_p over lambda: geometric sweep near zero, then linear, extended
    // until the count returns to zero.
    std::vector<double> grid;
    for (double lam = 0.004; lam < 0.6; lam *= 1.3) grid.push_back(lam);
    for (double lam = 0.6; lam <= 6.0 + 1e-9; lam += 0.1) grid.push_back(lam);
    if (auto lc = lambda_crit(q); lc && *lc > 0.0) {
        grid.push_back(std::max(*lc * 0.5, *lc - 0.01));
        grid.push_back(*lc + 0.01);
        std::sort(grid.begin(), grid.end());
    }

    auto np_at = [&](double lam) {
        return count_unstable_poles(XferParams{q, alpha, lam});
    };

    std::vector<std::pair<double, int>> trace;
    trace.reserve(grid.size() + 32);
    for (double lam : grid) trace.emplace_back(lam, np_at(lam));
    while (trace.back().second != 0) {
        const double lam = trace.back().first * 2.0;
        if (lam > 24.0)
            throw Error("classify_zone: n_p failed to return to zero by "
                        "lambda = 24");
        trace.emplace_back(lam, np_at(lam));
    }

    ZonePattern out;
    out.zone = zone;
    out.pattern.push_back(trace.front().second);
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        if (trace[i].second == trace[i + 1].second) continue;
        double lo = trace[i].first, hi = trace[i + 1].first;
        const int n_lo = trace[i].second;
        while (hi - lo > 2e-5) {
            const double mid = 0.5 * (lo + hi);
            if (np_at(mid) == n_lo)
                lo = mid;
            else
                hi = mid;
        }
        double threshold = 0.5 * (lo + hi);
        // The real-root transition happens exactly at lambda_crit; snap to it.
        if (auto lc = lambda_crit(q); lc && std::abs(threshold - *lc) < 1e-3)
            threshold = *lc;
        out.thresholds.push_back(threshold);
        out.pattern.push_back(trace[i + 1].second);
    }

    if (out.pattern != expected_pattern(zone)) {
        std::ostringstream os;
        os << "classify_zone: traced n_p pattern (";
        for (std::size_t i = 0; i < out.pattern.size(); ++i)
            os << (i ? "," : "") << out.pattern[i];
        os << ") does not match the " << to_string(zone) << " zone";
        throw Error(os.str());
    }
    return out;
}

}  // namespace wavectl
