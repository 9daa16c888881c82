// =============================================================================
// wavectl - simulate: nonlinear boundary-coupled time marching
// =============================================================================
//
// The deflated finite-difference semidiscretization is marched with the
// implicit midpoint rule; the boundary friction nonlinearity enters through
// a single rank-one channel, so each implicit stage collapses to one scalar
// root problem solved against a cached LU factor.  The controller is
// switched in at a chosen time, before which its states are frozen and
// u = 0.

#pragma once

#include <limits>
#include <vector>

#include "wavectl/scenario.hpp"
#include "wavectl/ssmodel.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class DisturbanceShape { none, square, pulse, exp_decaying, oscillatory };

/// Matched additive disturbance on the friction boundary, active on
/// [t_start, t_start + duration): a constant level, a half-sine bump
/// sin(pi (t - t_start) / duration), an exponentially decaying burst
/// exp(-rate (t - t_start)), or a sinusoid sin(rate (t - t_start)) where
/// rate doubles as the angular frequency.
struct Disturbance {
    DisturbanceShape shape = DisturbanceShape::none;
    double magnitude = 0.0;
    double t_start = 0.0;
    double duration = 0.0;
    double rate = 0.0;

    double value(double t) const;
};

struct SimConfig {
    int N = 200;            ///< spatial points; simulate() rejects N < 50
    double dt = 2e-3;
    double t_final = 40.0;
    /// Controller engagement time; infinity leaves the loop open throughout.
    double controller_on_at = std::numeric_limits<double>::infinity();
    /// Initial condition: uniform boundary-frame velocity -offset * |kink|,
    /// zero relative displacement.
    double initial_offset = 0.0;
    Disturbance disturbance;
    int record_stride = 1;
    /// Drop the friction nonlinearity (disturbance kept): the linearized
    /// companion run used to expose small-signal agreement.
    bool linearize = false;

    /// The implicit midpoint stage reduces to one scalar root problem per
    /// step; these bound its safeguarded Newton/bisection iteration.
    double newton_tol = 1e-10;
    int newton_max_iter = 120;
    double blowup_norm = 1e9;

    /// Stick detection: |bit speed| below stick_eps_frac * Omega for at
    /// least stick_min_duration counts as a stick interval.
    double stick_eps_frac = 0.02;
    double stick_min_duration = 0.1;
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct StickInterval {
    double t_begin;
    double t_end;
};

struct TimeSeries {
    std::vector<double> t, y1, y2, u, theta_dot_bit, omega_cmd;
    std::vector<StickInterval> stick_intervals;
};

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

/// March the scenario's boundary-coupled dynamics.  K may be null for pure
/// open-loop runs; it must be present when controller_on_at is finite.
/// Throws BlowUp when the state norm exceeds blowup_norm and StepTooLarge
/// when Newton fails to converge.
TimeSeries simulate(const ScenarioParams& sp, const Controller* K,
                    const SimConfig& cfg);

/// Scan a recorded trajectory for stick intervals: maximal spans where
/// |theta_dot_bit| stays below eps_v for at least min_duration.  simulate()
/// applies the same scan at full step resolution with
/// eps_v = stick_eps_frac * Omega.
std::vector<StickInterval> detect_stick(const TimeSeries& ts, double eps_v,
                                        double min_duration = 0.1);

/// Paired nonlinear / linearized runs under one configuration.
struct LinearComparison {
    TimeSeries nonlinear;
    TimeSeries linear;
    double max_deviation = 0.0;  ///< max |y1_nl - y1_lin| over the run
    double amplitude = 0.0;      ///< max |y1_nl|, the comparison scale
};

/// Run the scenario twice -- friction nonlinearity active, then dropped --
/// and report the worst y1 deviation together with the response amplitude.
LinearComparison linear_vs_nonlinear(const ScenarioParams& sp,
                                     const Controller* K, SimConfig cfg);

}  // namespace wavectl
