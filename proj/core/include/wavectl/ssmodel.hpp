// =============================================================================
// wavectl - ssmodel: finite-dimensional models, reduction, interconnection
// =============================================================================
//
// Finite-difference plant on N+1 grid points with the two dynamic boundary
// rows folded in, states (x_0..x_N, v_0..v_N), order 2N+2.  The raw model
// always carries one exactly-neutral rigid mode (uniform translation) that is
// both unreachable and unobservable; every norm or eigenvalue computation
// must run on the minimal or deflated realization.
//
// Interconnection convention: controllers act in negative feedback, u = -K y.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wavectl/errors.hpp"

#include <Eigen/Dense>

namespace wavectl {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Plain LTI realization dx = A x + B u, y = C x + D u with channel labels.
struct StateSpace {
    Eigen::MatrixXd A, B, C, D;
    std::vector<std::string> input_labels;
    std::vector<std::string> output_labels;

    int order() const { return static_cast<int>(A.rows()); }
    int num_inputs() const { return static_cast<int>(B.cols()); }
    int num_outputs() const { return static_cast<int>(C.rows()); }

    /// Shape and label consistency; throws Error on violation.
    void validate() const;

    /// Frequency response C (jw I - A)^{-1} B + D at a single frequency.
    Eigen::MatrixXcd response(double omega) const;
};

/// Two-input (y1, y2) one-output (u) dynamic output feedback law.
struct Controller {
    std::string name;
    StateSpace ss;  ///< inputs labeled y1, y2; output labeled u

    int order() const { return ss.order(); }
};

/// The boundary-controlled plant exposed over its physical channels:
/// inputs (w, u), outputs (z, y1, y2), with z = y1.  shift_c records the
/// boundary-slope offset applied to q when the realization was built.
struct PlantChannels {
    StateSpace ss;
    double shift_c = 0.0;
};

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

struct XferParams;  // from xfer.hpp; only q, alpha, lambda are used here

/// Second-order finite-difference realization of the boundary-coupled wave
/// dynamics, order 2N+2, inputs (w, u), outputs (z, y1, y2).  shift_c adds a
/// constant to the q coefficient in the controlled-boundary row (and nothing
/// else), producing the shifted plant used by sector arguments.
/// Requires N >= 2.  Throws AlphaZeroUnsupported when alpha = 0 unless the
/// reduced first-order boundary row is requested.
PlantChannels discretize(const XferParams& p, int N, double shift_c = 0.0,
                         bool reduced_alpha0 = false);

/// Same dynamics with the rigid mode removed analytically: relative
/// displacement states (x_0 - x_N, .., x_{N-1} - x_N, v_0..v_N), order 2N+1.
/// Used by simulation and eigenvalue counting, where the exact neutral mode
/// would pollute spectra.
PlantChannels discretize_deflated(const XferParams& p, int N,
                                  double shift_c = 0.0);

// ---------------------------------------------------------------------------
// Reduction and interconnection
// ---------------------------------------------------------------------------

/// Minimal realization via an orthogonal reachability staircase followed by
/// the dual observability pass.  tol < 0 selects the default
/// 1e-12 * max(1, ||A||_F), sized to strip exact structural modes (the rigid
/// translation of the discretized string) without touching weak couplings.
/// The reduced model's frequency response is verified against the original
/// on a log grid (max relative deviation 1e-6) unless verify = false.
StateSpace minreal(const StateSpace& ss, double tol = -1.0,
                   bool verify = true);

/// Negative-feedback closure u = -K y of a (w, u) -> (z, y1, y2) plant with
/// a (y1, y2) -> u controller.  The result maps w to (z, y1, y2, u).
/// Throws IllPosedLoop if the algebraic loop I + D_K D_yu is singular.
StateSpace close_loop(const StateSpace& plant, const Controller& K);

/// Series composition y = g2(g1(u)); dimensions must chain.
StateSpace series(const StateSpace& g2, const StateSpace& g1);

/// Select output/input channels by label, in the order given.
StateSpace channel_select(const StateSpace& ss,
                          const std::vector<std::string>& outputs,
                          const std::vector<std::string>& inputs);

/// First-order high-pass control-effort weight 1e4 * s / (s + 2e5).
StateSpace weight_Wu();

// ---------------------------------------------------------------------------
// Controller serialization
// ---------------------------------------------------------------------------

/// Parse a controller from JSON {"name", "A", "B", "C", "D"} with row-major
/// nested arrays.  The realization must be minimal (checked by staircase);
/// inputs are taken as (y1, y2) and the single output as u.
Controller controller_from_json(const std::string& text);
Controller controller_from_file(const std::string& path);
std::string controller_to_json(const Controller& K);

}  // namespace wavectl
