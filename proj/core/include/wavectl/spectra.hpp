// =============================================================================
// wavectl - spectra: argument-principle pole counts and the (q, alpha) zones
// =============================================================================
//
// The characteristic roots of d live in a vertical strip; on a half-disc
// contour of sufficient radius the argument principle counts the open
// right-half-plane roots exactly.  The winding engine samples the contour,
// caps every wrapped phase increment, and refines adaptively so no phase
// excursion can alias away.
//
// The (q, alpha) plane splits into zones by how the unstable-root count n_p
// evolves as lambda grows from 0+:
//   gray    [0]          never unstable
//   blue    [0, 2, 0]    a conjugate pair visits the right half-plane
//   red     [1, 2, 0]    real root joined by a pair, all eventually leave
//   magenta [1, 0, 2, 0] real root leaves first, pair visits later
//   green   [1, 0]       real root leaves, nothing returns
// Zone boundaries: for q > 1 the parabola alpha = (q-1) + (q-1)^2/3 (real-root
// crossing direction flips) and the upper envelope of the imaginary-axis
// crossing set; for q <= 1 only the envelope matters.

#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "wavectl/errors.hpp"

#include "wavectl/xfer.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Half-disc contour in the closed right half-plane: the imaginary-axis
/// segment [-jR, +jR] (tanh-graded so samples crowd the origin) followed by
/// the clockwise arc R e^{j theta}, theta from pi/2 down to -pi/2.
struct ContourSpec {
    double R = 0.0;            ///< radius; must be positive
    int base_samples = 4096;   ///< initial sample floor (raised to ~20R on use)
    int max_refinements = 60;  ///< adaptive refinement rounds
    double phase_cap = 0.7853981633974483;  ///< max wrapped step, pi/4
};

/// Outcome of a winding-number computation along the closed contour.
struct WindingResult {
    int winding = 0;             ///< counterclockwise-positive winding number
    std::size_t samples_used = 0;
    double min_modulus = 0.0;    ///< smallest |f| seen on the contour
    bool refined = false;        ///< true if any refinement round was needed
};

enum class Zone { gray, blue, red, magenta, green };

/// Zone verdict together with the lambda-interval structure of n_p.
/// pattern holds the n_p value on each interval; thresholds the interior
/// breakpoints, so pattern.size() == thresholds.size() + 1.
struct ZonePattern {
    Zone zone;
    std::vector<int> pattern;
    std::vector<double> thresholds;
};

/// One imaginary-axis crossing: at (q, alpha) the characteristic function
/// has a root at s = j*omega for the lambda used in the sweep.
struct CrossingPoint {
    double q;
    double alpha;
    double omega;
};

enum class CrossingDirection { left_to_right, right_to_left, degenerate };

const char* to_string(Zone z);

// ---------------------------------------------------------------------------
// Winding engine
// ---------------------------------------------------------------------------

namespace detail {

/// Map t in [0, 1] to the contour point: t in [0, 1/2] covers the graded
/// axis segment, t in [1/2, 1] the clockwise arc.
Complex contour_point(double t, double R);

/// (argument, log-magnitude) of the function whose winding is wanted.
/// Arguments need not be wrapped consistently between calls; the engine
/// wraps increments.
using ArgLog = std::pair<double, double>;

/// Winding number of f along the closed half-disc contour.  Increments are
/// capped at spec.phase_cap; offending segments are bisected until they
/// comply.  If |f| falls below zero_tol on the contour, or refinement fails
/// to resolve a segment, ZeroCrossingOnContour is thrown.
WindingResult winding_closed_contour(
    const std::function<ArgLog(Complex)>& f, const ContourSpec& spec,
    double zero_tol = 1e-8);

/// Exclusion radius validated by winding-stable doubling, together with the
/// winding of d at that radius (so callers need not recompute it).  Radii
/// that land a zero on the contour are nudged by about one percent.
std::pair<double, int> stabilized_radius_and_winding(const XferParams& p);

}  // namespace detail

/// Winding number of the characteristic function d along the contour,
/// evaluated in log form so arc magnitudes ~e^R cannot overflow.
WindingResult winding_of_d(const XferParams& p, const ContourSpec& spec);

/// Number of open right-half-plane roots of d inside the contour: the
/// negated winding.  Throws RadiusTooSmall if the count is negative or
/// changes when the radius doubles.
int count_unstable_poles(const XferParams& p, const ContourSpec& spec);

/// Convenience: exclusion radius then count.
int count_unstable_poles(const XferParams& p);

// ---------------------------------------------------------------------------
// Zone machinery
// ---------------------------------------------------------------------------

/// Imaginary-axis crossing set for one lambda: each omega in the grid maps to
/// the unique (q, alpha) making s = j*omega a characteristic root,
///   q = 1 + Re Phi(lambda, j*omega),  alpha = -Im Phi(lambda, j*omega)/omega.
/// Pairs outside the open positive quadrant are dropped.
std::vector<CrossingPoint> zero_crossing_pairs(
    double lambda, const std::vector<double>& omega_grid);

/// Damping value at which the real root sits at the origin: (q - 1)/2 for
/// q > 1, zero at q = 1, absent for q < 1.
std::optional<double> lambda_crit(double q);

/// Direction the real root moves through the origin as lambda passes
/// lambda_crit: sign of s'(lambda_crit) = 2/D with
/// D = (q - 1) + (q - 1)^2/3 - alpha.
CrossingDirection crossing_direction(double q, double alpha);

/// Classify (q, alpha) into a zone and compute the n_p pattern and its
/// lambda breakpoints by scanning and bisecting argument-principle counts.
/// Throws OnBoundary when (q, alpha) is within boundary_tol of a zone
/// boundary curve.
ZonePattern classify_zone(double q, double alpha, double boundary_tol = 1e-3);

}  // namespace wavectl
