#pragma once

// =============================================================================
// wavectl - error taxonomy
// =============================================================================
// Every recoverable failure mode of the library is a distinct exception type so
// callers (CLI, tests, optimizers) can branch on *what* went wrong rather than
// parsing message strings.  All types derive from wavectl::Error.
// =============================================================================

#include <stdexcept>
#include <string>

namespace wavectl {

/// Root of the wavectl exception hierarchy.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Transfer-function evaluation
// ---------------------------------------------------------------------------

/// |d(s)| underflowed: s is numerically a pole of the transfer function.
struct PoleHit : Error {
    using Error::Error;
};

/// Inner denominator of the pole-locus map underflowed.
struct NumericalPole : Error {
    using Error::Error;
};

/// Requested at the ill-posed parameter point (q, alpha, lambda) = (1, 0, 0).
struct NotWellPosed : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Contour / winding analysis
// ---------------------------------------------------------------------------

/// The sampled image passes too close to the origin: a zero sits (numerically)
/// on the contour.  Callers should perturb the radius and retry.
struct ZeroCrossingOnContour : Error {
    using Error::Error;
};

/// Winding number changed when the contour radius was doubled: the requested
/// radius does not yet enclose all unstable poles.
struct RadiusTooSmall : Error {
    using Error::Error;
};

/// (q, alpha) lies within tolerance of a zone boundary curve.
struct OnBoundary : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// State-space modelling
// ---------------------------------------------------------------------------

/// alpha = 0 requires the reduced boundary-row variant, which was not requested.
struct AlphaZeroUnsupported : Error {
    using Error::Error;
};

/// Feedback interconnection has a singular direct-feedthrough loop.
struct IllPosedLoop : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Stability precondition of a norm computation failed.
struct UnstableSystem : Error {
    using Error::Error;
};

/// H2 norm requested for a channel with nonzero direct feedthrough.
struct NotStrictlyProper : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Certification
// ---------------------------------------------------------------------------

/// The closed-loop winding test is stated for stable controllers only.
struct UnstableController : Error {
    using Error::Error;
};

/// The Nyquist image of 1 + K*G approaches the origin within tolerance.
struct ImageNearOrigin : Error {
    using Error::Error;
};

/// The boundary nonlinearity leaves the requested sector.  Carries the
/// violating offset velocity and the nonlinearity value there.
struct SectorViolation : Error {
    double omega;
    double psi_value;
    SectorViolation(const std::string& msg, double omega_, double psi_value_)
        : Error(msg), omega(omega_), psi_value(psi_value_) {}
};

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// State norm exceeded the blow-up bound.  Carries the simulation time.
struct BlowUp : Error {
    double t;
    BlowUp(const std::string& msg, double t_) : Error(msg), t(t_) {}
};

/// The implicit stage equation failed to converge at the current step size.
struct StepTooLarge : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

/// The stabilization search exhausted its budget.  Carries the best spectral
/// abscissa reached.
struct NoStabilizerFound : Error {
    double best_abscissa;
    NoStabilizerFound(const std::string& msg, double best)
        : Error(msg), best_abscissa(best) {}
};

}  // namespace wavectl
