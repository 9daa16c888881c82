#pragma once

// =============================================================================
// wavectl - xfer: irrational transfer-function evaluation
// =============================================================================
// The dimensionless wave equation with anti-damped boundary has the irrational
// transfer matrix
//
//   G1(s) = 1/d(s)          (u -> bit velocity y1)
//   G2(s) = n(s)/d(s)       (u -> top velocity y2)
//   G1w(s) = m(s)/d(s)      (boundary disturbance w -> y1)
//   G2w(s) = 1/d(s)         (w -> y2; equal to G1 by the identity
//                            n*m - s*snc*d = 1)
// with
//   sigma^2 = s^2 + 2*lambda*s,   snc = sinh(sigma)/sigma,  csh = cosh(sigma)
//   d(s) = (s + 2*lambda + alpha*s^2 - q*s)*snc + (alpha*s - q + 1)*csh
//   n(s) = csh + (alpha*s^2 - q*s)*snc
//   m(s) = csh + s*snc.
//
// All building blocks are even in sigma, so no branch cut appears; evaluation
// switches between the even power series (small |sigma^2|) and a principal
// square root fed into exponentials scaled by e^{-sigma} (large |sigma^2|,
// overflow-guarded).  A log-magnitude/argument evaluator of d supports contour
// work at radii where |d| overflows double precision.
// =============================================================================

#include <complex>

#include "wavectl/errors.hpp"

namespace wavectl {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Dimensionless parameters as they enter the transfer function.
struct XferParams {
    double q = 0;
    double alpha = 0;  ///< >= 0
    double lambda = 0; ///< >= 0
};

/// Evaluation path marker.
enum class BranchPath { series, direct };

/// Transfer-function values at one point s.
struct XferValue {
    Complex G1;        ///< u -> y1
    Complex G2;        ///< u -> y2
    Complex d;         ///< denominator (may overflow to inf deep in the plane)
    BranchPath branch; ///< which evaluation path was taken
};

/// All four channel numerators/denominator at one point (axis-safe scale).
struct ChannelValues {
    Complex d, n, m;   ///< denominator and the two numerators
    Complex G1, G2, G1w, G2w;
    BranchPath branch;
};

/// Log-magnitude and argument of d(s); immune to overflow of |d| itself.
/// The argument is continuous in sigma-space but NOT wrapped; consumers must
/// difference and wrap.
struct LogValue {
    double log_abs;
    double arg;
    BranchPath branch;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Evaluates d, n and the control channels G1 = 1/d, G2 = n/d at s.
/// Throws PoleHit when |d(s)| underflows (s is numerically a pole).
XferValue eval_G(const XferParams& p, Complex s);

/// Evaluates d, n, m and all four channels at s.  Intended for imaginary-axis
/// work (|Re sigma| stays moderate there); throws PoleHit at poles.
ChannelValues eval_channels(const XferParams& p, Complex s);

/// log|d| and arg d at s, stable at arbitrary radius.
LogValue eval_d_log(const XferParams& p, Complex s);

/// Pole-locus map Phi(lambda, s) = 2*lambda / (s + sigma*coth(sigma)),
/// evaluated as 2*lambda*snc/m to avoid spurious poles of coth.
/// A point s is a pole of G iff q - 1 - alpha*s = Phi(lambda, s).
/// Throws NumericalPole when |m(s)| underflows.
Complex eval_Phi(double lambda, Complex s);

/// Radius R beyond which d has no zeros and the control channels have no
/// right-half-plane transmission zeros; assembled from constructive bounds
/// and then validated by a winding-stabilization doubling loop.
/// Throws NotWellPosed at (q, alpha, lambda) = (1, 0, 0).
double pole_exclusion_radius(const XferParams& p);

/// Analytic starting value of the exclusion radius (no winding validation).
double pole_exclusion_radius_analytic(const XferParams& p);

}  // namespace wavectl
