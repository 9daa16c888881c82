// =============================================================================
// wavectl - certify: closed-loop stability and performance certificates
// =============================================================================
//
// A certificate couples a computed quantity with the threshold it must clear
// and the numerical slack of the method that produced it, so "pass" always
// means "passes with margin at least the method tolerance".
//
// The chain for a sector-bounded nonlinearity: certify the nominal and the
// slope-shifted loops via the argument principle, then bound the shifted
// disturbance-to-performance channel in H-infinity below the reciprocal
// sector radius.  A companion small-gain bound on the peak output gain covers
// the large-magnitude regime, and an H2 bound serves as the overshoot
// surrogate used by synthesis.

#pragma once

#include <string>
#include <vector>

#include "wavectl/norms.hpp"
#include "wavectl/scenario.hpp"
#include "wavectl/spectra.hpp"
#include "wavectl/ssmodel.hpp"
#include "wavectl/xfer.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class CertificateKind {
    nyquist_closed_loop,  ///< winding of 1 + K G equals the unstable count
    sector_hinf,          ///< ||T~_ze||_inf below 1/r
    large_mag_pk,         ///< peak output gain below 1/r
    weight_bound,         ///< ||W_u T_uw||_inf below 1
    h2_surrogate          ///< H2 of T~_ze below rho
};

const char* to_string(CertificateKind k);

struct Certificate {
    CertificateKind kind;
    double computed = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double tolerance = 0.0;
    std::string context;

    /// Distance to failure: threshold - computed for bound certificates,
    /// 1 - |computed - threshold| for the integer winding match.
    double margin() const;
};

// ---------------------------------------------------------------------------
// Frequency-domain closure of the irrational plant
// ---------------------------------------------------------------------------

/// Controller frequency response split over its two inputs: K(s) = (K1, K2).
struct LoopGains {
    Complex K1, K2;
};

LoopGains controller_gains(const Controller& K, Complex s);

enum class LoopChannel {
    ze,  ///< disturbance (or matched nonlinearity output) to z = y1
    uw   ///< disturbance to control effort u
};

/// Closed-loop transfer value under u = -K y, computed from the boundary
/// transfer channels so no spatial discretization enters:
///   F    = 1 + K1 G1 + K2 G2
///   T_uw = -(K1 G1w + K2 G2w) / F
///   T_ze = G1w + G1 T_uw
/// Pass shifted parameters (q + c) to evaluate the sector-shifted channel.
Complex loop_tf(const XferParams& p, const Controller& K, Complex s,
                LoopChannel ch);

/// Control-effort weight 1e4 jw/(jw + 2e5) evaluated on the axis.
Complex weight_Wu_freq(double omega);

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Argument-principle closed-loop stability check: the counterclockwise
/// winding of F = 1 + K G along the exclusion contour must equal the number
/// of unstable plant poles.  Throws UnstableController if K itself is
/// unstable and ImageNearOrigin if |F| approaches zero on the contour.
Certificate nyquist_certify(const XferParams& plant, const Controller& K);

struct CertifyOptions {
    int N = 200;        ///< discretization for the state-space certificates
    double rho = 1.3;   ///< H2 surrogate bound
};

/// H-infinity sector certificate on the shifted channel; preconditioned on
/// nyquist_certify passing for both the nominal and shifted loops (a failed
/// precondition yields a failed certificate, not an exception).
Certificate sector_certificate(const XferParams& nominal, const Controller& K,
                               const SectorBounds& sb);

/// Control-effort bound ||W_u T_uw||_inf < 1 on the nominal loop.
Certificate weight_certificate(const XferParams& nominal,
                               const Controller& K);

/// Large-magnitude small-gain bound: peak output gain of the shifted
/// discretized closure below 1/r.  Requires the large-magnitude constants
/// sb.M_mag and sb.L_mag, which enter the (qualitative) boundedness radius.
Certificate large_mag_certificate(const XferParams& nominal,
                                  const Controller& K, const SectorBounds& sb,
                                  const CertifyOptions& opts = {});

/// H2 surrogate bound on the shifted discretized closure.
Certificate h2_certificate(const XferParams& nominal, const Controller& K,
                           const SectorBounds& sb,
                           const CertifyOptions& opts = {});

/// The full chain in dependency order: nominal and shifted winding checks,
/// sector H-infinity, control-effort weight, then (when the sector carries
/// large-magnitude data) the peak-gain bound, and the H2 surrogate.
std::vector<Certificate> certificate_bundle(const XferParams& nominal,
                                            const Controller& K,
                                            const SectorBounds& sb,
                                            const CertifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Discretized closures (shared with synthesis and simulation checks)
// ---------------------------------------------------------------------------

/// Minimal realization of the w -> selected-output closure of the N-point
/// discretized plant (optionally slope-shifted by c) under u = -K y.
StateSpace closed_channel(const XferParams& nominal, const Controller& K,
                          double shift_c, int N, const std::string& output);

}  // namespace wavectl
