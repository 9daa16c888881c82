// =============================================================================
// wavectl - norms: H-infinity, H2, and peak-of-impulse system measures
// =============================================================================

#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "wavectl/errors.hpp"

#include "wavectl/ssmodel.hpp"

namespace wavectl {

enum class NormMethod { grid_refine, gramian, impulse_trapezoid };

const char* to_string(NormMethod m);

/// A computed norm with the honest numerical slack of the method that
/// produced it.  argmax is the frequency (H-infinity) or time (peak gain)
/// where the extremum was attained; NaN when the notion does not apply.
struct NormResult {
    double value = 0.0;
    double argmax = 0.0;
    NormMethod method = NormMethod::grid_refine;
    double tolerance = 0.0;
};

/// Largest real part over the spectrum of A.
double spectral_abscissa(const Eigen::MatrixXd& A);

/// H-infinity norm of a stable realization: peak singular value of the
/// frequency response over a 400-point log grid on [1e-4, 1e5], with the top
/// local maxima polished by golden-section search to 1e-6 relative, the band
/// above the grid scanned in octaves to 1e7, and the omega -> infinity
/// feedthrough limit included.  Throws UnstableSystem when the spectral
/// abscissa is not negative.
NormResult hinf(const StateSpace& ss,
                std::optional<double> abscissa_hint = {});

/// Same grid-and-refine peak search for a scalar frequency response given as
/// a callable omega -> g(j omega); used for the irrational closed-loop
/// channels.  When octave_extend is set, the band above the grid is scanned
/// in octaves up to 1e7 so no high-frequency peak is missed.
NormResult hinf_scalar_scan(const std::function<std::complex<double>(double)>& g,
                            double omega_lo = 1e-4, double omega_hi = 1e5,
                            int grid_points = 400, bool octave_extend = true);

/// H2 norm via the controllability Gramian, solved by complex-Schur
/// back-substitution.  Throws UnstableSystem and, when D != 0,
/// NotStrictlyProper.
NormResult h2(const StateSpace& ss, std::optional<double> abscissa_hint = {});

struct PeakGainOptions {
    double dt = 1e-3;
    double horizon_cap = 300.0;      ///< end of the fine-step march
    double tail_rel_target = 1e-4;   ///< stop early once tail bound is this small
    /// After horizon_cap, systems whose tail bound is still above target are
    /// marched further with this coarser step (the transients are gone; only
    /// slow smooth decay remains), up to long_horizon_cap.
    double coarse_dt = 0.2;
    double long_horizon_cap = 40000.0;
};

/// L1 norm of the impulse response (peak output gain for bounded inputs) of
/// a stable SISO realization: trapezoid quadrature of |C e^{At} B| marched
/// with a cached matrix exponential, plus |D|.  Slowly decaying systems get
/// a second coarse-step phase so the exponential tail bound can actually
/// shrink; its extra quadrature error, estimated from the sampled second
/// derivative, is folded into the reported tolerance together with the
/// remaining tail.
NormResult peak_gain(const StateSpace& ss, const PeakGainOptions& opts = {});

}  // namespace wavectl
