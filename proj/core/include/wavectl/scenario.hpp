#pragma once

// =============================================================================
// wavectl - scenario: physical drillstring parameters -> dimensionless model
// =============================================================================
// Maps the physical constants of a drillstring rig (shaft, bit, mud, rock-bit
// friction, rotary-table servo) to the dimensionless wave-equation model with
// anti-damped nonlinear boundary: parameters (q, alpha, lambda), the boundary
// nonlinearity psi, its sector data, the steady state, and the control-law
// back-map from dimensionless u to a physical rotary speed command.
// =============================================================================

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wavectl/errors.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Physical parameters of one drilling scenario (SI units).
struct ScenarioParams {
    std::string name;       ///< identifier, e.g. "blue"
    double G_shear = 0;     ///< shear modulus of the shaft [Pa]
    double J_geom = 0;      ///< polar moment of area [m^4]
    double I_string = 0;    ///< inertia density of the string [kg m]
    double I_bit = 0;       ///< bottom-hole assembly inertia [kg m^2]
    double L = 0;           ///< string length [m]
    double Omega = 0;       ///< nominal rotary speed [rad/s]
    double c_a = 0;         ///< rotary-table servo gain [kg m^2/s]
    double beta = 0;        ///< distributed mud damping [N s]
    double W_ob = 0;        ///< weight on bit [N]
    double R_b = 0;         ///< bit radius [m]
    double mu_sb = 0;       ///< static friction coefficient
    double mu_cb = 0;       ///< Coulomb friction coefficient
    double gamma_b = 0;     ///< velocity-weakening rate (dimensionless)
    double nu_f = 0;        ///< velocity-weakening reference speed [rad/s]
    double c_b = 0;         ///< viscous bit damping [N m s]

    /// Second published mud-damping variant, where one exists.
    std::optional<double> beta_alt;

    /// Throws wavectl::Error unless all invariants hold
    /// (positivity, mu_sb > mu_cb, gamma_b in (0,1)).
    void validate() const;
};

/// Dimensionless model parameters derived from a ScenarioParams.
struct DimParams {
    double q = 0;           ///< boundary anti-damping slope
    double alpha = 0;       ///< boundary inertia ratio
    double lambda = 0;      ///< distributed damping
    double p = 0;           ///< curvature psi''(0) of the boundary nonlinearity
    double time_scale = 0;  ///< physical/dimensionless time ratio [1/s]
    double kink = 0;        ///< offset velocity at which psi has its sign kink
};

/// Sector data for the boundary nonlinearity psi.
struct SectorBounds {
    double q_l = 0;  ///< lower sector slope
    double q_u = 0;  ///< upper sector slope
    double c = 0;    ///< center slope (q_l + q_u)/2
    double r = 0;    ///< radius (q_u - q_l)/2

    /// Magnitude threshold beyond which the sector holds (large-magnitude
    /// variant only; absent in global mode).
    std::optional<double> M_mag;
    /// Bound on |psi(w)|/|w| inside |w| <= M_mag (large-magnitude variant).
    std::optional<double> L_mag;

    /// Builds bounds with c, r derived from the slopes.
    static SectorBounds from_slopes(double q_l, double q_u);

    /// Throws wavectl::Error unless q_l <= q_u, r >= 0 and the stored c, r
    /// agree with the recomputed values to 1e-12.
    void validate() const;
};

/// Verification mode for fit_sector.
enum class SectorMode {
    global,           ///< sector bound must hold for every offset velocity
    large_magnitude,  ///< sector bound required only outside |w| > M
};

/// Steady state of the rig under constant control torque.
struct SteadyState {
    double Omega0 = 0;  ///< rotary-table speed [rad/s]
    /// Twist profile coefficients: theta0(xi) = a0 + a1*xi + a2*xi^2
    /// (on top of the rigid rotation Omega*t).
    std::array<double, 3> theta0_coeffs{};
};

/// Closed-form asymptote data of psi: psi(w) ~ -q_s*w + a_plus as w -> +inf
/// and psi(w) ~ -q_s*w + a_minus as w -> -inf.
struct SectorAsymptotes {
    double q_s = 0;
    double a_plus = 0;
    double a_minus = 0;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Rock-bit + viscous friction torque phi(v) at bit speed v [rad/s].
/// phi(v) = c_b*v + W_ob*R_b*(mu_cb + (mu_sb-mu_cb)*exp(-(gamma_b/nu_f)|v|))*sign(v).
double friction_torque(const ScenarioParams& sp, double v);

/// Derivative phi'(v) for v != 0 (the same even expression on both branches).
double friction_torque_deriv(const ScenarioParams& sp, double v);

/// Dimensionless parameters (q, alpha, lambda, p, time_scale, kink).
DimParams derive_dimensionless(const ScenarioParams& sp);

/// Steady rotary speed Omega0 and steady twist profile.
SteadyState steady_state(const ScenarioParams& sp);

/// Boundary nonlinearity psi at dimensionless offset velocity w.
///
/// psi(w) = (L/GJ) * (phi(Omega) - phi(Omega + time_scale*w)) - q*w.
/// The sign discontinuity of phi at zero physical speed is regularized by a
/// linear segment through the origin on |v| < band_frac*Omega, so psi is
/// continuous (and usable by implicit integrators) while psi(0) = 0,
/// psi'(0) = 0 and psi''(0) = p are preserved.
double psi(const ScenarioParams& sp, double w, double band_frac = 1e-3);

/// Derivative psi'(w) of the regularized nonlinearity.
double psi_deriv(const ScenarioParams& sp, double w, double band_frac = 1e-3);

/// Closed-form asymptote constants of psi.
SectorAsymptotes sector_asymptotes(const ScenarioParams& sp);

/// Verifies the sector bound q_l*w <= psi(w) <= q_u*w.
///
/// global mode: dense adaptive sampling plus asymptote tail analysis; returns
/// the accepted SectorBounds or throws SectorViolation at the worst offender.
/// large_magnitude mode: finds the smallest sampled M such that the outer
/// product condition (psi(w)-q_l*w)*(psi(w)-q_u*w) <= 0 holds for |w| > M
/// (padded 10%), and L = max over |w| <= M of |psi(w)|/|w|.
SectorBounds fit_sector(const ScenarioParams& sp, double q_l, double q_u,
                        SectorMode mode);

/// Physical rotary-speed command realizing dimensionless control u given the
/// measured top-end velocity offset y2:
/// Omega_cmd = Omega0 + (u + (c_a/sqrt(GJI) - 1)*y2) * GJ/(c_a*L).
double control_backmap(const ScenarioParams& sp, double u, double y2);

}  // namespace wavectl
