// =============================================================================
// wavectl - scenario implementation
// =============================================================================

#include "wavectl/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

/// sqrt(G*J*I): the characteristic torsional impedance of the string.
double impedance(const ScenarioParams& sp) {
    return std::sqrt(sp.G_shear * sp.J_geom * sp.I_string);
}

/// (1/L)*sqrt(GJ/I): dimensionless-to-physical time ratio.
double time_ratio(const ScenarioParams& sp) {
    return std::sqrt(sp.G_shear * sp.J_geom / sp.I_string) / sp.L;
}

/// Regularized friction torque: phi with the sign jump at v = 0 replaced by a
/// linear segment through the origin on |v| < delta.
double friction_torque_reg(const ScenarioParams& sp, double v, double delta) {
    if (std::abs(v) >= delta) return friction_torque(sp, v);
    return (v / delta) * friction_torque(sp, delta);
}

double friction_torque_reg_deriv(const ScenarioParams& sp, double v,
                                 double delta) {
    if (std::abs(v) >= delta) return friction_torque_deriv(sp, v);
    return friction_torque(sp, delta) / delta;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScenarioParams
// ---------------------------------------------------------------------------

void ScenarioParams::validate() const {
    auto require = [&](bool ok, const char* what) {
        if (!ok) {
            std::ostringstream os;
            os << "scenario '" << name << "': invalid parameters (" << what
               << ")";
            throw Error(os.str());
        }
    };
    const double fields[] = {G_shear, J_geom, I_string, I_bit, L,   Omega,
                             c_a,     beta,   W_ob,     R_b,   mu_sb, mu_cb,
                             gamma_b, nu_f,   c_b};
    for (double f : fields) require(f > 0.0, "all fields strictly positive");
    require(mu_sb > mu_cb, "mu_sb > mu_cb");
    require(gamma_b > 0.0 && gamma_b < 1.0, "gamma_b in (0,1)");
    if (beta_alt) require(*beta_alt > 0.0, "beta_alt strictly positive");
}

// ---------------------------------------------------------------------------
// SectorBounds
// ---------------------------------------------------------------------------

SectorBounds SectorBounds::from_slopes(double q_l, double q_u) {
    SectorBounds sb;
    sb.q_l = q_l;
    sb.q_u = q_u;
    sb.c = 0.5 * (q_l + q_u);
    sb.r = 0.5 * (q_u - q_l);
    return sb;
}

void SectorBounds::validate() const {
    if (!(q_l <= q_u)) throw Error("sector bounds: q_l <= q_u required");
    if (!(r >= 0.0)) throw Error("sector bounds: r >= 0 required");
    if (std::abs(c - 0.5 * (q_l + q_u)) > 1e-12 ||
        std::abs(r - 0.5 * (q_u - q_l)) > 1e-12)
        throw Error("sector bounds: stored c, r disagree with q_l, q_u");
}

// ---------------------------------------------------------------------------
// Friction torque
// ---------------------------------------------------------------------------

double friction_torque(const ScenarioParams& sp, double v) {
    const double stribeck =
        sp.mu_cb + (sp.mu_sb - sp.mu_cb) *
                       std::exp(-(sp.gamma_b / sp.nu_f) * std::abs(v));
    return sp.c_b * v + sp.W_ob * sp.R_b * stribeck * sign(v);
}

double friction_torque_deriv(const ScenarioParams& sp, double v) {
    // d/dv of sign(v)*f(|v|) is f'(|v|) on both branches (v != 0).
    return sp.c_b - sp.W_ob * sp.R_b * (sp.mu_sb - sp.mu_cb) *
                        (sp.gamma_b / sp.nu_f) *
                        std::exp(-(sp.gamma_b / sp.nu_f) * std::abs(v));
}

// ---------------------------------------------------------------------------
// Dimensionless model
// ---------------------------------------------------------------------------

DimParams derive_dimensionless(const ScenarioParams& sp) {
    sp.validate();
    DimParams dp;
    const double z = impedance(sp);
    dp.q = -friction_torque_deriv(sp, sp.Omega) / z;
    dp.alpha = sp.I_bit / (sp.L * sp.I_string);
    dp.lambda = sp.beta * sp.L / (2.0 * z);
    dp.time_scale = time_ratio(sp);
    dp.kink = -sp.Omega / dp.time_scale;
    // p = psi''(0) = -phi''(Omega)/(L*I); second derivative of the Stribeck
    // exponential at v = Omega > 0.
    const double g = sp.gamma_b / sp.nu_f;
    const double phi_dd = sp.W_ob * sp.R_b * (sp.mu_sb - sp.mu_cb) * g * g *
                          std::exp(-g * sp.Omega);
    dp.p = -phi_dd / (sp.L * sp.I_string);
    return dp;
}

SteadyState steady_state(const ScenarioParams& sp) {
    sp.validate();
    SteadyState st;
    const double phi0 = friction_torque(sp, sp.Omega);
    st.Omega0 = sp.Omega + (phi0 + sp.beta * sp.Omega * sp.L) / sp.c_a;
    const double GJ = sp.G_shear * sp.J_geom;
    st.theta0_coeffs = {0.0, -(phi0 + sp.beta * sp.Omega * sp.L) / GJ,
                        sp.beta * sp.Omega / (2.0 * GJ)};
    return st;
}

// ---------------------------------------------------------------------------
// Boundary nonlinearity
// ---------------------------------------------------------------------------

double psi(const ScenarioParams& sp, double w, double band_frac) {
    const double ts = time_ratio(sp);
    const double GJ = sp.G_shear * sp.J_geom;
    const double delta = band_frac * sp.Omega;
    const double q = -friction_torque_deriv(sp, sp.Omega) / impedance(sp);
    return (sp.L / GJ) * (friction_torque(sp, sp.Omega) -
                          friction_torque_reg(sp, sp.Omega + ts * w, delta)) -
           q * w;
}

double psi_deriv(const ScenarioParams& sp, double w, double band_frac) {
    const double ts = time_ratio(sp);
    const double GJ = sp.G_shear * sp.J_geom;
    const double delta = band_frac * sp.Omega;
    const double q = -friction_torque_deriv(sp, sp.Omega) / impedance(sp);
    return -(sp.L / GJ) * ts *
               friction_torque_reg_deriv(sp, sp.Omega + ts * w, delta) -
           q;
}

SectorAsymptotes sector_asymptotes(const ScenarioParams& sp) {
    SectorAsymptotes sa;
    const double z = impedance(sp);
    const double GJ = sp.G_shear * sp.J_geom;
    const double q = -friction_torque_deriv(sp, sp.Omega) / z;
    sa.q_s = sp.c_b / z + q;
    const double WR = sp.W_ob * sp.R_b;
    sa.a_plus = (sp.L / GJ) * WR * (sp.mu_sb - sp.mu_cb) *
                std::exp(-(sp.gamma_b / sp.nu_f) * sp.Omega);
    sa.a_minus = 2.0 * (sp.L / GJ) * WR * sp.mu_cb + sa.a_plus;
    return sa;
}

// ---------------------------------------------------------------------------
// Sector fitting
// ---------------------------------------------------------------------------

namespace {

/// Sample grid for sector verification: log-spaced tails on both sides plus a
/// dense linear band around the kink, where psi bends hardest.
std::vector<double> sector_grid(const DimParams& dp) {
    std::vector<double> ws;
    const double wmax = 1e3 * std::max(1.0, std::abs(dp.kink));
    const int n_log = 1200;
    for (int i = 0; i < n_log; ++i) {
        const double w =
            std::pow(10.0, -4.0 + (std::log10(wmax) + 4.0) * i / (n_log - 1));
        ws.push_back(w);
        ws.push_back(-w);
    }
    const double span = 4.0 * std::abs(dp.kink);
    const int n_lin = 4000;
    for (int i = 0; i <= n_lin; ++i)
        ws.push_back(dp.kink - span + 2.0 * span * i / n_lin);
    std::sort(ws.begin(), ws.end());
    return ws;
}

}  // namespace

SectorBounds fit_sector(const ScenarioParams& sp, double q_l, double q_u,
                        SectorMode mode) {
    if (!(q_l <= q_u)) throw Error("fit_sector: q_l <= q_u required");
    sp.validate();
    const DimParams dp = derive_dimensionless(sp);
    SectorBounds sb = SectorBounds::from_slopes(q_l, q_u);

    // Outer product condition: inside the sector iff
    // (psi(w) - q_l w)(psi(w) - q_u w) <= 0, i.e. psi lies between the lines.
    auto violates = [&](double w, double* psi_out) {
        const double pw = psi(sp, w);
        if (psi_out) *psi_out = pw;
        return (pw - q_l * w) * (pw - q_u * w) > 0.0;
    };

    const std::vector<double> grid = sector_grid(dp);

    if (mode == SectorMode::global) {
        // Tail analysis first: psi approaches -q_s*w + a_{+/-}; the sector
        // contains the tails iff the asymptote slope -q_s lies in [q_l, q_u]
        // (offsets only help on the correct side, checked by sampling below).
        const SectorAsymptotes sa = sector_asymptotes(sp);
        if (-sa.q_s < q_l || -sa.q_s > q_u) {
            const double w = 1e6;
            throw SectorViolation(
                "sector excludes the asymptote slope of psi", w, psi(sp, w));
        }
        double worst_w = 0.0, worst_psi = 0.0, worst_excess = 0.0;
        for (double w : grid) {
            double pw;
            if (violates(w, &pw)) {
                const double excess =
                    std::max(pw - std::max(q_l * w, q_u * w),
                             std::min(q_l * w, q_u * w) - pw);
                if (excess > worst_excess) {
                    worst_excess = excess;
                    worst_w = w;
                    worst_psi = pw;
                }
            }
        }
        if (worst_excess > 0.0)
            throw SectorViolation("psi leaves the requested sector", worst_w,
                                  worst_psi);
        return sb;
    }

    // large_magnitude mode: outermost sampled violation, padded 10%.
    double m_raw = 0.0;
    for (double w : grid)
        if (violates(w, nullptr)) m_raw = std::max(m_raw, std::abs(w));
    const double M = 1.1 * std::max(m_raw, 1e-6);
    double L = 0.0;
    for (double w : grid)
        if (std::abs(w) <= M && std::abs(w) > 1e-12)
            L = std::max(L, std::abs(psi(sp, w)) / std::abs(w));
    sb.M_mag = M;
    sb.L_mag = L;
    return sb;
}

// ---------------------------------------------------------------------------
// Control back-map
// ---------------------------------------------------------------------------

double control_backmap(const ScenarioParams& sp, double u, double y2) {
    const double GJ = sp.G_shear * sp.J_geom;
    const double Omega0 = steady_state(sp).Omega0;
    return Omega0 +
           (u + (sp.c_a / impedance(sp) - 1.0) * y2) * GJ / (sp.c_a * sp.L);
}

}  // namespace wavectl
