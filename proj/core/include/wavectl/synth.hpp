// =============================================================================
// wavectl - synth: structured output-feedback synthesis by direct search
// =============================================================================
//
// Controllers are parameterized directly (dense low-order state space, PID
// forms, or a static gain) and tuned against cached minimal realizations of
// the N_design-point nominal and slope-shifted plants.  Programs trade the
// certified sector radius, the peak output gain, or the H2 surrogate against
// nominal performance, under a control-effort weight and strict-stability
// slack constraints; an exact-penalty pattern search keeps every accepted
// iterate's penalty monotone and is deterministic for a given seed.

#pragma once

#include <vector>

#include "wavectl/certify.hpp"
#include "wavectl/scenario.hpp"
#include "wavectl/ssmodel.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// Controller parameterization
// ---------------------------------------------------------------------------

enum class ControllerForm { static_gain, pid_single, pid_sum, state_space };

/// Shape of the searched controller; parameter_count fixes the decision
/// vector length (state_space: k^2 + 2k + k + 2 for A, B, C, D).
struct ControllerStructure {
    ControllerForm form = ControllerForm::state_space;
    int k = 5;  ///< order for the state_space form

    int parameter_count() const;
};

/// Materialize a decision vector as a controller (inputs y1, y2; output u).
Controller decode(const ControllerStructure& st, const Eigen::VectorXd& x,
                  const std::string& name = "synth");

/// Inverse of decode for the state_space form.
Eigen::VectorXd encode(const ControllerStructure& st, const Controller& K);

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

enum class ProgramKind {
    sector_program,  ///< min r ||T~_ze||_inf  s.t. effort weight
    overshoot_pk,    ///< min ||T_y1w||_inf    s.t. pk(T~_ze) <= 1/r, weight
    overshoot_h2     ///< min ||T_y1w||_inf    s.t. H2(T~_ze) <= rho, weight
};

struct SynthProblem {
    DimParams scenario;  ///< only q, alpha, lambda enter the design models
    ProgramKind program = ProgramKind::overshoot_h2;
    SectorBounds sector;  ///< provides the shift c and radius r
    double rho = 1.3;     ///< H2 bound for overshoot_h2
    int N_design = 50;
};

/// One objective evaluation: the program value (+infinity when either design
/// closure is unstable) plus slack variables that are nonnegative exactly
/// when all constraints hold.  Slacks 0..2 are the strict-stability margins
/// of the nominal closure, shifted closure, and controller itself.
struct ObjectiveEval {
    double value = 0.0;
    std::vector<double> slacks;
    double abscissa_nominal = 0.0;
    double abscissa_shifted = 0.0;

    /// Exact penalty: value + weight * sum of slack shortfalls below a small
    /// interior margin (2e-3), so accepted optima sit strictly feasible;
    /// when value is infinite, a large surrogate decreasing in the worst
    /// stability violation so search can descend toward feasibility.
    double penalty(double weight = 100.0) const;
};

/// Caches the reduced design plants so repeated evaluations stay cheap.
class SynthEngine {
public:
    explicit SynthEngine(const SynthProblem& prob);

    ObjectiveEval evaluate(const ControllerStructure& st,
                           const Eigen::VectorXd& x) const;

    const SynthProblem& problem() const { return prob_; }

private:
    SynthProblem prob_;
    StateSpace nominal_;  ///< minimal (w,u) -> (z,y1,y2) design plant
    StateSpace shifted_;  ///< same with the sector shift applied to q
};

/// Convenience single-shot evaluation (builds a fresh engine).
ObjectiveEval objective(const SynthProblem& prob,
                        const ControllerStructure& st,
                        const Eigen::VectorXd& x);

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

struct SynthOptions {
    int max_evals = 1200;
    unsigned seed = 1;
    double init_step = 0.25;
    double step_tol = 1e-5;
    double penalty_weight = 100.0;
    int stabilize_budget = 400;
    /// Extra evaluations granted, only when the main search ends with a
    /// violated constraint, to a restoration phase run under a 1000x
    /// stiffer penalty so feasibility dominates the final trade-off.
    int restore_evals = 400;
};

struct SynthResult {
    Controller K;
    Eigen::VectorXd x;
    ObjectiveEval final_eval;
    /// Accepted penalties, nonincreasing within each search phase (the
    /// restoration phase re-prices the incumbent under its own weight).
    std::vector<double> history;
    int evals_used = 0;
};

/// Find any decision vector whose closures and controller are stable with
/// margin 1e-3: zero and identity-decay starts first, then seeded random
/// static gains, then a short abscissa descent from the best draw.
/// Throws NoStabilizerFound (carrying the best abscissa) on failure.
Eigen::VectorXd stabilize_first(const SynthEngine& engine,
                                const ControllerStructure& st,
                                const SynthOptions& opts = {});

/// Stabilize, then minimize the exact penalty by coordinate pattern search
/// with geometric step shrinking.  Deterministic for fixed options.
SynthResult optimize(const SynthProblem& prob, const ControllerStructure& st,
                     const SynthOptions& opts = {});

}  // namespace wavectl
