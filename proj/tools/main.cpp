// =============================================================================
// wavectl CLI - one front end over the analysis, certification, simulation,
// and synthesis layers
// =============================================================================
//
// Subcommands
//   derive    scenario -> dimensionless parameter row (JSON)
//   classify  (q, alpha) -> stability zone + n_p pattern (JSON, optional SVG)
//   np        (q, alpha, lambda) -> unstable pole count + winding diagnostics
//   certify   scenario + controller -> certificate bundle (exit 2 on failure)
//   simulate  nonlinear boundary-coupled run -> CSV + JSON sidecar (+ SVG)
//   norms     closed-loop channel norm (hinf | h2 | pk)
//   synth     structured controller search from a problem description (JSON)
//
// Exit codes: 0 success, 1 invalid flags, 2 a certificate failed,
// 3 numerical failure.  Every artifact embeds a config echo so runs are
// reproducible from their outputs alone.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wavectl/certify.hpp"
#include "wavectl/errors.hpp"
#include "wavectl/fixtures.hpp"
#include "wavectl/norms.hpp"
#include "wavectl/scenario.hpp"
#include "wavectl/simulate.hpp"
#include "wavectl/spectra.hpp"
#include "wavectl/ssmodel.hpp"
#include "wavectl/synth.hpp"
#include "wavectl/xfer.hpp"

#include "svg.hpp"

namespace {

using nlohmann::json;
using namespace wavectl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertFailed = 2;
constexpr int kExitNumerical = 3;

// ---------------------------------------------------------------------------
// Shared option plumbing
// ---------------------------------------------------------------------------

struct GlobalOpts {
    double tol = -1.0;  ///< <0 means "module default"
    int n = 200;        ///< discretization size where one is needed
    unsigned seed = 1;
};

json config_echo(const GlobalOpts& g, json extra) {
    json cfg = std::move(extra);
    cfg["n"] = g.n;
    cfg["seed"] = g.seed;
    if (g.tol >= 0.0) cfg["tol"] = g.tol;
    return cfg;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

ScenarioParams scenario_by_name(const std::string& name) {
    try {
        return fixtures::scenario(name);
    } catch (const Error&) {
        throw CLI::ValidationError("--scenario",
                                   "unknown scenario '" + name + "'");
    }
}

Controller controller_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--controller",
                                   "cannot open '" + path + "'");
    json j = json::parse(in);
    Controller K;
    K.name = j.value("name", path);
    const auto mat = [&](const char* key) {
        const auto& rows = j.at(key);
        Eigen::MatrixXd M(rows.size(),
                          rows.empty() ? 0 : rows.front().size());
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                M(r, c) = rows[r][c].get<double>();
        return M;
    };
    K.ss.A = mat("A");
    K.ss.B = mat("B");
    K.ss.C = mat("C");
    K.ss.D = mat("D");
    K.ss.input_labels = {"y1", "y2"};
    K.ss.output_labels = {"u"};
    K.ss.validate();
    return K;
}

/// --controller accepts the built-in names, "none", or a JSON file path.
std::optional<Controller> controller_by_flag(const std::string& flag) {
    if (flag.empty() || flag == "none") return std::nullopt;
    if (flag == "gray") return fixtures::K_gray();
    if (flag == "blue") return fixtures::K_blue();
    return controller_from_json_file(flag);
}

json matrix_json(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json controller_json(const Controller& K) {
    return {{"name", K.name},     {"order", K.order()},
            {"A", matrix_json(K.ss.A)}, {"B", matrix_json(K.ss.B)},
            {"C", matrix_json(K.ss.C)}, {"D", matrix_json(K.ss.D)},
            {"inputs", {"y1", "y2"}},   {"outputs", {"u"}}};
}

json certificate_json(const Certificate& c) {
    return {{"kind", to_string(c.kind)},   {"computed", c.computed},
            {"threshold", c.threshold},    {"pass", c.pass},
            {"tolerance", c.tolerance},    {"margin", c.margin()},
            {"context", c.context}};
}

json norm_json(const NormResult& r) {
    json j = {{"value", r.value},
              {"method", to_string(r.method)},
              {"tolerance", r.tolerance}};
    if (std::isfinite(r.argmax)) j["argmax"] = r.argmax;
    return j;
}

/// Sector data for a named scenario's certified loop: published slopes plus
/// fitted large-magnitude constants (M, L) when they exist.
SectorBounds sector_for(const std::string& name, const ScenarioParams& sp) {
    auto [ql, qu] = fixtures::published_sector(name);
    try {
        return fit_sector(sp, ql, qu, SectorMode::large_magnitude);
    } catch (const Error&) {
        return SectorBounds::from_slopes(ql, qu);
    }
}

/// "kind:t_start,duration,magnitude[,rate]".  Kind names follow the flag
/// vocabulary: none | square | pulse | exp_decaying_pulse | oscillatory.
Disturbance parse_disturbance(const std::string& text) {
    Disturbance d;
    if (text.empty() || text == "none") return d;
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    if (kind == "square")
        d.shape = DisturbanceShape::square;
    else if (kind == "pulse")
        d.shape = DisturbanceShape::pulse;
    else if (kind == "exp_decaying_pulse" || kind == "exp_decaying")
        d.shape = DisturbanceShape::exp_decaying;
    else if (kind == "oscillatory")
        d.shape = DisturbanceShape::oscillatory;
    else
        throw CLI::ValidationError("--disturb",
                                   "unknown disturbance kind '" + kind + "'");
    if (colon == std::string::npos)
        throw CLI::ValidationError("--disturb",
                                   "expected kind:t_start,duration,magnitude");
    std::stringstream rest(text.substr(colon + 1));
    std::vector<double> vals;
    for (std::string tok; std::getline(rest, tok, ',');)
        vals.push_back(std::stod(tok));
    if (vals.size() < 3)
        throw CLI::ValidationError("--disturb",
                                   "expected kind:t_start,duration,magnitude");
    d.t_start = vals[0];
    d.duration = vals[1];
    d.magnitude = vals[2];
    d.rate = vals.size() > 3 ? vals[3] : 0.0;
    return d;
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

int run_derive(const GlobalOpts& g, const std::string& scenario) {
    const ScenarioParams sp = scenario_by_name(scenario);
    const DimParams dp = derive_dimensionless(sp);
    const SteadyState st = steady_state(sp);
    json out = {{"scenario", scenario},
                {"q", dp.q},
                {"alpha", dp.alpha},
                {"lambda", dp.lambda},
                {"p", dp.p},
                {"Omega0", st.Omega0},
                {"kink", dp.kink},
                {"time_scale", dp.time_scale},
                {"config", config_echo(g, {{"command", "derive"}})}};
    emit(out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

void write_zone_map_svg(const std::string& path, double q, double alpha,
                        const char* zone) {
    cli::SvgChart chart("stability zones", "q", "alpha");

    // Imaginary-axis crossing cloud: its upper envelope is the oscillatory
    // zone boundary.
    cli::Series cloud;
    cloud.label = "crossing set";
    cloud.color = "#9ecae1";
    std::vector<double> omegas;
    for (int i = 0; i < 400; ++i)
        omegas.push_back(std::pow(10.0, -2.0 + 3.0 * i / 399.0));
    for (int k = 0; k < 60; ++k) {
        const double lam = std::pow(10.0, -2.0 + 2.3 * k / 59.0);
        for (const CrossingPoint& cp : zero_crossing_pairs(lam, omegas)) {
            if (cp.q < 0.85 || cp.q > 4.0 || cp.alpha > 3.0) continue;
            cloud.x.push_back(cp.q);
            cloud.y.push_back(cp.alpha);
            // break the polyline between samples so the cloud renders as
            // dots-ish short segments rather than a scribble
            cloud.x.push_back(cp.q);
            cloud.y.push_back(cp.alpha);
        }
    }
    chart.add(cloud);

    cli::Series parab;
    parab.label = "real-root parabola";
    parab.color = "#2ca02c";
    for (double qq = 1.0; qq <= 4.0; qq += 0.01) {
        parab.x.push_back(qq);
        parab.y.push_back((qq - 1.0) + (qq - 1.0) * (qq - 1.0) / 3.0);
    }
    chart.add(parab);

    chart.marker(q, alpha, zone);
    chart.write(path);
}

int run_classify(const GlobalOpts& g, double q, double alpha,
                 const std::string& svg_path) {
    const double btol = g.tol >= 0.0 ? g.tol : 1e-3;
    const ZonePattern zp = classify_zone(q, alpha, btol);
    json out = {{"q", q},
                {"alpha", alpha},
                {"zone", to_string(zp.zone)},
                {"pattern", zp.pattern},
                {"thresholds", zp.thresholds},
                {"config", config_echo(g, {{"command", "classify"},
                                           {"boundary_tol", btol}})}};
    emit(out);
    if (!svg_path.empty())
        write_zone_map_svg(svg_path, q, alpha, to_string(zp.zone));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// np
// ---------------------------------------------------------------------------

void write_phase_svg(const std::string& path, const XferParams& p, double R,
                     int winding) {
    // Unwrapped argument of d along the half-disc contour; the total drop
    // over the closed curve is 2*pi*winding(d) = -2*pi*n_p.
    cli::SvgChart chart("argument of d along the contour (R = " +
                            std::to_string(R) + ")",
                        "contour parameter t", "unwrapped arg d [rad]");
    cli::Series ser;
    ser.label = "arg d, winding " + std::to_string(winding);
    const int n = 6000;
    double acc = 0.0, prev = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = double(i) / n;
        const LogValue lv = eval_d_log(p, detail::contour_point(t, R));
        if (i == 0)
            acc = lv.arg;
        else
            acc += std::remainder(lv.arg - prev, 2.0 * 3.14159265358979323846);
        prev = lv.arg;
        ser.x.push_back(t);
        ser.y.push_back(acc);
    }
    chart.add(ser);
    chart.write(path);
}

int run_np(const GlobalOpts& g, double q, double alpha, double lambda,
           double radius, const std::string& svg_path) {
    const XferParams p{q, alpha, lambda};
    const double R =
        radius > 0.0 ? radius : pole_exclusion_radius(p);
    ContourSpec spec;
    spec.R = R;
    const WindingResult w = winding_of_d(p, spec);
    const int n_p = count_unstable_poles(p, spec);
    json out = {{"q", q},
                {"alpha", alpha},
                {"lambda", lambda},
                {"n_p", n_p},
                {"winding",
                 {{"winding_of_d", w.winding},
                  {"radius", R},
                  {"samples_used", w.samples_used},
                  {"min_modulus", w.min_modulus},
                  {"refined", w.refined}}},
                {"config", config_echo(g, {{"command", "np"}})}};
    emit(out);
    if (!svg_path.empty()) write_phase_svg(svg_path, p, R, w.winding);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

void write_nyquist_svg(const std::string& path, const XferParams& p,
                       const Controller& K) {
    // Image of F = 1 + K1 G1 + K2 G2 along the contour; closed-loop
    // stability needs its winding about the origin to equal n_p.
    cli::SvgChart chart("Nyquist image of 1 + K G", "Re", "Im");
    cli::Series ser;
    ser.label = "F along contour";
    const double R = pole_exclusion_radius(p);
    const int n = 6000;
    for (int i = 0; i <= n; ++i) {
        const Complex s = detail::contour_point(double(i) / n, R);
        const LoopGains kg = controller_gains(K, s);
        const ChannelValues cv = eval_channels(p, s);
        const Complex F = 1.0 + kg.K1 * cv.G1 + kg.K2 * cv.G2;
        ser.x.push_back(F.real());
        ser.y.push_back(F.imag());
    }
    chart.add(ser);
    chart.marker(0.0, 0.0, "origin");
    chart.write(path);
}

int run_certify(const GlobalOpts& g, const std::string& scenario,
                const std::string& controller, double rho,
                const std::string& svg_path) {
    const ScenarioParams sp = scenario_by_name(scenario);
    const DimParams dp = derive_dimensionless(sp);
    const XferParams xp{dp.q, dp.alpha, dp.lambda};
    const auto K = controller_by_flag(controller);
    if (!K)
        throw CLI::ValidationError("--controller",
                                   "certify needs a controller");
    const SectorBounds sb = sector_for(scenario, sp);

    CertifyOptions opts;
    opts.N = g.n;
    opts.rho = rho;
    const std::vector<Certificate> bundle =
        certificate_bundle(xp, *K, sb, opts);

    bool all_pass = true;
    json certs = json::array();
    for (const Certificate& c : bundle) {
        certs.push_back(certificate_json(c));
        all_pass = all_pass && c.pass;
    }
    json out = {{"scenario", scenario},
                {"controller", K->name},
                {"sector",
                 {{"q_l", sb.q_l},
                  {"q_u", sb.q_u},
                  {"c", sb.c},
                  {"r", sb.r}}},
                {"certificates", certs},
                {"all_pass", all_pass},
                {"config", config_echo(g, {{"command", "certify"},
                                           {"rho", rho}})}};
    if (sb.M_mag) out["sector"]["M_mag"] = *sb.M_mag;
    if (sb.L_mag) out["sector"]["L_mag"] = *sb.L_mag;
    emit(out);
    if (!svg_path.empty()) write_nyquist_svg(svg_path, xp, *K);
    return all_pass ? kExitOk : kExitCertFailed;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

void write_timeseries_svg(const std::string& path, const TimeSeries& ts,
                          double on_at) {
    cli::SvgChart chart("boundary velocities", "t", "velocity");
    cli::Series y1{"y1 (bit frame)", "#1f77b4", ts.t, ts.y1};
    cli::Series th{"theta_dot_bit", "#ff7f0e", ts.t, ts.theta_dot_bit};
    chart.add(std::move(y1));
    chart.add(std::move(th));
    chart.hline(0.0);
    if (std::isfinite(on_at)) chart.vline(on_at);
    for (const StickInterval& si : ts.stick_intervals) {
        chart.vline(si.t_begin);
        chart.vline(si.t_end);
    }
    chart.write(path);
}

int run_simulate(const GlobalOpts& g, const std::string& scenario,
                 const std::string& controller, double on_at, double offset,
                 const std::string& disturb, double t_final, double dt,
                 bool linearize, const std::string& out_path,
                 const std::string& svg_path) {
    const ScenarioParams sp = scenario_by_name(scenario);
    const auto K = controller_by_flag(controller);
    SimConfig cfg;
    cfg.N = g.n;
    cfg.t_final = t_final;
    cfg.dt = dt;
    cfg.initial_offset = offset;
    cfg.controller_on_at =
        K ? on_at : std::numeric_limits<double>::infinity();
    cfg.disturbance = parse_disturbance(disturb);
    cfg.linearize = linearize;

    const TimeSeries ts = simulate(sp, K ? &*K : nullptr, cfg);

    json sticks = json::array();
    for (const StickInterval& si : ts.stick_intervals)
        sticks.push_back({si.t_begin, si.t_end});
    double final_abs_y1 = 0.0;
    if (!ts.y1.empty()) final_abs_y1 = std::abs(ts.y1.back());
    json summary = {{"scenario", scenario},
                    {"controller", K ? K->name : "none"},
                    {"samples", ts.t.size()},
                    {"stick_intervals", sticks},
                    {"final_abs_y1", final_abs_y1},
                    {"config", config_echo(g, {{"command", "simulate"},
                                               {"on_at", on_at},
                                               {"offset", offset},
                                               {"disturb", disturb},
                                               {"t_final", t_final},
                                               {"dt", dt},
                                               {"linearize", linearize}})}};

    if (!out_path.empty()) {
        std::ofstream csv(out_path);
        if (!csv) {
            std::cerr << "cannot write " << out_path << "\n";
            return kExitNumerical;
        }
        csv << "t,y1,y2,u,theta_dot_bit,omega_cmd\n";
        csv.precision(10);
        for (std::size_t i = 0; i < ts.t.size(); ++i)
            csv << ts.t[i] << ',' << ts.y1[i] << ',' << ts.y2[i] << ','
                << ts.u[i] << ',' << ts.theta_dot_bit[i] << ','
                << ts.omega_cmd[i] << '\n';
        std::ofstream sidecar(out_path + ".json");
        sidecar << summary.dump(2) << "\n";
        summary["csv"] = out_path;
    }
    emit(summary);
    if (!svg_path.empty())
        write_timeseries_svg(svg_path, ts, cfg.controller_on_at);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

int run_norms(const GlobalOpts& g, const std::string& scenario,
              const std::string& controller, const std::string& channel,
              const std::string& norm) {
    const ScenarioParams sp = scenario_by_name(scenario);
    const DimParams dp = derive_dimensionless(sp);
    const XferParams xp{dp.q, dp.alpha, dp.lambda};
    const auto K = controller_by_flag(controller);
    if (!K)
        throw CLI::ValidationError("--controller", "norms needs a controller");

    // tze is the sector-shifted disturbance -> z channel used by the
    // certificates; ty1w and tuw live on the nominal loop.
    StateSpace ch;
    if (channel == "tze") {
        const SectorBounds sb = sector_for(scenario, sp);
        ch = closed_channel(xp, *K, sb.c, g.n, "z");
    } else if (channel == "ty1w") {
        ch = closed_channel(xp, *K, 0.0, g.n, "y1");
    } else if (channel == "tuw") {
        ch = closed_channel(xp, *K, 0.0, g.n, "u");
    } else {
        throw CLI::ValidationError("--channel",
                                   "expected tze | ty1w | tuw");
    }

    NormResult r;
    if (norm == "hinf")
        r = hinf(ch);
    else if (norm == "h2")
        r = h2(ch);
    else if (norm == "pk")
        r = peak_gain(ch);
    else
        throw CLI::ValidationError("--norm", "expected hinf | h2 | pk");

    json out = {{"scenario", scenario},
                {"controller", K->name},
                {"channel", channel},
                {"norm", norm},
                {"result", norm_json(r)},
                {"config", config_echo(g, {{"command", "norms"}})}};
    emit(out);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int run_synth(const GlobalOpts& g, const std::string& problem_path,
              const std::string& out_prefix, int max_evals) {
    std::ifstream in(problem_path);
    if (!in)
        throw CLI::ValidationError("--problem",
                                   "cannot open '" + problem_path + "'");
    const json pj = json::parse(in);

    SynthProblem prob;
    std::string scen_name;
    if (pj.at("scenario").is_string()) {
        scen_name = pj["scenario"].get<std::string>();
        const ScenarioParams sp = scenario_by_name(scen_name);
        prob.scenario = derive_dimensionless(sp);
    } else {
        const json& s = pj["scenario"];
        prob.scenario.q = s.at("q").get<double>();
        prob.scenario.alpha = s.at("alpha").get<double>();
        prob.scenario.lambda = s.at("lambda").get<double>();
    }

    const std::string program = pj.value("program", "overshoot_h2");
    if (program == "sector_program")
        prob.program = ProgramKind::sector_program;
    else if (program == "overshoot_pk")
        prob.program = ProgramKind::overshoot_pk;
    else if (program == "overshoot_h2")
        prob.program = ProgramKind::overshoot_h2;
    else
        throw CLI::ValidationError("--problem",
                                   "unknown program '" + program + "'");

    if (pj.contains("sector") && pj["sector"].is_object()) {
        prob.sector = SectorBounds::from_slopes(
            pj["sector"].at("q_l").get<double>(),
            pj["sector"].at("q_u").get<double>());
    } else if (!scen_name.empty()) {
        auto [ql, qu] = fixtures::published_sector(scen_name);
        prob.sector = SectorBounds::from_slopes(ql, qu);
    } else {
        throw CLI::ValidationError(
            "--problem", "sector slopes required for raw scenarios");
    }
    prob.rho = pj.value("rho", 1.3);
    prob.N_design = pj.value("N_design", 50);

    ControllerStructure st;
    st.form = ControllerForm::state_space;
    st.k = pj.value("order", 5);

    SynthOptions opts;
    opts.seed = g.seed;
    if (max_evals > 0) opts.max_evals = max_evals;

    const SynthResult res = optimize(prob, st, opts);

    json out = {{"problem", pj},
                {"value", res.final_eval.value},
                {"slacks", res.final_eval.slacks},
                {"abscissa_nominal", res.final_eval.abscissa_nominal},
                {"abscissa_shifted", res.final_eval.abscissa_shifted},
                {"evals_used", res.evals_used},
                {"accepted_steps", res.history.size()},
                {"controller", controller_json(res.K)},
                {"config", config_echo(g, {{"command", "synth"},
                                           {"max_evals", opts.max_evals}})}};
    emit(out);

    if (!out_prefix.empty()) {
        std::ofstream kf(out_prefix + "_controller.json");
        kf << controller_json(res.K).dump(2) << "\n";
        std::ofstream hf(out_prefix + "_history.csv");
        hf << "accept,penalty\n";
        for (std::size_t i = 0; i < res.history.size(); ++i)
            hf << i << ',' << res.history[i] << '\n';
    }
    return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
    CLI::App app{
        "wavectl: analysis, certification, simulation, and synthesis for "
        "boundary-damped torsional rigs"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--tol", g.tol,
                   "override the command's default tolerance");
    app.add_option("--n", g.n, "discretization size (default 200)");
    app.add_option("--seed", g.seed, "seed for randomized phases");

    std::string scenario, controller = "none", svg_path, out_path;
    double q = 0, alpha = 0, lambda = 0, radius = -1;
    double on_at = std::numeric_limits<double>::infinity();
    double offset = 0, t_final = 40.0, dt = 2e-3, rho = 1.3;
    std::string disturb = "none", channel = "tze", norm = "hinf";
    std::string problem_path, out_prefix;
    bool linearize = false;
    int max_evals = -1;

    CLI::App* c_derive = app.add_subcommand(
        "derive", "dimensionless parameters of a scenario");
    c_derive->add_option("--scenario", scenario)->required();

    CLI::App* c_classify =
        app.add_subcommand("classify", "stability zone of (q, alpha)");
    c_classify->add_option("--q", q)->required();
    c_classify->add_option("--alpha", alpha)->required();
    c_classify->add_option("--svg", svg_path, "zone map output");

    CLI::App* c_np = app.add_subcommand(
        "np", "unstable pole count of (q, alpha, lambda)");
    c_np->add_option("--q", q)->required();
    c_np->add_option("--alpha", alpha)->required();
    c_np->add_option("--lambda", lambda)->required();
    c_np->add_option("--radius", radius, "contour radius override");
    c_np->add_option("--svg", svg_path, "contour phase plot output");

    CLI::App* c_certify = app.add_subcommand(
        "certify", "certificate bundle for scenario + controller");
    c_certify->add_option("--scenario", scenario)->required();
    c_certify->add_option("--controller", controller)->required();
    c_certify->add_option("--rho", rho, "H2 surrogate bound");
    c_certify->add_option("--svg", svg_path, "Nyquist curve output");

    CLI::App* c_sim =
        app.add_subcommand("simulate", "nonlinear boundary-coupled run");
    c_sim->add_option("--scenario", scenario)->required();
    c_sim->add_option("--controller", controller,
                      "gray | blue | none | controller.json");
    c_sim->add_option("--on-at", on_at, "controller engagement time");
    c_sim->add_option("--offset", offset,
                      "initial velocity offset as a fraction of |kink|");
    c_sim->add_option("--disturb", disturb,
                      "kind:t_start,duration,magnitude[,rate]");
    c_sim->add_option("--t-final", t_final);
    c_sim->add_option("--dt", dt);
    c_sim->add_flag("--linearize", linearize,
                    "drop the friction nonlinearity");
    c_sim->add_option("--out", out_path, "CSV output (JSON sidecar added)");
    c_sim->add_option("--svg", svg_path, "time-series plot output");

    CLI::App* c_norms =
        app.add_subcommand("norms", "closed-loop channel norm");
    c_norms->add_option("--scenario", scenario)->required();
    c_norms->add_option("--controller", controller)->required();
    c_norms->add_option("--channel", channel, "tze | ty1w | tuw");
    c_norms->add_option("--norm", norm, "hinf | h2 | pk");

    CLI::App* c_synth = app.add_subcommand(
        "synth", "structured controller search from a problem JSON");
    c_synth->add_option("--problem", problem_path)->required();
    c_synth->add_option("--out", out_prefix,
                        "artifact prefix (controller + history)");
    c_synth->add_option("--max-evals", max_evals);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_derive->parsed()) return run_derive(g, scenario);
        if (c_classify->parsed()) return run_classify(g, q, alpha, svg_path);
        if (c_np->parsed())
            return run_np(g, q, alpha, lambda, radius, svg_path);
        if (c_certify->parsed())
            return run_certify(g, scenario, controller, rho, svg_path);
        if (c_sim->parsed())
            return run_simulate(g, scenario, controller, on_at, offset,
                                disturb, t_final, dt, linearize, out_path,
                                svg_path);
        if (c_norms->parsed())
            return run_norms(g, scenario, controller, channel, norm);
        if (c_synth->parsed())
            return run_synth(g, problem_path, out_prefix, max_evals);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
