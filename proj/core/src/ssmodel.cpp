// =============================================================================
// wavectl - ssmodel implementation
// =============================================================================

#include "wavectl/ssmodel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dense_freq.hpp"
#include "wavectl/errors.hpp"
#include "wavectl/xfer.hpp"

namespace wavectl {

// ---------------------------------------------------------------------------
// StateSpace basics
// ---------------------------------------------------------------------------

void StateSpace::validate() const {
    const auto n = A.rows();
    if (A.cols() != n) throw Error("StateSpace: A must be square");
    if (B.rows() != n) throw Error("StateSpace: B row count mismatch");
    if (C.cols() != n) throw Error("StateSpace: C column count mismatch");
    if (D.rows() != C.rows() || D.cols() != B.cols())
        throw Error("StateSpace: D shape mismatch");
    if (!input_labels.empty() &&
        static_cast<Eigen::Index>(input_labels.size()) != B.cols())
        throw Error("StateSpace: input label count mismatch");
    if (!output_labels.empty() &&
        static_cast<Eigen::Index>(output_labels.size()) != C.rows())
        throw Error("StateSpace: output label count mismatch");
}

Eigen::MatrixXcd StateSpace::response(double omega) const {
    const int n = order();
    if (n == 0) return D.cast<std::complex<double>>();
    Eigen::MatrixXcd M = (-A).cast<std::complex<double>>();
    M.diagonal().array() += std::complex<double>(0.0, omega);
    return C.cast<std::complex<double>>() *
               M.partialPivLu().solve(B.cast<std::complex<double>>()) +
           D.cast<std::complex<double>>();
}

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

namespace {

/// Second-difference operator with the two boundary closures folded in;
/// every row sums to zero exactly, so the uniform translation is a null
/// vector of T in floating point, not just analytically.
Eigen::MatrixXd build_T(int N, double alpha) {
    const double h = 1.0 / N;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(N + 1, N + 1);
    T(0, 0) = -2.0 / (h * (h + 2.0 * alpha));
    T(0, 1) = 2.0 / (h * (h + 2.0 * alpha));
    for (int i = 1; i < N; ++i) {
        T(i, i - 1) = 1.0 / (h * h);
        T(i, i) = -2.0 / (h * h);
        T(i, i + 1) = 1.0 / (h * h);
    }
    T(N, N - 1) = 2.0 / (h * h);
    T(N, N) = -2.0 / (h * h);
    return T;
}

Eigen::VectorXd build_Lambda_diag(int N, const XferParams& p, double shift_c) {
    const double h = 1.0 / N;
    Eigen::VectorXd lam = Eigen::VectorXd::Constant(N + 1, -2.0 * p.lambda);
    lam(0) = (2.0 * (p.q + shift_c) - 2.0 * p.lambda * h) /
             (h + 2.0 * p.alpha);
    lam(N) = -2.0 / h - 2.0 * p.lambda;
    return lam;
}

void check_N(int N) {
    if (N < 2) throw Error("discretize: N must be at least 2");
}

PlantChannels discretize_reduced_alpha0(const XferParams& p, int N,
                                        double shift_c) {
    // alpha = 0 turns the controlled boundary into the algebraic relation
    // 0 = x_xi(0) + q x_t(0) + w, solved for v0 = x_t(0).  States are
    // (x_0..x_N, v_1..v_N); v0 becomes an output expression with a direct
    // w feedthrough.
    const double qt = p.q + shift_c;
    if (std::abs(qt) < 1e-12)
        throw Error("discretize: reduced alpha = 0 row needs q + shift_c != 0");
    const double h = 1.0 / N;
    const int n = 2 * N + 1;
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::MatrixXd::Zero(n, 2);
    ss.C = Eigen::MatrixXd::Zero(3, n);
    ss.D = Eigen::MatrixXd::Zero(3, 2);

    // x_0' = v0 = (x_0 - x_1)/(h q~) - w/q~
    ss.A(0, 0) = 1.0 / (h * qt);
    ss.A(0, 1) = -1.0 / (h * qt);
    ss.B(0, 0) = -1.0 / qt;
    // x_i' = v_i
    for (int i = 1; i <= N; ++i) ss.A(i, N + i) = 1.0;
    // interior and controlled-end velocity rows
    for (int i = 1; i <= N; ++i) {
        const int r = N + i;
        if (i < N) {
            ss.A(r, i - 1) = 1.0 / (h * h);
            ss.A(r, i) = -2.0 / (h * h);
            ss.A(r, i + 1) = 1.0 / (h * h);
        } else {
            ss.A(r, N - 1) = 2.0 / (h * h);
            ss.A(r, N) = -2.0 / (h * h);
            ss.A(r, r) += -2.0 / h;  // matched-end absorption of x_t(1)
            ss.B(r, 1) = 2.0 / h;
        }
        ss.A(r, r) += -2.0 * p.lambda;
    }
    // z = y1 = v0, y2 = v_N
    for (int row : {0, 1}) {
        ss.C(row, 0) = 1.0 / (h * qt);
        ss.C(row, 1) = -1.0 / (h * qt);
        ss.D(row, 0) = -1.0 / qt;
    }
    ss.C(2, 2 * N) = 1.0;
    ss.input_labels = {"w", "u"};
    ss.output_labels = {"z", "y1", "y2"};
    ss.validate();
    return PlantChannels{std::move(ss), shift_c};
}

}  // namespace

PlantChannels discretize(const XferParams& p, int N, double shift_c,
                         bool reduced_alpha0) {
    check_N(N);
    if (p.alpha == 0.0) {
        if (!reduced_alpha0)
            throw AlphaZeroUnsupported(
                "discretize: alpha = 0 requires the reduced boundary row");
        return discretize_reduced_alpha0(p, N, shift_c);
    }
    const double h = 1.0 / N;
    const int m = N + 1;
    const int n = 2 * m;

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.A.topRightCorner(m, m).setIdentity();
    ss.A.bottomLeftCorner(m, m) = build_T(N, p.alpha);
    ss.A.bottomRightCorner(m, m) =
        build_Lambda_diag(N, p, shift_c).asDiagonal();

    ss.B = Eigen::MatrixXd::Zero(n, 2);
    ss.B(m, 0) = 2.0 / (h + 2.0 * p.alpha);  // w drives v_0
    ss.B(n - 1, 1) = 2.0 / h;                // u drives v_N

    ss.C = Eigen::MatrixXd::Zero(3, n);
    ss.C(0, m) = 1.0;      // z  = v_0
    ss.C(1, m) = 1.0;      // y1 = v_0
    ss.C(2, n - 1) = 1.0;  // y2 = v_N
    ss.D = Eigen::MatrixXd::Zero(3, 2);
    ss.input_labels = {"w", "u"};
    ss.output_labels = {"z", "y1", "y2"};
    ss.validate();
    return PlantChannels{std::move(ss), shift_c};
}

PlantChannels discretize_deflated(const XferParams& p, int N, double shift_c) {
    check_N(N);
    if (p.alpha == 0.0)
        throw AlphaZeroUnsupported(
            "discretize_deflated: alpha = 0 is not supported");
    const double h = 1.0 / N;
    const int m = N + 1;
    const int n = N + m;  // relative displacements (N) + velocities (N+1)

    const Eigen::MatrixXd T = build_T(N, p.alpha);

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    // d/dt (x_i - x_N) = v_i - v_N
    for (int i = 0; i < N; ++i) {
        ss.A(i, N + i) = 1.0;
        ss.A(i, N + N) = -1.0;
    }
    // T annihilates constants, so T x = T[:, :N] (x - x_N 1)
    ss.A.block(N, 0, m, N) = T.leftCols(N);
    ss.A.block(N, N, m, m) =
        build_Lambda_diag(N, p, shift_c).asDiagonal();

    ss.B = Eigen::MatrixXd::Zero(n, 2);
    ss.B(N, 0) = 2.0 / (h + 2.0 * p.alpha);
    ss.B(n - 1, 1) = 2.0 / h;

    ss.C = Eigen::MatrixXd::Zero(3, n);
    ss.C(0, N) = 1.0;
    ss.C(1, N) = 1.0;
    ss.C(2, n - 1) = 1.0;
    ss.D = Eigen::MatrixXd::Zero(3, 2);
    ss.input_labels = {"w", "u"};
    ss.output_labels = {"z", "y1", "y2"};
    ss.validate();
    return PlantChannels{std::move(ss), shift_c};
}

// ---------------------------------------------------------------------------
// Minimal realization
// ---------------------------------------------------------------------------

namespace {

/// Orthonormal basis of the Krylov reachability span of (A, B): columns are
/// accepted when their residual after reorthogonalization exceeds tol_abs.
Eigen::MatrixXd staircase_basis(const Eigen::MatrixXd& A,
                                const Eigen::MatrixXd& B, double tol_abs) {
    const Eigen::Index n = A.rows();
    Eigen::MatrixXd V(n, 0);
    Eigen::MatrixXd W = B;
    while (W.cols() > 0 && V.cols() < n) {
        if (V.cols() > 0) {
            W -= V * (V.transpose() * W);
            W -= V * (V.transpose() * W);
        }
        Eigen::MatrixXd fresh(n, 0);
        for (Eigen::Index j = 0; j < W.cols(); ++j) {
            Eigen::VectorXd w = W.col(j);
            for (Eigen::Index k = 0; k < fresh.cols(); ++k)
                w -= fresh.col(k) * fresh.col(k).dot(w);
            const double nrm = w.norm();
            if (nrm > tol_abs) {
                fresh.conservativeResize(Eigen::NoChange, fresh.cols() + 1);
                fresh.col(fresh.cols() - 1) = w / nrm;
            }
        }
        if (fresh.cols() == 0) break;
        Eigen::MatrixXd grown(n, V.cols() + fresh.cols());
        grown << V, fresh;
        V = std::move(grown);
        W = A * fresh;
    }
    return V;
}

double response_scale(const std::vector<Eigen::MatrixXcd>& rs) {
    double s = 1e-9;
    for (const auto& r : rs) s = std::max(s, r.norm());
    return s;
}

}  // namespace

StateSpace minreal(const StateSpace& ss, double tol, bool verify) {
    ss.validate();
    // The default tolerance targets *exact* structural non-minimality (the
    // rigid translation mode has machine-zero residuals); it must stay far
    // below physically coupled components, which can be small relative to the
    // stiff boundary rows that dominate ||A||.
    const double tol_abs =
        tol >= 0.0 ? tol : 1e-12 * std::max(1.0, ss.A.norm());

    const Eigen::MatrixXd Vr = staircase_basis(ss.A, ss.B, tol_abs);
    StateSpace stage;
    stage.A = Vr.transpose() * ss.A * Vr;
    stage.B = Vr.transpose() * ss.B;
    stage.C = ss.C * Vr;
    stage.D = ss.D;

    const Eigen::MatrixXd Vo = staircase_basis(
        stage.A.transpose(), stage.C.transpose(), tol_abs);
    StateSpace out;
    out.A = Vo.transpose() * stage.A * Vo;
    out.B = Vo.transpose() * stage.B;
    out.C = stage.C * Vo;
    out.D = ss.D;
    out.input_labels = ss.input_labels;
    out.output_labels = ss.output_labels;

    if (verify) {
        detail::HessFreqSolver orig(ss.A, ss.B, ss.C, ss.D);
        detail::HessFreqSolver red(out.A, out.B, out.C, out.D);
        std::vector<Eigen::MatrixXcd> ro, rr;
        const int pts = 200;
        for (int i = 0; i < pts; ++i) {
            // Evaluate on the line Re s = 1 rather than the imaginary axis:
            // both realizations can have (near-)imaginary poles, where the
            // resolvent solve is so ill-conditioned that rounding noise alone
            // would exceed any meaningful agreement threshold.
            const std::complex<double> s(
                1.0, std::pow(10.0, -4.0 + 8.0 * i / (pts - 1.0)));
            ro.push_back(orig.response_at(s));
            rr.push_back(red.response_at(s));
        }
        const double scale = response_scale(ro);
        double worst = 0.0;
        for (int i = 0; i < pts; ++i)
            worst = std::max(worst, (ro[i] - rr[i]).norm());
        if (worst > 1e-6 * scale) {
            std::ostringstream os;
            os << "minreal: reduced response deviates by " << worst / scale
               << " relative (order " << ss.order() << " -> " << out.order()
               << ")";
            throw Error(os.str());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interconnection
// ---------------------------------------------------------------------------

namespace {

Eigen::Index label_index(const std::vector<std::string>& labels,
                         const std::string& want, const char* what) {
    const auto it = std::find(labels.begin(), labels.end(), want);
    if (it == labels.end())
        throw Error(std::string("channel lookup: missing ") + what + " '" +
                    want + "'");
    return static_cast<Eigen::Index>(it - labels.begin());
}

}  // namespace

StateSpace close_loop(const StateSpace& plant, const Controller& K) {
    plant.validate();
    K.ss.validate();
    if (K.ss.num_inputs() != 2 || K.ss.num_outputs() != 1)
        throw Error("close_loop: controller must map (y1, y2) to u");

    const Eigen::Index iw = label_index(plant.input_labels, "w", "input");
    const Eigen::Index iu = label_index(plant.input_labels, "u", "input");
    const Eigen::Index oz = label_index(plant.output_labels, "z", "output");
    const Eigen::Index oy1 = label_index(plant.output_labels, "y1", "output");
    const Eigen::Index oy2 = label_index(plant.output_labels, "y2", "output");

    const Eigen::Index n = plant.order();
    const Eigen::Index nk = K.ss.order();

    const Eigen::MatrixXd Bw = plant.B.col(iw);
    const Eigen::MatrixXd Bu = plant.B.col(iu);
    Eigen::MatrixXd Cy(2, n), Dyw(2, 1), Dyu(2, 1);
    Cy.row(0) = plant.C.row(oy1);
    Cy.row(1) = plant.C.row(oy2);
    Dyw << plant.D(oy1, iw), plant.D(oy2, iw);
    Dyu << plant.D(oy1, iu), plant.D(oy2, iu);

    // u = -(C_K xK + D_K y), y = Cy x + Dyw w + Dyu u
    const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(1, 1) + K.ss.D * Dyu;
    if (std::abs(S(0, 0)) < 1e-12)
        throw IllPosedLoop("close_loop: algebraic loop I + D_K D_yu is "
                           "singular");
    const double sinv = 1.0 / S(0, 0);

    // u = Fx x + Fk xK + Fw w
    const Eigen::MatrixXd Fx = -sinv * (K.ss.D * Cy);
    const Eigen::MatrixXd Fk = -sinv * K.ss.C;
    const Eigen::MatrixXd Fw = -sinv * (K.ss.D * Dyw);

    StateSpace cl;
    cl.A = Eigen::MatrixXd::Zero(n + nk, n + nk);
    cl.A.topLeftCorner(n, n) = plant.A + Bu * Fx;
    cl.A.topRightCorner(n, nk) = Bu * Fk;
    cl.A.bottomLeftCorner(nk, n) = K.ss.B * (Cy + Dyu * Fx);
    cl.A.bottomRightCorner(nk, nk) = K.ss.A + K.ss.B * Dyu * Fk;

    cl.B = Eigen::MatrixXd::Zero(n + nk, 1);
    cl.B.topRows(n) = Bw + Bu * Fw;
    cl.B.bottomRows(nk) = K.ss.B * (Dyw + Dyu * Fw);

    cl.C = Eigen::MatrixXd::Zero(4, n + nk);
    cl.D = Eigen::MatrixXd::Zero(4, 1);
    const Eigen::Index rows[3] = {oz, oy1, oy2};
    for (int r = 0; r < 3; ++r) {
        const Eigen::Index pr = rows[r];
        cl.C.row(r).head(n) =
            plant.C.row(pr) + plant.D(pr, iu) * Fx.row(0);
        cl.C.row(r).tail(nk) = plant.D(pr, iu) * Fk.row(0);
        cl.D(r, 0) = plant.D(pr, iw) + plant.D(pr, iu) * Fw(0, 0);
    }
    cl.C.row(3).head(n) = Fx.row(0);
    cl.C.row(3).tail(nk) = Fk.row(0);
    cl.D(3, 0) = Fw(0, 0);

    cl.input_labels = {"w"};
    cl.output_labels = {"z", "y1", "y2", "u"};
    cl.validate();
    return cl;
}

StateSpace series(const StateSpace& g2, const StateSpace& g1) {
    g1.validate();
    g2.validate();
    if (g2.num_inputs() != g1.num_outputs())
        throw Error("series: inner dimensions do not chain");
    const Eigen::Index n1 = g1.order(), n2 = g2.order();
    StateSpace out;
    out.A = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    out.A.topLeftCorner(n1, n1) = g1.A;
    out.A.bottomLeftCorner(n2, n1) = g2.B * g1.C;
    out.A.bottomRightCorner(n2, n2) = g2.A;
    out.B = Eigen::MatrixXd::Zero(n1 + n2, g1.num_inputs());
    out.B.topRows(n1) = g1.B;
    out.B.bottomRows(n2) = g2.B * g1.D;
    out.C = Eigen::MatrixXd::Zero(g2.num_outputs(), n1 + n2);
    out.C.leftCols(n1) = g2.D * g1.C;
    out.C.rightCols(n2) = g2.C;
    out.D = g2.D * g1.D;
    out.input_labels = g1.input_labels;
    out.output_labels = g2.output_labels;
    out.validate();
    return out;
}

StateSpace channel_select(const StateSpace& ss,
                          const std::vector<std::string>& outputs,
                          const std::vector<std::string>& inputs) {
    ss.validate();
    StateSpace out;
    out.A = ss.A;
    out.B.resize(ss.order(), static_cast<Eigen::Index>(inputs.size()));
    out.C.resize(static_cast<Eigen::Index>(outputs.size()), ss.order());
    out.D.resize(static_cast<Eigen::Index>(outputs.size()),
                 static_cast<Eigen::Index>(inputs.size()));
    for (std::size_t j = 0; j < inputs.size(); ++j)
        out.B.col(static_cast<Eigen::Index>(j)) =
            ss.B.col(label_index(ss.input_labels, inputs[j], "input"));
    for (std::size_t i = 0; i < outputs.size(); ++i)
        out.C.row(static_cast<Eigen::Index>(i)) =
            ss.C.row(label_index(ss.output_labels, outputs[i], "output"));
    for (std::size_t i = 0; i < outputs.size(); ++i)
        for (std::size_t j = 0; j < inputs.size(); ++j)
            out.D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                ss.D(label_index(ss.output_labels, outputs[i], "output"),
                     label_index(ss.input_labels, inputs[j], "input"));
    out.input_labels = inputs;
    out.output_labels = outputs;
    out.validate();
    return out;
}

StateSpace weight_Wu() {
    StateSpace w;
    w.A.resize(1, 1);
    w.A << -2e5;
    w.B.resize(1, 1);
    w.B << 1.0;
    w.C.resize(1, 1);
    w.C << -2e9;
    w.D.resize(1, 1);
    w.D << 1e4;
    w.input_labels = {"u"};
    w.output_labels = {"wu"};
    return w;
}

// ---------------------------------------------------------------------------
// Controller serialization
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array())
        throw Error(std::string("controller JSON: ") + field +
                    " must be a nested array");
    const auto rows = j.size();
    if (rows == 0) return Eigen::MatrixXd(0, 0);
    const auto cols = j.at(0).size();
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows),
                      static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j.at(r).is_array() || j.at(r).size() != cols)
            throw Error(std::string("controller JSON: ragged rows in ") +
                        field);
        for (std::size_t c = 0; c < cols; ++c)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                j.at(r).at(c).get<double>();
    }
    return M;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

Controller controller_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("controller JSON parse failure: ") + e.what());
    }
    Controller K;
    K.name = j.value("name", "");
    K.ss.A = matrix_from_json(j.at("A"), "A");
    K.ss.B = matrix_from_json(j.at("B"), "B");
    K.ss.C = matrix_from_json(j.at("C"), "C");
    K.ss.D = matrix_from_json(j.at("D"), "D");
    K.ss.input_labels = {"y1", "y2"};
    K.ss.output_labels = {"u"};
    K.ss.validate();
    if (K.ss.num_inputs() != 2 || K.ss.num_outputs() != 1)
        throw Error("controller JSON: expected 2 inputs and 1 output");
    if (minreal(K.ss, -1.0, false).order() != K.ss.order())
        throw Error("controller JSON: realization is not minimal");
    return K;
}

Controller controller_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("controller_from_file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return controller_from_json(buf.str());
}

std::string controller_to_json(const Controller& K) {
    nlohmann::json j;
    j["name"] = K.name;
    j["A"] = matrix_to_json(K.ss.A);
    j["B"] = matrix_to_json(K.ss.B);
    j["C"] = matrix_to_json(K.ss.C);
    j["D"] = matrix_to_json(K.ss.D);
    return j.dump(2);
}

}  // namespace wavectl
