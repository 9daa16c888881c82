// =============================================================================
// wavectl - certify implementation
// =============================================================================

#include "wavectl/certify.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wavectl/errors.hpp"

namespace wavectl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string plant_tag(const XferParams& p) {
    std::ostringstream os;
    os << "plant(q=" << p.q << ", alpha=" << p.alpha
       << ", lambda=" << p.lambda << ")";
    return os.str();
}

}  // namespace

const char* to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::nyquist_closed_loop: return "nyquist_closed_loop";
        case CertificateKind::sector_hinf: return "sector_hinf";
        case CertificateKind::large_mag_pk: return "large_mag_pk";
        case CertificateKind::weight_bound: return "weight_bound";
        case CertificateKind::h2_surrogate: return "h2_surrogate";
    }
    return "?";
}

double Certificate::margin() const {
    if (kind == CertificateKind::nyquist_closed_loop)
        return 1.0 - std::abs(computed - threshold);
    return threshold - computed;
}

// ---------------------------------------------------------------------------
// Frequency-domain closure
// ---------------------------------------------------------------------------

LoopGains controller_gains(const Controller& K, Complex s) {
    const int nk = K.order();
    Eigen::RowVector2cd row;
    if (nk == 0) {
        row = K.ss.D.cast<Complex>();
    } else {
        Eigen::MatrixXcd M = (-K.ss.A).cast<Complex>();
        M.diagonal().array() += s;
        row = K.ss.C.cast<Complex>() *
                  M.partialPivLu().solve(K.ss.B.cast<Complex>()) +
              K.ss.D.cast<Complex>();
    }
    return LoopGains{row(0), row(1)};
}

Complex loop_tf(const XferParams& p, const Controller& K, Complex s,
                LoopChannel ch) {
    const ChannelValues cv = eval_channels(p, s);
    const LoopGains kg = controller_gains(K, s);
    const Complex F = 1.0 + kg.K1 * cv.G1 + kg.K2 * cv.G2;
    const Complex T_uw = -(kg.K1 * cv.G1w + kg.K2 * cv.G2w) / F;
    return ch == LoopChannel::uw ? T_uw : cv.G1w + cv.G1 * T_uw;
}

Complex weight_Wu_freq(double omega) {
    const Complex jw(0.0, omega);
    return 1e4 * jw / (jw + 2e5);
}

// ---------------------------------------------------------------------------
// Nyquist certificate
// ---------------------------------------------------------------------------

Certificate nyquist_certify(const XferParams& plant, const Controller& K) {
    if (K.order() > 0 && !(spectral_abscissa(K.ss.A) < 0.0))
        throw UnstableController(
            "nyquist_certify: controller realization is unstable");

    const auto [R, w_d] = detail::stabilized_radius_and_winding(plant);
    const int n_p = -w_d;
    if (n_p < 0)
        throw RadiusTooSmall("nyquist_certify: negative unstable-pole count");

    auto f = [&](Complex s) -> detail::ArgLog {
        const ChannelValues cv = eval_channels(plant, s);
        const LoopGains kg = controller_gains(K, s);
        const Complex F = 1.0 + kg.K1 * cv.G1 + kg.K2 * cv.G2;
        return {std::arg(F), std::log(std::abs(F) +
                                      std::numeric_limits<double>::denorm_min())};
    };

    ContourSpec spec;
    spec.R = R;
    WindingResult wr;
    try {
        wr = detail::winding_closed_contour(f, spec, 1e-6);
    } catch (const ZeroCrossingOnContour& e) {
        throw ImageNearOrigin(std::string("nyquist_certify: ") + e.what());
    }

    Certificate cert;
    cert.kind = CertificateKind::nyquist_closed_loop;
    cert.computed = static_cast<double>(wr.winding);
    cert.threshold = static_cast<double>(n_p);
    cert.tolerance = 0.5;
    cert.pass = wr.winding == n_p;
    std::ostringstream os;
    os << plant_tag(plant) << " controller=" << K.name << " R=" << R
       << " min|F|=" << wr.min_modulus << " samples=" << wr.samples_used;
    cert.context = os.str();
    return cert;
}

// ---------------------------------------------------------------------------
// Performance certificates
// ---------------------------------------------------------------------------

namespace {

Certificate sector_core(const XferParams& nominal, const Controller& K,
                        const SectorBounds& sb, bool preconditions_ok) {
    Certificate cert;
    cert.kind = CertificateKind::sector_hinf;
    cert.threshold = 1.0 / sb.r;
    if (!preconditions_ok) {
        cert.computed = kNaN;
        cert.tolerance = 0.0;
        cert.pass = false;
        cert.context = plant_tag(nominal) + " controller=" + K.name +
                       " : winding precondition failed";
        return cert;
    }
    const XferParams shifted{nominal.q + sb.c, nominal.alpha, nominal.lambda};
    const NormResult nr = hinf_scalar_scan([&](double w) {
        return loop_tf(shifted, K, Complex(0.0, w), LoopChannel::ze);
    });
    cert.computed = nr.value;
    cert.tolerance = nr.tolerance + 1e-9;
    cert.pass = cert.margin() >= cert.tolerance;
    std::ostringstream os;
    os << plant_tag(nominal) << " controller=" << K.name << " shift_c=" << sb.c
       << " r=" << sb.r << " peak_at_omega=" << nr.argmax;
    cert.context = os.str();
    return cert;
}

}  // namespace

Certificate sector_certificate(const XferParams& nominal, const Controller& K,
                               const SectorBounds& sb) {
    const XferParams shifted{nominal.q + sb.c, nominal.alpha, nominal.lambda};
    const bool ok = nyquist_certify(nominal, K).pass &&
                    nyquist_certify(shifted, K).pass;
    return sector_core(nominal, K, sb, ok);
}

Certificate weight_certificate(const XferParams& nominal,
                               const Controller& K) {
    const NormResult nr = hinf_scalar_scan([&](double w) {
        return weight_Wu_freq(w) *
               loop_tf(nominal, K, Complex(0.0, w), LoopChannel::uw);
    });
    Certificate cert;
    cert.kind = CertificateKind::weight_bound;
    cert.computed = nr.value;
    cert.threshold = 1.0;
    cert.tolerance = nr.tolerance + 1e-9;
    cert.pass = cert.margin() >= cert.tolerance;
    std::ostringstream os;
    os << plant_tag(nominal) << " controller=" << K.name
       << " peak_at_omega=" << nr.argmax;
    cert.context = os.str();
    return cert;
}

StateSpace closed_channel(const XferParams& nominal, const Controller& K,
                          double shift_c, int N, const std::string& output) {
    const PlantChannels plant = discretize(nominal, N, shift_c);
    const StateSpace cl = close_loop(plant.ss, K);
    return minreal(channel_select(cl, {output}, {"w"}));
}

Certificate large_mag_certificate(const XferParams& nominal,
                                  const Controller& K, const SectorBounds& sb,
                                  const CertifyOptions& opts) {
    if (!sb.M_mag || !sb.L_mag)
        throw Error(
            "large_mag_certificate: sector bounds carry no large-magnitude "
            "data");
    const StateSpace ss = closed_channel(nominal, K, sb.c, opts.N, "z");
    const NormResult nr = peak_gain(ss);
    Certificate cert;
    cert.kind = CertificateKind::large_mag_pk;
    cert.computed = nr.value;
    cert.threshold = 1.0 / sb.r;
    cert.tolerance = nr.tolerance;
    cert.pass = cert.margin() >= cert.tolerance;
    std::ostringstream os;
    os << plant_tag(nominal) << " controller=" << K.name << " N=" << opts.N
       << " M_mag=" << *sb.M_mag << " L_mag=" << *sb.L_mag
       << " peak_at_t=" << nr.argmax;
    cert.context = os.str();
    return cert;
}

Certificate h2_certificate(const XferParams& nominal, const Controller& K,
                           const SectorBounds& sb,
                           const CertifyOptions& opts) {
    const StateSpace ss = closed_channel(nominal, K, sb.c, opts.N, "z");
    const NormResult nr = h2(ss);
    Certificate cert;
    cert.kind = CertificateKind::h2_surrogate;
    cert.computed = nr.value;
    cert.threshold = opts.rho;
    cert.tolerance = nr.tolerance + 1e-9;
    cert.pass = cert.margin() >= cert.tolerance;
    std::ostringstream os;
    os << plant_tag(nominal) << " controller=" << K.name << " N=" << opts.N
       << " shift_c=" << sb.c;
    cert.context = os.str();
    return cert;
}

std::vector<Certificate> certificate_bundle(const XferParams& nominal,
                                            const Controller& K,
                                            const SectorBounds& sb,
                                            const CertifyOptions& opts) {
    std::vector<Certificate> out;
    const XferParams shifted{nominal.q + sb.c, nominal.alpha, nominal.lambda};
    out.push_back(nyquist_certify(nominal, K));
    out.push_back(nyquist_certify(shifted, K));
    const bool ok = out[0].pass && out[1].pass;
    out.push_back(sector_core(nominal, K, sb, ok));
    out.push_back(weight_certificate(nominal, K));
    if (sb.M_mag && sb.L_mag)
        out.push_back(large_mag_certificate(nominal, K, sb, opts));
    out.push_back(h2_certificate(nominal, K, sb, opts));
    return out;
}

}  // namespace wavectl
