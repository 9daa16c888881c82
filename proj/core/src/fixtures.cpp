// =============================================================================
// wavectl - fixtures implementation
// =============================================================================

#include "wavectl/fixtures.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wavectl/errors.hpp"

namespace wavectl::fixtures {

namespace {

/// Rig constants shared by all five scenarios.
ScenarioParams shared_base() {
    ScenarioParams sp;
    sp.G_shear = 79.3e9;
    sp.J_geom = 1.19e-5;
    sp.I_string = 0.095;
    sp.Omega = 10.0;
    sp.c_a = 2000.0;
    sp.mu_sb = 0.8;
    sp.mu_cb = 0.5;
    sp.nu_f = 1.0;
    sp.c_b = 0.03;
    return sp;
}

}  // namespace

std::vector<std::string> scenario_names() {
    return {"gray", "blue", "magenta", "red", "green"};
}

ScenarioParams scenario(const std::string& name) {
    ScenarioParams sp = shared_base();
    sp.name = name;
    if (name == "gray") {
        sp.I_bit = 89.0;
        sp.L = 1172.0;
        sp.beta = 0.1;
        sp.W_ob = 97347.0;
        // Bit radius consistent with the published derived (q, p) pair: the
        // flat value 0.155575 reproduces neither.
        sp.R_b = 0.18202275;
        sp.gamma_b = 0.9;
    } else if (name == "blue") {
        sp.I_bit = 35.6;
        sp.L = 2050.0;
        sp.beta = 0.16;
        sp.W_ob = 146020.5;
        sp.R_b = 0.18202275;
        sp.gamma_b = 0.1;
    } else if (name == "magenta") {
        sp.I_bit = 35.6;
        sp.L = 1172.0;
        sp.beta = 0.5;
        sp.beta_alt = 0.01;
        sp.W_ob = 146020.5;
        sp.R_b = 0.2022475;
        sp.gamma_b = 0.1;
    } else if (name == "red") {
        sp.I_bit = 35.6;
        sp.L = 2050.0;
        sp.beta = 0.01;
        sp.beta_alt = 0.1;
        sp.W_ob = 146020.5;
        sp.R_b = 0.2333625;
        sp.gamma_b = 0.1;
    } else if (name == "green") {
        sp.I_bit = 89.0;
        sp.L = 1172.0;
        sp.beta = 0.02;
        sp.W_ob = 146020.5;
        sp.R_b = 0.2022475;
        sp.gamma_b = 0.1;
    } else {
        throw Error("fixtures: unknown scenario '" + name + "'");
    }
    sp.validate();
    return sp;
}

namespace {

Controller make_controller(const std::string& name,
                           std::initializer_list<double> a,
                           std::initializer_list<double> b,
                           std::initializer_list<double> c,
                           std::initializer_list<double> d) {
    Controller K;
    K.name = name;
    K.ss.A.resize(5, 5);
    int i = 0;
    for (double v : a) K.ss.A(i / 5, i % 5) = v, ++i;
    K.ss.B.resize(5, 2);
    i = 0;
    for (double v : b) K.ss.B(i / 2, i % 2) = v, ++i;
    K.ss.C.resize(1, 5);
    i = 0;
    for (double v : c) K.ss.C(0, i++) = v;
    K.ss.D.resize(1, 2);
    i = 0;
    for (double v : d) K.ss.D(0, i++) = v;
    K.ss.input_labels = {"y1", "y2"};
    K.ss.output_labels = {"u"};
    K.ss.validate();
    return K;
}

}  // namespace

Controller K_gray() {
    return make_controller(
        "K_gray",
        {-0.80046, -7.7472,  0.0,     0.0,     0.0,      //
         -1.9826,  -16.5346, 41.59,   0.0,     0.0,      //
         0.0,      -1.103,   -2.6164, 14.2226, 0.0,      //
         0.0,      0.0,      -2.5597, -2.6421, 6.1304,   //
         0.0,      0.0,      0.0,     3.2099,  -174.8766},
        {-13.0415, 11.9996,   //
         -25.1033, 11.7281,   //
         -12.39,   0.012639,  //
         2.1379,   0.89566,   //
         0.90446,  -2.2903},
        {0.044385, 0.23863, -1.6385, 0.48079, 2.0247},
        {-2.0699e-5, 5.7173e-6});
}

Controller K_blue() {
    return make_controller(
        "K_blue",
        {-0.61907, -1.1401,  0.0,      0.0,      0.0,      //
         16.7706,  -4.1928,  -1.523,   0.0,      0.0,      //
         0.0,      8.1615,   -6.3251,  -1.5961,  0.0,      //
         0.0,      0.0,      -1.7351,  -27.1582, -4.1308,  //
         0.0,      0.0,      0.0,      -17.2811, -83.1511},
        {0.25637,  0.17058,   //
         -1.2753,  0.43077,   //
         -0.40252, -0.56916,  //
         -1.3393,  5.0511,    //
         5.0909,   3.4138},
        {-11.1263, 3.7925, -1.4411, -2.7711, 3.9251},
        {-9.9964e-5, -2.355e-6});
}

std::pair<double, double> published_sector(const std::string& name) {
    if (name == "gray") return {-4.8, 0.48};
    if (name == "blue") return {-3.0, -0.1};
    throw Error("fixtures: no published sector for scenario '" + name + "'");
}

// ---------------------------------------------------------------------------
// Scenario JSON
// ---------------------------------------------------------------------------

std::string scenario_to_json(const ScenarioParams& sp) {
    nlohmann::json j;
    j["name"] = sp.name;
    j["G_shear"] = sp.G_shear;
    j["J_geom"] = sp.J_geom;
    j["I_string"] = sp.I_string;
    j["I_bit"] = sp.I_bit;
    j["L"] = sp.L;
    j["Omega"] = sp.Omega;
    j["c_a"] = sp.c_a;
    j["beta"] = sp.beta;
    j["W_ob"] = sp.W_ob;
    j["R_b"] = sp.R_b;
    j["mu_sb"] = sp.mu_sb;
    j["mu_cb"] = sp.mu_cb;
    j["gamma_b"] = sp.gamma_b;
    j["nu_f"] = sp.nu_f;
    j["c_b"] = sp.c_b;
    if (sp.beta_alt) j["beta_alt"] = *sp.beta_alt;
    return j.dump(2);
}

ScenarioParams scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("scenario JSON parse failure: ") + e.what());
    }
    ScenarioParams sp;
    try {
        sp.name = j.value("name", "");
        sp.G_shear = j.at("G_shear").get<double>();
        sp.J_geom = j.at("J_geom").get<double>();
        sp.I_string = j.at("I_string").get<double>();
        sp.I_bit = j.at("I_bit").get<double>();
        sp.L = j.at("L").get<double>();
        sp.Omega = j.at("Omega").get<double>();
        sp.c_a = j.at("c_a").get<double>();
        sp.beta = j.at("beta").get<double>();
        sp.W_ob = j.at("W_ob").get<double>();
        sp.R_b = j.at("R_b").get<double>();
        sp.mu_sb = j.at("mu_sb").get<double>();
        sp.mu_cb = j.at("mu_cb").get<double>();
        sp.gamma_b = j.at("gamma_b").get<double>();
        sp.nu_f = j.at("nu_f").get<double>();
        sp.c_b = j.at("c_b").get<double>();
        if (j.contains("beta_alt")) sp.beta_alt = j["beta_alt"].get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("scenario JSON field error: ") + e.what());
    }
    sp.validate();
    return sp;
}

ScenarioParams scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("scenario_from_file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

}  // namespace wavectl::fixtures
