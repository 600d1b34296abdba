#ifndef SPHD_SERIALIZATION_HPP
#define SPHD_SERIALIZATION_HPP

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sphd/asymptotics.hpp"
#include "sphd/designs.hpp"
#include "sphd/energy.hpp"
#include "sphd/errors.hpp"
#include "sphd/kernels.hpp"

namespace sphd {

using json = nlohmann::json;

inline const char* to_string(EnergyKind k) { return k == EnergyKind::log ? "log" : "riesz"; }
inline const char* to_string(KernelKind k) { return k == KernelKind::log ? "log" : "riesz"; }

inline EnergyKind energy_kind_from_string(const std::string& s) {
    if (s == "log") return EnergyKind::log;
    if (s == "riesz") return EnergyKind::riesz;
    throw invalid_input("unknown energy kind '" + s + "' (expected log or riesz)");
}

// shortest round-trip decimal; CSV cells and JSON agree on the exact value
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json to_json(const KernelCoefficients& K) {
    json j;
    j["kind"] = to_string(K.kind);
    if (K.kind == KernelKind::riesz) j["s"] = K.s;
    j["lambda"] = K.lambda;
    j["d"] = K.d;
    j["nmax"] = K.nmax;
    if (K.kind == KernelKind::log) {
        j["constant_term"] = K.constant_term;
        j["constant_truncation_estimate"] = K.constant_truncation_estimate;
    }
    j["coefficients"] = K.coefficients;
    return j;
}

inline KernelCoefficients kernel_from_json(const json& j) {
    KernelCoefficients K;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "riesz") {
        K.kind = KernelKind::riesz;
        K.s = j.at("s").get<double>();
    } else if (kind == "log") {
        K.kind = KernelKind::log;
        K.constant_term = j.at("constant_term").get<double>();
        K.constant_truncation_estimate = j.at("constant_truncation_estimate").get<double>();
    } else {
        throw invalid_input("kernel_from_json: unknown kind '" + kind + "'");
    }
    K.lambda = j.at("lambda").get<double>();
    K.d = j.at("d").get<int>();
    K.nmax = j.at("nmax").get<int>();
    K.coefficients = j.at("coefficients").get<std::vector<double>>();
    if (K.coefficients.size() != static_cast<std::size_t>(K.nmax) + 1)
        throw invalid_input("kernel_from_json: coefficient count does not match nmax");
    return K;
}

inline json to_json(const EnergyReport& r) {
    json j;
    j["kind"] = to_string(r.kind);
    if (r.kind == EnergyKind::riesz) j["s"] = r.s;
    j["value"] = r.value;
    j["N"] = r.N;
    j["d"] = r.d;
    j["method"] = r.method;
    j["deterministic"] = r.deterministic;
    j["min_separation"] = r.min_separation;
    return j;
}

inline json to_json(const DesignCertificate& c) {
    json j;
    j["t"] = c.t;
    j["per_degree_residuals"] = c.per_degree_residuals;
    j["total_residual"] = c.total_residual;
    j["min_separation"] = c.min_separation;
    j["separation_constant"] = c.separation_constant;
    j["verdict"] = c.verdict ? "pass" : "fail";
    j["tolerance"] = c.tolerance;
    j["monomial_checks"] = c.monomial_checks;
    j["monomial_max_error"] = c.monomial_max_error;
    return j;
}

inline json to_json(const AsymptoticPrediction& p) {
    json j;
    j["kind"] = to_string(p.kind);
    if (p.kind == EnergyKind::riesz) j["s"] = p.s;
    j["N"] = p.N;
    j["d"] = p.d;
    if (p.t >= 0) j["t"] = p.t;
    j["leading_term"] = p.leading_term;
    j["second_term"] = p.second_term;
    j["predicted"] = p.predicted;
    j["remainder_order"] = p.remainder_order;
    j["bound_only"] = p.bound_only;
    return j;
}

inline json to_json(const FitResult& f) {
    json j;
    j["exponent"] = f.exponent;
    j["intercept"] = f.intercept;
    j["r_squared"] = f.r_squared;
    j["count"] = f.count;
    return j;
}

inline json to_json(const SweepRecord& r) {
    json j;
    j["t"] = r.t;
    j["N"] = r.N;
    j["d"] = r.d;
    j["kind"] = to_string(r.kind);
    j["s"] = r.s;
    j["measured"] = r.measured;
    j["leading"] = r.leading;
    j["second"] = r.second;
    j["residual"] = r.residual;
    j["min_separation"] = r.min_separation;
    j["source"] = r.source;
    j["ok"] = r.ok;
    if (!r.ok) j["error"] = r.error;
    return j;
}

inline json to_json(const std::vector<SweepRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    return arr;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::string out = "t,N,d,kind,s,measured,leading,second,residual,min_separation,source\n";
    for (const auto& r : records) {
        out += std::to_string(r.t) + ',' + std::to_string(r.N) + ',' + std::to_string(r.d) +
               ',' + to_string(r.kind) + ',' + format_double(r.s) + ',';
        if (r.ok) {
            out += format_double(r.measured) + ',' + format_double(r.leading) + ',' +
                   format_double(r.second) + ',' + format_double(r.residual) + ',' +
                   format_double(r.min_separation) + ',';
        } else {
            out += ",,,,,";   // failed record: measurement cells stay empty
        }
        out += csv_escape(r.ok ? r.source : r.source + " [error: " + r.error + "]");
        out += '\n';
    }
    return out;
}

inline std::string fit_csv(const FitResult& f) {
    return "exponent,intercept,r_squared,count\n" + format_double(f.exponent) + ',' +
           format_double(f.intercept) + ',' + format_double(f.r_squared) + ',' +
           std::to_string(f.count) + '\n';
}

} // namespace sphd

#endif
