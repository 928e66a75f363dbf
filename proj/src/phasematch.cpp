#include "qmodes/phasematch.hpp"

#include <cmath>

#include "qmodes/errors.hpp"
#include "qmodes/units.hpp"

namespace qmodes {

std::string to_string(ProcessKind kind) {
    return kind == ProcessKind::SPA_PDC ? "SPA_PDC" : "SPS_SFG";
}

std::string to_string(NonlinearType type) {
    switch (type) {
        case NonlinearType::Type0: return "Type0";
        case NonlinearType::TypeI: return "TypeI";
        case NonlinearType::TypeII: return "TypeII";
    }
    return "?";
}

ProcessKind process_kind_from_string(const std::string& s) {
    if (s == "SPA_PDC" || s == "SPA") return ProcessKind::SPA_PDC;
    if (s == "SPS_SFG" || s == "SPS") return ProcessKind::SPS_SFG;
    throw ConfigError("unknown process kind '" + s + "'");
}

NonlinearType nonlinear_type_from_string(const std::string& s) {
    if (s == "Type0" || s == "0") return NonlinearType::Type0;
    if (s == "TypeI" || s == "I") return NonlinearType::TypeI;
    if (s == "TypeII" || s == "II") return NonlinearType::TypeII;
    throw ConfigError("unknown nonlinear type '" + s + "'");
}

double FieldSpec::omega() const { return omega_from_wavelength(wavelength_m); }

void validate(const ProcessSpec& spec) {
    if (!(spec.length_m > 0.0)) throw ConfigError("process length must be positive");
    if (spec.poling_period_m && !(*spec.poling_period_m > 0.0))
        throw ConfigError("poling period must be positive");
    if (spec.poling_sign != 1 && spec.poling_sign != -1)
        throw ConfigError("poling sign must be +1 or -1");
    for (const FieldSpec* f : {&spec.signal, &spec.partner, &spec.drive})
        if (!(f->wavelength_m > 0.0))
            throw ConfigError("field '" + f->role + "' needs a positive central wavelength");
    const double ws = spec.signal.omega(), wb = spec.partner.omega(), wd = spec.drive.omega();
    const double lhs = spec.kind == ProcessKind::SPA_PDC ? wd : wb;
    const double rhs = spec.kind == ProcessKind::SPA_PDC ? ws + wb : ws + wd;
    if (std::abs(lhs - rhs) > 1e-12 * lhs)
        throw ConfigError("central frequencies violate energy conservation for " +
                          to_string(spec.kind));
}

double unpoled_delta_k(const ProcessSpec& spec, double omega_a, double omega_b) {
    if (spec.kind == ProcessKind::SPA_PDC) {
        return wavevector(spec.signal.index, omega_a) + wavevector(spec.partner.index, omega_b) -
               wavevector(spec.drive.index, omega_a + omega_b);
    }
    const double gate = omega_b - omega_a;
    if (!(gate > 0.0))
        throw DomainError("up-converted frequency below signal frequency (negative gate frequency)");
    return wavevector(spec.signal.index, omega_a) + wavevector(spec.drive.index, gate) -
           wavevector(spec.partner.index, omega_b);
}

double delta_k(const ProcessSpec& spec, double omega_a, double omega_b) {
    double dk = unpoled_delta_k(spec, omega_a, omega_b);
    if (spec.poling_period_m) dk -= spec.poling_sign * 2.0 * kPi / *spec.poling_period_m;
    return dk;
}

PolingResult solve_poling(const ProcessSpec& spec) {
    validate(spec);
    PolingResult r;
    r.delta_k0 = unpoled_delta_k(spec, spec.signal.omega(), spec.partner.omega());
    if (std::abs(r.delta_k0) < kPhaseMatchedThreshold) {
        r.status = PolingStatus::AlreadyPhaseMatched;
        return r;
    }
    r.sign = r.delta_k0 > 0.0 ? +1 : -1;
    r.period_m = 2.0 * kPi / std::abs(r.delta_k0);
    return r;
}

ProcessSpec apply_poling(const ProcessSpec& spec, const PolingResult& result) {
    ProcessSpec out = spec;
    if (result.status == PolingStatus::AlreadyPhaseMatched) {
        out.poling_period_m.reset();
        out.poling_sign = +1;
    } else {
        out.poling_period_m = result.period_m;
        out.poling_sign = result.sign;
    }
    return out;
}

ProcessSpec with_solved_poling(const ProcessSpec& spec) {
    return apply_poling(spec, solve_poling(spec));
}

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double phasematching_function(const ProcessSpec& spec, double omega_a, double omega_b) {
    return sinc(0.5 * spec.length_m * delta_k(spec, omega_a, omega_b));
}

}  // namespace qmodes
