#pragma once

#include <optional>
#include <string>

#include "qmodes/dispersion.hpp"

namespace qmodes {

enum class ProcessKind { SPA_PDC, SPS_SFG };
enum class NonlinearType { Type0, TypeI, TypeII };

std::string to_string(ProcessKind kind);
std::string to_string(NonlinearType type);
ProcessKind process_kind_from_string(const std::string& s);
NonlinearType nonlinear_type_from_string(const std::string& s);

struct FieldSpec {
    std::string role;          // signal, idler, pump, gate, upconverted
    std::string polarization;  // H / V
    double wavelength_m = 0.0;
    IndexModel index = constant_index_set(1.5);

    double omega() const;
};

// Field assignment:
//   SPA_PDC  signal + partner(idler)      <- drive(pump)
//   SPS_SFG  signal + drive(gate)         -> partner(up-converted)
// The second grid axis always runs over the partner field.
struct ProcessSpec {
    ProcessKind kind = ProcessKind::SPA_PDC;
    NonlinearType nl_type = NonlinearType::Type0;
    double length_m = 0.0;
    FieldSpec signal;
    FieldSpec partner;
    FieldSpec drive;
    std::optional<double> poling_period_m;
    int poling_sign = +1;  // grating term is -poling_sign * 2 pi / period
};

// Energy conservation at the centres, L > 0, period > 0.
void validate(const ProcessSpec& spec);

// omega_a = signal, omega_b = partner (idler for SPA, up-converted for SPS).
double delta_k(const ProcessSpec& spec, double omega_a, double omega_b);
double unpoled_delta_k(const ProcessSpec& spec, double omega_a, double omega_b);

enum class PolingStatus { Solved, AlreadyPhaseMatched };

struct PolingResult {
    PolingStatus status = PolingStatus::Solved;
    double delta_k0 = 0.0;  // unpoled mismatch at the centres, rad/m
    double period_m = 0.0;  // 0 when already phase-matched
    int sign = +1;
};

inline constexpr double kPhaseMatchedThreshold = 1e-3;  // rad/m

PolingResult solve_poling(const ProcessSpec& spec);
// Copy of spec with the solved grating applied (or removed when already matched).
ProcessSpec apply_poling(const ProcessSpec& spec, const PolingResult& result);
ProcessSpec with_solved_poling(const ProcessSpec& spec);

// sin(x)/x with sinc(0) = 1.
double sinc(double x);

double phasematching_function(const ProcessSpec& spec, double omega_a, double omega_b);

}  // namespace qmodes
