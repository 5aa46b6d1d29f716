#pragma once

// Quantity strings of the form "<number> <unit>", e.g. "4 meV", "1e-6 m".

#include <string>

namespace qcav::cli {

enum class Dimension {
    dimensionless,
    time,          // s
    frequency,     // rad/s, 1/s, Hz (x 2π)
    length,        // m
    velocity,      // m/s
    inverse_length,  // 1/m
    volume,        // m3
    energy,        // J, eV, meV
    field,         // V/m
    temperature,   // K
    dipole,        // C*m
    inertia,       // kg*m2
};

/// SI unit written back into resolved configurations.
std::string canonical_unit(Dimension d);

/// Parses `text` and converts to SI. Throws ConfigurationError naming `key`
/// on a missing, unknown or mismatched unit, or a malformed number.
double parse_quantity(const std::string& text, Dimension expected, const std::string& key);

/// "<value %.17g> <canonical unit>", which parses back to the same double.
std::string format_quantity(double si_value, Dimension d);

}  // namespace qcav::cli
