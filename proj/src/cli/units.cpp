#include "qcav/cli/units.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "qcav/errors.hpp"
#include "qcav/mtparams.hpp"

namespace qcav::cli {

namespace {

struct UnitEntry {
    const char* symbol;
    Dimension dimension;
    double factor;
};

constexpr UnitEntry unit_table[] = {
    {"s", Dimension::time, 1.0},
    {"rad/s", Dimension::frequency, 1.0},
    {"1/s", Dimension::frequency, 1.0},
    {"Hz", Dimension::frequency, 2.0 * std::numbers::pi},
    {"m", Dimension::length, 1.0},
    {"m/s", Dimension::velocity, 1.0},
    {"1/m", Dimension::inverse_length, 1.0},
    {"m3", Dimension::volume, 1.0},
    {"J", Dimension::energy, 1.0},
    {"eV", Dimension::energy, mt::codata.e_charge},
    {"meV", Dimension::energy, 1e-3 * mt::codata.e_charge},
    {"V/m", Dimension::field, 1.0},
    {"K", Dimension::temperature, 1.0},
    {"C*m", Dimension::dipole, 1.0},
    {"kg*m2", Dimension::inertia, 1.0},
};

std::string dimension_name(Dimension d) {
    switch (d) {
        case Dimension::dimensionless:
            return "dimensionless";
        case Dimension::time:
            return "time";
        case Dimension::frequency:
            return "frequency";
        case Dimension::length:
            return "length";
        case Dimension::velocity:
            return "velocity";
        case Dimension::inverse_length:
            return "inverse length";
        case Dimension::volume:
            return "volume";
        case Dimension::energy:
            return "energy";
        case Dimension::field:
            return "electric field";
        case Dimension::temperature:
            return "temperature";
        case Dimension::dipole:
            return "dipole moment";
        case Dimension::inertia:
            return "moment of inertia";
    }
    return "unknown";
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string canonical_unit(Dimension d) {
    switch (d) {
        case Dimension::dimensionless:
            return "";
        case Dimension::time:
            return "s";
        case Dimension::frequency:
            return "rad/s";
        case Dimension::length:
            return "m";
        case Dimension::velocity:
            return "m/s";
        case Dimension::inverse_length:
            return "1/m";
        case Dimension::volume:
            return "m3";
        case Dimension::energy:
            return "J";
        case Dimension::field:
            return "V/m";
        case Dimension::temperature:
            return "K";
        case Dimension::dipole:
            return "C*m";
        case Dimension::inertia:
            return "kg*m2";
    }
    return "";
}

double parse_quantity(const std::string& text, Dimension expected, const std::string& key) {
    const std::string s = trim(text);
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || errno == ERANGE || !std::isfinite(value)) {
        throw ConfigurationError("'" + key + "': malformed number in \"" + text + "\"");
    }
    const std::string unit = trim(std::string(end));
    if (expected == Dimension::dimensionless) {
        if (!unit.empty()) {
            throw ConfigurationError("'" + key + "': expected a dimensionless number, got unit \"" + unit + "\"");
        }
        return value;
    }
    if (unit.empty()) {
        throw ConfigurationError("'" + key + "': missing unit in \"" + text + "\" (expected " +
                                 dimension_name(expected) + ", e.g. \"" + canonical_unit(expected) + "\")");
    }
    for (const auto& u : unit_table) {
        if (unit == u.symbol) {
            if (u.dimension != expected) {
                throw ConfigurationError("'" + key + "': unit \"" + unit + "\" is a " + dimension_name(u.dimension) +
                                         ", expected " + dimension_name(expected));
            }
            return value * u.factor;
        }
    }
    throw ConfigurationError("'" + key + "': unknown unit \"" + unit + "\"");
}

std::string format_quantity(double si_value, Dimension d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", si_value);
    std::string out(buf);
    if (d != Dimension::dimensionless) {
        out += ' ';
        out += canonical_unit(d);
    }
    return out;
}

}  // namespace qcav::cli
