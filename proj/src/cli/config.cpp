#include "qcav/cli/config.hpp"

#include <cmath>

#include "qcav/errors.hpp"

namespace qcav::cli {

BlockReader::BlockReader(const Json& block, std::string path) : block_(block), path_(std::move(path)) {
    if (!block_.is_object()) {
        throw ConfigurationError("'" + path_ + "' must be a JSON object");
    }
}

bool BlockReader::has(const std::string& key) const { return block_.contains(key); }

std::string BlockReader::key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

const Json& BlockReader::require(const std::string& key) {
    if (!block_.contains(key)) {
        throw ConfigurationError("'" + key_path(key) + "' is required");
    }
    consumed_.insert(key);
    return block_.at(key);
}

double BlockReader::read_quantity(const Json& v, Dimension d, const std::string& where) const {
    if (v.is_string()) {
        return parse_quantity(v.get<std::string>(), d, where);
    }
    if (v.is_number() && d == Dimension::dimensionless) {
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            throw ConfigurationError("'" + where + "' must be finite");
        }
        return x;
    }
    if (v.is_number()) {
        throw ConfigurationError("'" + where + "' needs an explicit unit, e.g. \"" + std::to_string(v.get<double>()) +
                                 " " + canonical_unit(d) + "\"");
    }
    throw ConfigurationError("'" + where + "' must be a quantity string");
}

double BlockReader::quantity(const std::string& key, Dimension d) {
    const double x = read_quantity(require(key), d, key_path(key));
    resolved_[key] = format_quantity(x, d);
    return x;
}

double BlockReader::quantity(const std::string& key, Dimension d, double fallback) {
    if (has(key)) {
        return quantity(key, d);
    }
    resolved_[key] = format_quantity(fallback, d);
    return fallback;
}

std::optional<double> BlockReader::optional_quantity(const std::string& key, Dimension d) {
    if (!has(key) || block_.at(key).is_null()) {
        consumed_.insert(key);
        resolved_[key] = nullptr;
        return std::nullopt;
    }
    return quantity(key, d);
}

std::vector<double> BlockReader::quantity_list(const std::string& key, Dimension d) {
    const Json& v = require(key);
    if (!v.is_array()) {
        throw ConfigurationError("'" + key_path(key) + "' must be an array");
    }
    std::vector<double> out;
    OrderedJson r = OrderedJson::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(read_quantity(v[i], d, key_path(key) + "[" + std::to_string(i) + "]"));
        r.push_back(format_quantity(out.back(), d));
    }
    resolved_[key] = std::move(r);
    return out;
}

double BlockReader::number(const std::string& key) {
    const double x = read_quantity(require(key), Dimension::dimensionless, key_path(key));
    resolved_[key] = x;
    return x;
}

double BlockReader::number(const std::string& key, double fallback) {
    if (has(key)) {
        return number(key);
    }
    resolved_[key] = fallback;
    return fallback;
}

std::optional<double> BlockReader::optional_number(const std::string& key) {
    if (!has(key) || block_.at(key).is_null()) {
        consumed_.insert(key);
        resolved_[key] = nullptr;
        return std::nullopt;
    }
    return number(key);
}

long long BlockReader::integer(const std::string& key, long long min_value) {
    const Json& v = require(key);
    if (!v.is_number_integer()) {
        throw ConfigurationError("'" + key_path(key) + "' must be an integer");
    }
    const long long x = v.get<long long>();
    if (x < min_value) {
        throw ConfigurationError("'" + key_path(key) + "' must be >= " + std::to_string(min_value));
    }
    resolved_[key] = x;
    return x;
}

long long BlockReader::integer(const std::string& key, long long fallback, long long min_value) {
    if (has(key)) {
        return integer(key, min_value);
    }
    resolved_[key] = fallback;
    return fallback;
}

std::vector<long long> BlockReader::integer_list(const std::string& key, long long min_value) {
    const Json& v = require(key);
    if (!v.is_array() || v.empty()) {
        throw ConfigurationError("'" + key_path(key) + "' must be a non-empty array of integers");
    }
    std::vector<long long> out;
    for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<long long>() < min_value) {
            throw ConfigurationError("'" + key_path(key) + "' entries must be integers >= " +
                                     std::to_string(min_value));
        }
        out.push_back(e.get<long long>());
    }
    resolved_[key] = out;
    return out;
}

bool BlockReader::boolean(const std::string& key, bool fallback) {
    bool x = fallback;
    if (has(key)) {
        const Json& v = require(key);
        if (!v.is_boolean()) {
            throw ConfigurationError("'" + key_path(key) + "' must be true or false");
        }
        x = v.get<bool>();
    }
    resolved_[key] = x;
    return x;
}

std::string BlockReader::choice(const std::string& key, const std::vector<std::string>& allowed) {
    const Json& v = require(key);
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        for (const auto& a : allowed) {
            if (s == a) {
                resolved_[key] = s;
                return s;
            }
        }
    }
    std::string list;
    for (const auto& a : allowed) {
        list += (list.empty() ? "" : ", ") + a;
    }
    throw ConfigurationError("'" + key_path(key) + "' must be one of: " + list);
}

std::string BlockReader::choice(const std::string& key, const std::vector<std::string>& allowed,
                                 const std::string& fallback) {
    if (has(key)) {
        return choice(key, allowed);
    }
    resolved_[key] = fallback;
    return fallback;
}

std::vector<std::string> BlockReader::string_list(const std::string& key) {
    const Json& v = require(key);
    if (!v.is_array()) {
        throw ConfigurationError("'" + key_path(key) + "' must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            throw ConfigurationError("'" + key_path(key) + "' must be an array of strings");
        }
        out.push_back(e.get<std::string>());
    }
    resolved_[key] = out;
    return out;
}

void BlockReader::nested(const std::string& key, const std::function<void(BlockReader&)>& read, bool required) {
    static const Json empty = Json::object();
    const Json& v = (!required && !has(key)) ? empty : require(key);
    consumed_.insert(key);
    BlockReader child(v, key_path(key));
    read(child);
    child.finish();
    resolved_[key] = child.resolved();
}

void BlockReader::nested_list(const std::string& key, const std::function<void(BlockReader&)>& read,
                              bool required) {
    static const Json empty = Json::array();
    const Json& v = (!required && !has(key)) ? empty : require(key);
    consumed_.insert(key);
    if (!v.is_array()) {
        throw ConfigurationError("'" + key_path(key) + "' must be an array");
    }
    OrderedJson r = OrderedJson::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        BlockReader child(v[i], key_path(key) + "[" + std::to_string(i) + "]");
        read(child);
        child.finish();
        r.push_back(child.resolved());
    }
    resolved_[key] = std::move(r);
}

void BlockReader::finish() const {
    for (auto it = block_.begin(); it != block_.end(); ++it) {
        if (!consumed_.count(it.key())) {
            throw ConfigurationError("unknown key '" + key_path(it.key()) + "'");
        }
    }
}

RunConfig parse_run_config(const Json& doc, const std::string& command) {
    if (!doc.is_object()) {
        throw ConfigurationError("configuration root must be a JSON object");
    }
    RunConfig cfg;
    cfg.command = command;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& k = it.key();
        const Json& v = it.value();
        if (k == "command") {
            if (!v.is_string() || v.get<std::string>() != command) {
                throw ConfigurationError("'command' in the file does not match subcommand '" + command + "'");
            }
        } else if (k == "version") {
            if (!v.is_string()) {
                throw ConfigurationError("'version' must be a string");
            }
        } else if (k == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                throw ConfigurationError("'seed' must be a non-negative integer");
            }
            cfg.seed = v.get<std::uint64_t>();
        } else if (k == "format") {
            if (v == "csv") {
                cfg.format = OutputFormat::csv;
            } else if (v == "json") {
                cfg.format = OutputFormat::json;
            } else {
                throw ConfigurationError("'format' must be \"csv\" or \"json\"");
            }
        } else if (k != command) {
            throw ConfigurationError("unknown key '" + k + "'");
        }
    }
    if (!doc.contains(command)) {
        throw ConfigurationError("'" + command + "' block is required");
    }
    cfg.block = doc.at(command);
    return cfg;
}

}  // namespace qcav::cli
