#pragma once

// JSON run configuration. Every block is read through a BlockReader, which
// converts unit strings to SI, fills defaults, rejects unknown keys and keeps
// a resolved copy for the run manifest.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcav/cli/units.hpp"

namespace qcav::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

class BlockReader {
public:
    BlockReader(const Json& block, std::string path);

    bool has(const std::string& key) const;

    double quantity(const std::string& key, Dimension d);
    double quantity(const std::string& key, Dimension d, double fallback);
    std::optional<double> optional_quantity(const std::string& key, Dimension d);
    std::vector<double> quantity_list(const std::string& key, Dimension d);

    /// Dimensionless number; JSON numbers and unit-free strings both accepted.
    double number(const std::string& key);
    double number(const std::string& key, double fallback);
    std::optional<double> optional_number(const std::string& key);

    long long integer(const std::string& key, long long min_value);
    long long integer(const std::string& key, long long fallback, long long min_value);
    std::vector<long long> integer_list(const std::string& key, long long min_value);

    bool boolean(const std::string& key, bool fallback);
    std::string choice(const std::string& key, const std::vector<std::string>& allowed);
    std::string choice(const std::string& key, const std::vector<std::string>& allowed, const std::string& fallback);

    std::vector<std::string> string_list(const std::string& key);

    /// An absent optional block is read as {} so its defaults are still resolved.
    void nested(const std::string& key, const std::function<void(BlockReader&)>& read, bool required = true);
    /// An absent optional list is empty.
    void nested_list(const std::string& key, const std::function<void(BlockReader&)>& read, bool required = true);

    /// Throws ConfigurationError naming the first key that was never read.
    void finish() const;

    const OrderedJson& resolved() const { return resolved_; }
    const std::string& path() const { return path_; }

private:
    const Json& require(const std::string& key);
    std::string key_path(const std::string& key) const;
    double read_quantity(const Json& v, Dimension d, const std::string& where) const;

    const Json& block_;
    std::string path_;
    std::set<std::string> consumed_;
    OrderedJson resolved_ = OrderedJson::object();
};

enum class OutputFormat { csv, json };

/// Top level: {"command", "version"?, "seed"?, "format"?, <command block>}.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::csv;
    Json block;  ///< raw command block, read by the command
};

/// Parses and checks the top-level keys. `command` must match a "command" key
/// if the file has one. Throws ConfigurationError.
RunConfig parse_run_config(const Json& doc, const std::string& command);

}  // namespace qcav::cli
