#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qcav/cli/config.hpp"
#include "qcav/errors.hpp"
#include "qcav/mtparams.hpp"

namespace qcav::cli {

/// Output directory or file could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

struct CommandContext {
    std::filesystem::path out_dir;
    std::uint64_t seed = 0;
    OutputFormat format = OutputFormat::csv;
    /// Called once the block has been fully read and validated.
    std::function<void(const OrderedJson& resolved_block)> on_resolved;
    std::ostream* log = nullptr;
};

using CommandFn = void (*)(const Json& block, const CommandContext& ctx);

void cmd_spectrum(const Json& block, const CommandContext& ctx);
void cmd_evolve(const Json& block, const CommandContext& ctx);
void cmd_trajectories(const Json& block, const CommandContext& ctx);
void cmd_cat(const Json& block, const CommandContext& ctx);
void cmd_estimate(const Json& block, const CommandContext& ctx);
void cmd_hologram(const Json& block, const CommandContext& ctx);
void cmd_sweep(const Json& block, const CommandContext& ctx);

/// Names in command-line order, paired with their implementations.
const std::vector<std::pair<std::string, CommandFn>>& command_table();

/// Reads every MtParameterSet field (defaults where absent).
mt::MtParameterSet read_mt_parameters(BlockReader& r);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Header row, %.12g cells, '\n' line ends.
std::string table_to_csv(const Table& t);
/// {"columns": [...], "rows": [[...], ...]}.
OrderedJson table_to_json(const Table& t);

/// Writes bytes to out_dir/name, creating the directory. Throws IoError.
void write_file(const std::filesystem::path& out_dir, const std::string& name, const std::string& contents);

}  // namespace qcav::cli
