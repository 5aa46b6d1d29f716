#include "qcav/cli/run.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcav/cli/commands.hpp"
#include "qcav/cli/config.hpp"

#ifndef QCAV_VERSION
#define QCAV_VERSION "0.0.0"
#endif

namespace qcav::cli {

const char* version() { return QCAV_VERSION; }

namespace {

Json load_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot read configuration '" + path + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw ConfigurationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

int execute(const std::string& command, CommandFn fn, const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, const std::string& format, std::ostream& out) {
    RunConfig cfg = parse_run_config(load_json(config_path), command);
    if (seed) {
        cfg.seed = *seed;
    }
    if (!format.empty()) {
        cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    }
    CommandContext ctx;
    ctx.out_dir = out_dir;
    ctx.seed = cfg.seed;
    ctx.format = cfg.format;
    ctx.log = &out;
    ctx.on_resolved = [&](const OrderedJson& resolved) {
        OrderedJson manifest;
        manifest["version"] = version();
        manifest["command"] = command;
        manifest["seed"] = cfg.seed;
        manifest["format"] = cfg.format == OutputFormat::json ? "json" : "csv";
        manifest[command] = resolved;
        write_file(ctx.out_dir, "manifest.json", manifest.dump(2) + "\n");
    };
    fn(cfg.block, ctx);
    out << command << ": outputs written to " << ctx.out_dir.string() << "\n";
    return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cavity-QED and microtubule-cavity simulation toolkit", "qcav"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::string format;
    for (const auto& [name, fn] : command_table()) {
        CLI::App* sub = app.add_subcommand(name, "run the " + name + " command");
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "base seed, overrides the file");
        sub->add_option("--format", format, "tabular output format")->check(CLI::IsMember({"csv", "json"}));
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    for (const auto& [name, fn] : command_table()) {
        if (!app.got_subcommand(name)) {
            continue;
        }
        try {
            return execute(name, fn, config_path, out_dir, seed, format, out);
        } catch (const IoError& e) {
            err << "I/O error: " << e.what() << "\n";
            return exit_io;
        } catch (const std::filesystem::filesystem_error& e) {
            err << "I/O error: " << e.what() << "\n";
            return exit_io;
        } catch (const NumericalError& e) {
            err << "numerical error: " << e.what() << "\n";
            return exit_numerical;
        } catch (const Error& e) {
            err << "configuration error: " << e.what() << "\n";
            return exit_config;
        } catch (const Json::exception& e) {
            err << "configuration error: " << e.what() << "\n";
            return exit_config;
        } catch (const std::exception& e) {
            err << "internal error: " << e.what() << "\n";
            return exit_internal;
        }
    }
    return exit_config;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

}  // namespace qcav::cli
