#include "rabi/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rabi::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Command command_from_name(const std::string& name) {
    if (name == "effective") return Command::Effective;
    if (name == "ed") return Command::Ed;
    if (name == "quench") return Command::Quench;
    if (name == "sweep") return Command::Sweep;
    if (name == "fit") return Command::Fit;
    if (name == "kzm") return Command::Kzm;
    throw UsageError("unknown command '" + name + "'; expected effective, ed, quench, sweep, fit or kzm");
}

struct RawText {
    std::string g;
    std::string ratio = "inf";
    std::string tauq;
    std::string window;
};

void add_options(CLI::App& app, Command command, RunConfig& cfg, RawText& raw) {
    app.add_option("-o,--output", cfg.output, "CSV output path (default: standard output)");
    app.add_option("--workers", cfg.workers, "Worker threads for grid sweeps")->check(CLI::PositiveNumber);
    app.add_option("--omega0", cfg.omega0, "Cavity frequency used to rescale outputs")->check(CLI::PositiveNumber);

    switch (command) {
    case Command::Effective:
        app.add_option("--g", raw.g, "Coupling grid")->required();
        app.add_option("--ratio", raw.ratio, "Frequency ratio grid or inf");
        break;
    case Command::Ed:
        app.add_option("--g", raw.g, "Coupling grid")->required();
        app.add_option("--ratio", raw.ratio, "Frequency ratio grid (finite)")->required();
        app.add_option("--levels", cfg.levels, "Number of lowest levels")->check(CLI::PositiveNumber);
        app.add_flag("--quartic", cfg.quartic, "Diagonalize the quartic single-mode Hamiltonian instead");
        app.add_option("--tol", cfg.ed_tol, "Cutoff convergence tolerance (units of omega0)");
        app.add_option("--max-cutoff", cfg.max_cutoff, "Hard cap on the Fock cutoff");
        break;
    case Command::Quench:
    case Command::Sweep:
        app.add_option("--gf", cfg.gf, "Final coupling")->required();
        app.add_option("--tauq", raw.tauq, "Quench time (grid for sweep)")->required();
        app.add_option("--ratio", raw.ratio, "Frequency ratio or inf");
        app.add_option("--rtol", cfg.rtol, "Integrator relative tolerance");
        app.add_option("--atol", cfg.atol, "Integrator absolute tolerance");
        if (command == Command::Quench) {
            app.add_option("--sample-stride", cfg.sample_stride, "Trajectory sampling stride (0: off)");
        }
        break;
    case Command::Fit:
        app.add_option("--input", cfg.input, "CSV file to fit")->required();
        app.add_option("--window", raw.window, "Fit window lo:hi");
        app.add_option("--x-col", cfg.x_col, "Abscissa column");
        app.add_option("--y-col", cfg.y_col, "Ordinate column");
        app.add_option("--sliding", cfg.sliding, "Sliding-window log10 half-width (0: single fit)");
        app.add_option("--min-x", cfg.min_x, "Drop points with x below this value");
        break;
    case Command::Kzm:
        app.add_option("--tauq", raw.tauq, "Quench-time grid")->required();
        break;
    }
}

std::vector<std::pair<std::string, std::string>> echo_of(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> e;
    e.emplace_back("command", to_string(cfg.command));
    e.emplace_back("omega0", fmt(cfg.omega0));
    switch (cfg.command) {
    case Command::Effective:
        e.emplace_back("g", cfg.g->to_string());
        e.emplace_back("ratio", cfg.ratio.to_string());
        break;
    case Command::Ed:
        e.emplace_back("g", cfg.g->to_string());
        e.emplace_back("ratio", cfg.ratio.to_string());
        e.emplace_back("levels", std::to_string(cfg.levels));
        e.emplace_back("quartic", cfg.quartic ? "true" : "false");
        e.emplace_back("tol", fmt(cfg.ed_tol));
        e.emplace_back("max-cutoff", std::to_string(cfg.max_cutoff));
        break;
    case Command::Quench:
    case Command::Sweep:
        e.emplace_back("gf", fmt(cfg.gf));
        e.emplace_back("tauq", cfg.tauq->to_string());
        e.emplace_back("ratio", cfg.ratio.to_string());
        e.emplace_back("rtol", fmt(cfg.rtol));
        e.emplace_back("atol", fmt(cfg.atol));
        if (cfg.command == Command::Quench) e.emplace_back("sample-stride", std::to_string(cfg.sample_stride));
        break;
    case Command::Fit:
        e.emplace_back("input", cfg.input);
        e.emplace_back("x-col", cfg.x_col);
        e.emplace_back("y-col", cfg.y_col);
        e.emplace_back("window", cfg.window ? fmt(cfg.window->first) + ":" + fmt(cfg.window->second) : "all");
        e.emplace_back("sliding", fmt(cfg.sliding));
        e.emplace_back("min-x", fmt(cfg.min_x));
        break;
    case Command::Kzm:
        e.emplace_back("tauq", cfg.tauq->to_string());
        break;
    }
    return e;
}

}  // namespace

const char* to_string(Command command) {
    switch (command) {
    case Command::Effective: return "effective";
    case Command::Ed: return "ed";
    case Command::Quench: return "quench";
    case Command::Sweep: return "sweep";
    case Command::Fit: return "fit";
    case Command::Kzm: return "kzm";
    }
    return "?";
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read config file '" + path + "'");
    }
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        }
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

RunConfig parse_config(const std::vector<std::string>& args_in) {
    std::vector<std::string> args = args_in;

    std::vector<std::pair<std::string, std::string>> file;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            file = read_config_file(args[i + 1]);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].starts_with("--config=")) {
            file = read_config_file(args[i].substr(9));
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }

    std::string command_name;
    if (!args.empty() && !args.front().starts_with("-")) {
        command_name = args.front();
        args.erase(args.begin());
    }
    for (auto it = file.begin(); it != file.end();) {
        if (it->first == "command") {
            if (command_name.empty()) command_name = it->second;
            it = file.erase(it);
        } else {
            ++it;
        }
    }
    if (command_name.empty()) {
        if (std::find(args.begin(), args.end(), "--help") != args.end() ||
            std::find(args.begin(), args.end(), "-h") != args.end()) {
            throw HelpRequested(
                "usage: rabi <command> [options]\n"
                "commands: effective, ed, quench, sweep, fit, kzm\n"
                "run 'rabi <command> --help' for the options of a command\n");
        }
        throw UsageError("missing command; expected effective, ed, quench, sweep, fit or kzm");
    }

    RunConfig cfg;
    cfg.command = command_from_name(command_name);
    RawText raw;
    CLI::App app{"Rabi model phase transition toolkit", "rabi " + command_name};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    add_options(app, cfg.command, cfg, raw);
    app.footer("--config FILE reads key = value defaults (keys are the long flag names); flags override them.");

    for (const auto& [key, value] : file) {
        if (app.get_option_no_throw("--" + key) == nullptr) {
            throw UsageError("unknown config key '" + key + "' for command " + command_name);
        }
    }

    // File entries first so that later command-line flags win.
    std::vector<std::string> tokens;
    for (const auto& [key, value] : file) tokens.push_back("--" + key + "=" + value);
    tokens.insert(tokens.end(), args.begin(), args.end());
    std::reverse(tokens.begin(), tokens.end());

    try {
        app.parse(tokens);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    if (!raw.g.empty()) cfg.g = GridSpec::parse(raw.g);
    cfg.ratio = GridSpec::parse(raw.ratio);
    if (!raw.tauq.empty()) cfg.tauq = GridSpec::parse(raw.tauq);
    if (!raw.window.empty()) {
        const auto colon = raw.window.find(':');
        if (colon == std::string::npos) throw UsageError("--window must be lo:hi");
        const double lo = parse_number(raw.window.substr(0, colon), "--window");
        const double hi = parse_number(raw.window.substr(colon + 1), "--window");
        if (!(lo > 0.0 && lo < hi)) throw UsageError("--window needs 0 < lo < hi");
        cfg.window = std::make_pair(lo, hi);
    }

    if (cfg.g && cfg.g->infinite) throw UsageError("--g cannot be inf");
    if (cfg.tauq && cfg.tauq->infinite) throw UsageError("--tauq cannot be inf");
    if (cfg.command == Command::Ed && cfg.ratio.infinite) {
        throw UsageError("exact diagonalization needs a finite --ratio");
    }
    if ((cfg.command == Command::Quench || cfg.command == Command::Sweep) && cfg.ratio.count != 1) {
        throw UsageError("--ratio must be a single value for " + command_name);
    }
    if (cfg.command == Command::Quench && cfg.tauq->count != 1) {
        throw UsageError("quench takes a single --tauq; use sweep for grids");
    }
    if (!(cfg.gf > 0.0 && cfg.gf <= 1.0) && (cfg.command == Command::Quench || cfg.command == Command::Sweep)) {
        throw UsageError("--gf must lie in (0, 1]");
    }
    if (cfg.sliding < 0.0) throw UsageError("--sliding must be non-negative");

    cfg.echo = echo_of(cfg);
    return cfg;
}

}  // namespace rabi::cli
