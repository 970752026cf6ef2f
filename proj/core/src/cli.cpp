#include "flsim/cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "flsim/config_io.hpp"
#include "flsim/csv.hpp"
#include "flsim/dynamics.hpp"
#include "flsim/edsa.hpp"
#include "flsim/errors.hpp"
#include "flsim/grid.hpp"
#include "flsim/lse.hpp"
#include "flsim/st_codegen.hpp"
#include "flsim/sweep.hpp"

namespace flsim {

namespace {

std::vector<double> parse_axis(const std::string& spec, const std::string& flag) {
    double a = 0.0, b = 0.0, step = 0.0;
    std::size_t p1 = spec.find(':');
    std::size_t p2 = p1 == std::string::npos ? std::string::npos : spec.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) {
        throw PreconditionError(flag + " expects a:b:step, got '" + spec + "'");
    }
    try {
        a = parse_double_field(spec.substr(0, p1));
        b = parse_double_field(spec.substr(p1 + 1, p2 - p1 - 1));
        step = parse_double_field(spec.substr(p2 + 1));
    } catch (const FileParseError&) {
        throw PreconditionError(flag + " expects a:b:step, got '" + spec + "'");
    }
    return axis_range(a, b, step);
}

void emit_text(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
}

int cmd_validate(const std::string& cfg_path, std::ostream& out) {
    GridConfig config = parse_config(cfg_path);
    ValidationReport report = validate_config(config);
    for (const Finding& f : report.findings) {
        out << f.code << (f.element.empty() ? "" : " [" + f.element + "]") << ": " << f.message
            << "\n";
    }
    if (!report.ok()) {
        out << report.findings.size() << " finding(s)\n";
        return 2;
    }
    out << "ok\n";
    return 0;
}

int cmd_sm(const std::string& cfg_path, const std::string& snap_path, const std::string& out_path,
           std::ostream& out, std::ostream& err) {
    GridConfig config = load_config(cfg_path);
    SnapshotFile file = load_snapshot(snap_path, config);
    EventCatalog catalog = enumerate_events(config);
    SheddingMatrix matrix = build_shedding_matrix(config, file.snapshot, catalog);
    emit_text(matrix_csv(matrix), out_path, out);
    int rc = 0;
    for (std::size_t e = 0; e < matrix.cols(); ++e) {
        if (!matrix.info[e].infeasible) continue;
        rc = 1;
        double shortfall = 0.0;
        for (const SubnetSelection& s : matrix.info[e].subnets) shortfall += s.shortfall_mw;
        err << "warning: column " << matrix.catalog.events[e].label
            << " is infeasible (shortfall " << format_double(shortfall) << " MW)\n";
    }
    return rc;
}

int cmd_simulate(const std::string& cfg_path, const std::string& scn_path, bool no_shedding,
                 const std::string& out_path, std::ostream& out, std::ostream& err) {
    GridConfig config = load_config(cfg_path);
    SimScenario scenario = load_scenario(scn_path, config);
    SimOptions options;
    options.shedding_enabled = !no_shedding;
    SimTrace trace = run_scenario(config, scenario, options);

    emit_text(trace_csv(config, trace), out_path, out);
    std::ostream& summary = out_path.empty() ? err : out;
    summary << "nadir: " << format_double(nadir(trace)) << " Hz, relay: "
            << (trace.relay_tripped ? "TRIPPED" : "ok") << "\n";
    if (trace.blackout) {
        summary << "blackout: at " << format_double(trace.blackout_time_s) << " s\n";
    }
    if (!trace.commands.empty()) {
        summary << "shed:";
        for (const TripCommand& cmd : trace.commands) summary << " " << cmd.load_id;
        summary << "\n";
    }
    if (!trace.second_events.empty()) {
        summary << "second-events: " << trace.second_events.size() << "\n";
    }
    return trace.relay_tripped || trace.blackout ? 1 : 0;
}

int cmd_sweep(const std::string& cfg_path, const std::string& scn_path, const std::string& sr_spec,
              const std::string& delay_spec, unsigned threads, const std::string& out_path,
              std::ostream& out) {
    GridConfig config = load_config(cfg_path);
    SimScenario scenario = load_scenario(scn_path, config);
    NadirSurface surface = sweep_surface(config, scenario, parse_axis(sr_spec, "--sr"),
                                         parse_axis(delay_spec, "--delay"), threads);
    emit_text(surface_csv(surface), out_path, out);
    return 0;
}

int cmd_select_sr(const std::string& cfg_path, const std::string& scn_path, double threshold,
                  double margin, double sr_min, double sr_max, double tolerance,
                  std::ostream& out) {
    GridConfig config = load_config(cfg_path);
    SimScenario scenario = load_scenario(scn_path, config);
    SrSelection sel = max_sr_for_margin(config, scenario, threshold, margin, sr_min, sr_max,
                                        tolerance);
    out << "selected_sr_mw: " << format_double(sel.sr_mw) << "\n";
    out << "nadir_hz: " << format_double(sel.nadir_hz) << "\n";
    out << "simulations: " << sel.simulations << "\n";
    return 0;
}

int cmd_codegen(const std::string& cfg_path, const std::string& out_path, std::ostream& out) {
    GridConfig config = load_config(cfg_path);
    StProgram program = emit_st(config);
    emit_text(program.source, out_path, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Event-driven fast load shedding: matrix engine, simulator and PLC code generator"};
    app.require_subcommand(1);

    std::string cfg_path, snap_path, scn_path, out_path;
    std::string sr_spec, delay_spec;
    bool no_shedding = false;
    unsigned threads = 0;
    double threshold = 48.0, margin = 0.0, sr_min = 0.0, sr_max = 20.0, tolerance = 0.1;

    CLI::App* validate = app.add_subcommand("validate", "Check a plant config, list findings");
    validate->add_option("config", cfg_path, "plant config file")->required();

    CLI::App* sm = app.add_subcommand("sm", "Shedding matrix for a snapshot, as CSV");
    sm->add_option("config", cfg_path, "plant config file")->required();
    sm->add_option("snapshot", snap_path, "network snapshot file")->required();
    sm->add_option("-o,--output", out_path, "write CSV here instead of stdout");

    CLI::App* simulate = app.add_subcommand("simulate", "Run one scenario, emit the trace as CSV");
    simulate->add_option("config", cfg_path, "plant config file")->required();
    simulate->add_option("scenario", scn_path, "scenario file")->required();
    simulate->add_flag("--no-shedding", no_shedding, "disconnect ED-SA (relay backup only)");
    simulate->add_option("-o,--output", out_path, "write CSV here instead of stdout");

    CLI::App* sweep = app.add_subcommand("sweep", "Nadir surface over SR x delay, as CSV");
    sweep->add_option("config", cfg_path, "plant config file")->required();
    sweep->add_option("scenario", scn_path, "scenario file")->required();
    sweep->add_option("--sr", sr_spec, "SR axis a:b:step MW, both ends included")->required();
    sweep->add_option("--delay", delay_spec, "delay axis a:b:step s, both ends included")
        ->required();
    sweep->add_option("--threads", threads, "worker threads (0 = auto)");
    sweep->add_option("-o,--output", out_path, "write CSV here instead of stdout");

    CLI::App* select = app.add_subcommand("select-sr",
                                          "Largest SR keeping the nadir over threshold + margin");
    select->add_option("config", cfg_path, "plant config file")->required();
    select->add_option("scenario", scn_path, "scenario file")->required();
    select->add_option("--threshold", threshold, "underfrequency threshold, Hz")->required();
    select->add_option("--margin", margin, "safety margin above the threshold, Hz");
    select->add_option("--sr-min", sr_min, "search range lower bound, MW");
    select->add_option("--sr-max", sr_max, "search range upper bound, MW");
    select->add_option("--tolerance", tolerance, "bisection tolerance, MW");

    CLI::App* codegen = app.add_subcommand("codegen", "Emit IEC 61131-3 blocks for the plant");
    codegen->add_option("config", cfg_path, "plant config file")->required();
    codegen->add_option("-o,--output", out_path, "write the .st file here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("flsim");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(cfg_path, out);
        if (sm->parsed()) return cmd_sm(cfg_path, snap_path, out_path, out, err);
        if (simulate->parsed()) {
            return cmd_simulate(cfg_path, scn_path, no_shedding, out_path, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(cfg_path, scn_path, sr_spec, delay_spec, threads, out_path, out);
        }
        if (select->parsed()) {
            return cmd_select_sr(cfg_path, scn_path, threshold, margin, sr_min, sr_max, tolerance,
                                 out);
        }
        if (codegen->parsed()) return cmd_codegen(cfg_path, out_path, out);
    } catch (const InfeasibleSrError& e) {
        err << "error: " << e.what() << " (achieved nadir " << format_double(e.achieved_nadir_hz)
            << " Hz)\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace flsim
