#include "flsim/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "flsim/errors.hpp"
#include "json.hpp"

namespace flsim {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& where, const std::string& msg) {
    throw FileParseError(path, 0, 0, where + ": " + msg);
}

struct Doc {
    json root;
    std::string path;
};

Doc parse_document(const std::string& text, const std::string& path) {
    try {
        Doc doc;
        doc.root = json::parse(text);
        doc.path = path;
        if (!doc.root.is_object()) fail(path, "document", "top level must be an object");
        return doc;
    } catch (const json::parse_error& e) {
        int line = 1, column = 1;
        const std::size_t stop = e.byte > 0 && e.byte <= text.size() ? e.byte - 1 : text.size();
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw FileParseError(path, line, column, "malformed document");
    }
}

void check_keys(const Doc& doc, const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail(doc.path, where, "unknown key '" + it.key() + "'");
    }
}

const json& need(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) fail(doc.path, where, std::string("missing key '") + key + "'");
    return obj.at(key);
}

double need_num(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_number()) fail(doc.path, where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

double opt_num(const Doc& doc, const json& obj, const char* key, const std::string& where,
               double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(doc.path, where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::string need_str(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_string()) fail(doc.path, where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

bool need_bool(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_boolean()) fail(doc.path, where, std::string("'") + key + "' must be a boolean");
    return v.get<bool>();
}

bool opt_bool(const Doc& doc, const json& obj, const char* key, const std::string& where,
              bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(doc.path, where, std::string("'") + key + "' must be a boolean");
    return v.get<bool>();
}

int need_int(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_number_integer()) fail(doc.path, where, std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

const json& need_array(const Doc& doc, const json& obj, const char* key, const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_array()) fail(doc.path, where, std::string("'") + key + "' must be an array");
    return v;
}

const json& need_object(const Doc& doc, const json& obj, const char* key,
                        const std::string& where) {
    const json& v = need(doc, obj, key, where);
    if (!v.is_object()) fail(doc.path, where, std::string("'") + key + "' must be an object");
    return v;
}

void check_format_version(const Doc& doc) {
    const int v = need_int(doc, doc.root, "format_version", "document");
    if (v != kFormatVersion) {
        fail(doc.path, "document",
             "unsupported format_version " + std::to_string(v) + " (expected " +
                 std::to_string(kFormatVersion) + ")");
    }
}

GovernorParams parse_governor(const Doc& doc, const json& obj, const std::string& where) {
    check_keys(doc, obj, where, {"droop_pu", "t_gov_s", "t_turb_s", "p_max_mw", "p_min_mw"});
    GovernorParams gov;
    gov.droop_pu = need_num(doc, obj, "droop_pu", where);
    gov.t_gov_s = need_num(doc, obj, "t_gov_s", where);
    gov.t_turb_s = need_num(doc, obj, "t_turb_s", where);
    gov.p_max_mw = need_num(doc, obj, "p_max_mw", where);
    gov.p_min_mw = opt_num(doc, obj, "p_min_mw", where, 0.0);
    return gov;
}

GridConfig parse_config_doc(const Doc& doc) {
    check_keys(doc, doc.root, "document",
               {"format_version", "plant_name", "f0_hz", "busbars", "busties", "generators",
                "loads", "external_tie", "fls"});
    check_format_version(doc);

    GridConfig config;
    if (doc.root.contains("plant_name")) {
        config.plant_name = need_str(doc, doc.root, "plant_name", "document");
    }
    config.f0_hz = need_num(doc, doc.root, "f0_hz", "document");

    for (const json& j : need_array(doc, doc.root, "busbars", "document")) {
        const std::string where = "busbars[" + std::to_string(config.busbars.size()) + "]";
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"id", "name"});
        Busbar b;
        b.id = need_str(doc, j, "id", where);
        if (j.contains("name")) b.name = need_str(doc, j, "name", where);
        config.busbars.push_back(std::move(b));
    }

    if (doc.root.contains("busties")) {
        for (const json& j : need_array(doc, doc.root, "busties", "document")) {
            const std::string where = "busties[" + std::to_string(config.busties.size()) + "]";
            if (!j.is_object()) fail(doc.path, where, "must be an object");
            check_keys(doc, j, where, {"id", "busbar_a", "busbar_b"});
            Bustie t;
            t.id = need_str(doc, j, "id", where);
            t.busbar_a = need_str(doc, j, "busbar_a", where);
            t.busbar_b = need_str(doc, j, "busbar_b", where);
            config.busties.push_back(std::move(t));
        }
    }

    for (const json& j : need_array(doc, doc.root, "generators", "document")) {
        const std::string where = "generators[" + std::to_string(config.generators.size()) + "]";
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where,
                   {"id", "busbar", "building", "rated_power_mw", "rated_apparent_power_mva",
                    "inertia_constant_s", "sr_curve", "governor"});
        Generator g;
        g.id = need_str(doc, j, "id", where);
        g.busbar = need_str(doc, j, "busbar", where);
        g.building = need_str(doc, j, "building", where);
        g.rated_power_mw = need_num(doc, j, "rated_power_mw", where);
        g.rated_apparent_power_mva = need_num(doc, j, "rated_apparent_power_mva", where);
        g.inertia_constant_s = need_num(doc, j, "inertia_constant_s", where);
        for (const json& p : need_array(doc, j, "sr_curve", where)) {
            const std::string pw = where + ".sr_curve[" + std::to_string(g.sr_curve.size()) + "]";
            if (!p.is_object()) fail(doc.path, pw, "must be an object");
            check_keys(doc, p, pw, {"power_mw", "sr_mw"});
            SrPoint pt;
            pt.power_mw = need_num(doc, p, "power_mw", pw);
            pt.sr_mw = need_num(doc, p, "sr_mw", pw);
            g.sr_curve.push_back(pt);
        }
        g.governor = parse_governor(doc, need_object(doc, j, "governor", where), where + ".governor");
        g.governor.rated_power_mw = g.rated_power_mw;
        g.governor.f0_hz = config.f0_hz;
        config.generators.push_back(std::move(g));
    }

    for (const json& j : need_array(doc, doc.root, "loads", "document")) {
        const std::string where = "loads[" + std::to_string(config.loads.size()) + "]";
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"id", "busbar", "priority", "sheddable"});
        Load l;
        l.id = need_str(doc, j, "id", where);
        l.busbar = need_str(doc, j, "busbar", where);
        l.priority = need_int(doc, j, "priority", where);
        l.sheddable = opt_bool(doc, j, "sheddable", where, true);
        config.loads.push_back(std::move(l));
    }

    if (doc.root.contains("external_tie")) {
        const json& j = need_object(doc, doc.root, "external_tie", "document");
        check_keys(doc, j, "external_tie", {"id", "busbar"});
        config.tie.id = need_str(doc, j, "id", "external_tie");
        config.tie.busbar = need_str(doc, j, "busbar", "external_tie");
        config.tie.present = true;
    }

    if (doc.root.contains("fls")) {
        const json& j = need_object(doc, doc.root, "fls", "document");
        check_keys(doc, j, "fls",
                   {"lse_period_s", "settle_time_s", "total_delay_s", "uf_threshold_hz",
                    "relay_pickup_s"});
        config.fls.lse_period_s = opt_num(doc, j, "lse_period_s", "fls", config.fls.lse_period_s);
        config.fls.settle_time_s = opt_num(doc, j, "settle_time_s", "fls", config.fls.settle_time_s);
        config.fls.total_delay_s = opt_num(doc, j, "total_delay_s", "fls", config.fls.total_delay_s);
        config.fls.uf_threshold_hz =
            opt_num(doc, j, "uf_threshold_hz", "fls", config.fls.uf_threshold_hz);
        config.fls.relay_pickup_s =
            opt_num(doc, j, "relay_pickup_s", "fls", config.fls.relay_pickup_s);
    }
    return config;
}

SnapshotFile parse_snapshot_doc(const Doc& doc, const GridConfig& config) {
    check_keys(doc, doc.root, "document",
               {"format_version", "timestamp_s", "generators", "loads", "busties", "external_tie",
                "sr_override_mw"});
    check_format_version(doc);

    SnapshotFile file;
    NetworkSnapshot& snap = file.snapshot;
    snap.timestamp_s = opt_num(doc, doc.root, "timestamp_s", "document", 0.0);
    if (doc.root.contains("sr_override_mw")) {
        file.sr_override_mw = need_num(doc, doc.root, "sr_override_mw", "document");
    }

    const json& gens = need_object(doc, doc.root, "generators", "document");
    for (auto it = gens.begin(); it != gens.end(); ++it) {
        if (!config.generator_index(it.key())) {
            fail(doc.path, "generators", "unknown generator '" + it.key() + "'");
        }
    }
    snap.gen_closed.assign(config.generators.size(), false);
    snap.gen_power_mw.assign(config.generators.size(), 0.0);
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
        const std::string& id = config.generators[g].id;
        const std::string where = "generators." + id;
        if (!gens.contains(id)) fail(doc.path, "generators", "missing generator '" + id + "'");
        const json& j = gens.at(id);
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"closed", "power_mw"});
        snap.gen_closed[g] = need_bool(doc, j, "closed", where);
        snap.gen_power_mw[g] = opt_num(doc, j, "power_mw", where, 0.0);
    }

    const json& loads = need_object(doc, doc.root, "loads", "document");
    for (auto it = loads.begin(); it != loads.end(); ++it) {
        if (!config.load_index(it.key())) fail(doc.path, "loads", "unknown load '" + it.key() + "'");
    }
    snap.load_closed.assign(config.loads.size(), false);
    snap.load_power_mw.assign(config.loads.size(), 0.0);
    for (std::size_t l = 0; l < config.loads.size(); ++l) {
        const std::string& id = config.loads[l].id;
        const std::string where = "loads." + id;
        if (!loads.contains(id)) fail(doc.path, "loads", "missing load '" + id + "'");
        const json& j = loads.at(id);
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"closed", "power_mw"});
        snap.load_closed[l] = need_bool(doc, j, "closed", where);
        snap.load_power_mw[l] = opt_num(doc, j, "power_mw", where, 0.0);
    }

    snap.bustie_closed.assign(config.busties.size(), true);
    if (config.busties.empty()) {
        if (doc.root.contains("busties")) {
            const json& ties = need_object(doc, doc.root, "busties", "document");
            if (!ties.empty()) fail(doc.path, "busties", "config declares no busties");
        }
    } else {
        const json& ties = need_object(doc, doc.root, "busties", "document");
        for (auto it = ties.begin(); it != ties.end(); ++it) {
            if (!config.bustie_index(it.key())) {
                fail(doc.path, "busties", "unknown bustie '" + it.key() + "'");
            }
        }
        for (std::size_t t = 0; t < config.busties.size(); ++t) {
            const std::string& id = config.busties[t].id;
            const std::string where = "busties." + id;
            if (!ties.contains(id)) fail(doc.path, "busties", "missing bustie '" + id + "'");
            const json& j = ties.at(id);
            if (!j.is_object()) fail(doc.path, where, "must be an object");
            check_keys(doc, j, where, {"closed"});
            snap.bustie_closed[t] = need_bool(doc, j, "closed", where);
        }
    }

    if (config.tie.present) {
        const json& j = need_object(doc, doc.root, "external_tie", "document");
        check_keys(doc, j, "external_tie", {"closed", "imported_power_mw"});
        snap.tie_closed = need_bool(doc, j, "closed", "external_tie");
        snap.imported_power_mw = opt_num(doc, j, "imported_power_mw", "external_tie", 0.0);
    } else if (doc.root.contains("external_tie")) {
        fail(doc.path, "external_tie", "config declares no external tie");
    }

    normalize_snapshot(config, snap, file.sr_override_mw);
    return file;
}

ScriptedEventKind parse_event_kind(const Doc& doc, const std::string& kind,
                                   const std::string& where) {
    if (kind == "gen-trip") return ScriptedEventKind::generator_trip;
    if (kind == "bustie-open") return ScriptedEventKind::bustie_open;
    if (kind == "building-loss") return ScriptedEventKind::building_loss;
    if (kind == "grid-blackout") return ScriptedEventKind::grid_blackout;
    fail(doc.path, where,
         "unknown event kind '" + kind +
             "' (expected gen-trip, bustie-open, building-loss or grid-blackout)");
}

SimScenario parse_scenario_doc(const Doc& doc, const GridConfig& config) {
    check_keys(doc, doc.root, "document",
               {"format_version", "name", "generators", "loads", "busties", "external_tie",
                "events", "total_delay_s", "sr_override_mw", "uf_threshold_hz", "relay_pickup_s",
                "duration_s", "dt_s"});
    check_format_version(doc);

    SimScenario scn;
    scn.name = doc.root.contains("name") ? need_str(doc, doc.root, "name", "document") : "scenario";
    scn.total_delay_s = opt_num(doc, doc.root, "total_delay_s", "document", config.fls.total_delay_s);
    scn.uf_threshold_hz =
        opt_num(doc, doc.root, "uf_threshold_hz", "document", config.fls.uf_threshold_hz);
    scn.relay_pickup_s =
        opt_num(doc, doc.root, "relay_pickup_s", "document", config.fls.relay_pickup_s);
    scn.duration_s = opt_num(doc, doc.root, "duration_s", "document", scn.duration_s);
    scn.dt_s = opt_num(doc, doc.root, "dt_s", "document", scn.dt_s);
    if (doc.root.contains("sr_override_mw")) {
        scn.sr_override_mw = need_num(doc, doc.root, "sr_override_mw", "document");
    }

    const json& gens = need_object(doc, doc.root, "generators", "document");
    for (auto it = gens.begin(); it != gens.end(); ++it) {
        if (!config.generator_index(it.key())) {
            fail(doc.path, "generators", "unknown generator '" + it.key() + "'");
        }
    }
    scn.dispatch_mw.assign(config.generators.size(), std::nullopt);
    for (std::size_t g = 0; g < config.generators.size(); ++g) {
        const std::string& id = config.generators[g].id;
        const std::string where = "generators." + id;
        if (!gens.contains(id)) fail(doc.path, "generators", "missing generator '" + id + "'");
        const json& j = gens.at(id);
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"open", "dispatch_mw"});
        if (opt_bool(doc, j, "open", where, false)) {
            if (j.contains("dispatch_mw")) {
                fail(doc.path, where, "an open unit cannot carry a dispatch");
            }
        } else {
            scn.dispatch_mw[g] = need_num(doc, j, "dispatch_mw", where);
        }
    }

    const json& loads = need_object(doc, doc.root, "loads", "document");
    for (auto it = loads.begin(); it != loads.end(); ++it) {
        if (!config.load_index(it.key())) fail(doc.path, "loads", "unknown load '" + it.key() + "'");
    }
    scn.load_mw.assign(config.loads.size(), std::nullopt);
    for (std::size_t l = 0; l < config.loads.size(); ++l) {
        const std::string& id = config.loads[l].id;
        const std::string where = "loads." + id;
        if (!loads.contains(id)) fail(doc.path, "loads", "missing load '" + id + "'");
        const json& j = loads.at(id);
        if (!j.is_object()) fail(doc.path, where, "must be an object");
        check_keys(doc, j, where, {"open", "power_mw"});
        if (opt_bool(doc, j, "open", where, false)) {
            if (j.contains("power_mw")) fail(doc.path, where, "an open load cannot carry power");
        } else {
            scn.load_mw[l] = need_num(doc, j, "power_mw", where);
        }
    }

    scn.bustie_closed.assign(config.busties.size(), true);
    if (doc.root.contains("busties")) {
        const json& ties = need_object(doc, doc.root, "busties", "document");
        for (auto it = ties.begin(); it != ties.end(); ++it) {
            auto t = config.bustie_index(it.key());
            if (!t) fail(doc.path, "busties", "unknown bustie '" + it.key() + "'");
            const std::string where = "busties." + it.key();
            if (!it.value().is_object()) fail(doc.path, where, "must be an object");
            check_keys(doc, it.value(), where, {"closed"});
            scn.bustie_closed[*t] = need_bool(doc, it.value(), "closed", where);
        }
    }

    if (doc.root.contains("external_tie")) {
        if (!config.tie.present) fail(doc.path, "external_tie", "config declares no external tie");
        const json& j = need_object(doc, doc.root, "external_tie", "document");
        check_keys(doc, j, "external_tie", {"closed", "imported_power_mw"});
        scn.tie_closed = need_bool(doc, j, "closed", "external_tie");
        scn.imported_power_mw = opt_num(doc, j, "imported_power_mw", "external_tie", 0.0);
    }

    if (doc.root.contains("events")) {
        for (const json& j : need_array(doc, doc.root, "events", "document")) {
            const std::string where = "events[" + std::to_string(scn.events.size()) + "]";
            if (!j.is_object()) fail(doc.path, where, "must be an object");
            check_keys(doc, j, where, {"time_s", "kind", "target"});
            ScriptedEvent ev;
            ev.time_s = need_num(doc, j, "time_s", where);
            ev.kind = parse_event_kind(doc, need_str(doc, j, "kind", where), where);
            if (ev.kind == ScriptedEventKind::grid_blackout) {
                if (j.contains("target")) fail(doc.path, where, "grid-blackout takes no target");
            } else {
                ev.target = need_str(doc, j, "target", where);
            }
            scn.events.push_back(std::move(ev));
        }
    }
    return scn;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

GridConfig parse_config_text(const std::string& text, const std::string& path_tag) {
    return parse_config_doc(parse_document(text, path_tag));
}

GridConfig parse_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

GridConfig load_config(const std::string& path) {
    GridConfig config = parse_config(path);
    ValidationReport report = validate_config(config);
    if (!report.ok()) {
        std::string msg = "invalid config '" + path + "':";
        for (const Finding& f : report.findings)
            msg += "\n  " + f.code + (f.element.empty() ? "" : " [" + f.element + "]") +
                   ": " + f.message;
        throw PreconditionError(msg);
    }
    return config;
}

SnapshotFile parse_snapshot_text(const std::string& text, const GridConfig& config,
                                 const std::string& path_tag) {
    return parse_snapshot_doc(parse_document(text, path_tag), config);
}

SnapshotFile load_snapshot(const std::string& path, const GridConfig& config) {
    return parse_snapshot_text(read_file(path), config, path);
}

SimScenario parse_scenario_text(const std::string& text, const GridConfig& config,
                                const std::string& path_tag) {
    return parse_scenario_doc(parse_document(text, path_tag), config);
}

SimScenario load_scenario(const std::string& path, const GridConfig& config) {
    return parse_scenario_text(read_file(path), config, path);
}

}  // namespace flsim
