#include "flsim/st_codegen.hpp"

#include <algorithm>
#include <cstddef>

#include "flsim/errors.hpp"

namespace flsim {

namespace {

bool st_identifier_ok(const std::string& name) {
    if (name.empty()) return false;
    auto word_start = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
    };
    if (!word_start(name.front())) return false;
    for (char c : name) {
        if (!word_start(c) && !(c >= '0' && c <= '9')) return false;
    }
    return true;
}

class Emitter {
  public:
    void ln() { out_ += '\n'; }
    void ln(int level, const std::string& text) {
        out_.append(static_cast<std::size_t>(level) * 4, ' ');
        out_ += text;
        out_ += '\n';
    }
    std::string take() { return std::move(out_); }

  private:
    std::string out_;
};

// Declared array extent: zero-count plants keep one padding element so every
// declaration stays well-formed; loops bounded by the count never touch it.
std::string dim(std::size_t count) {
    const std::size_t n = count == 0 ? 1 : count;
    return "0.." + std::to_string(n - 1);
}

std::string int_list(std::vector<long long> values) {
    if (values.empty()) values.push_back(0);
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(values[i]);
    }
    return out + "]";
}

std::string bool_list(std::vector<bool> values) {
    if (values.empty()) values.push_back(false);
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += values[i] ? "TRUE" : "FALSE";
    }
    return out + "]";
}

struct PlantTables {
    std::vector<long long> gen_bus, gen_bldg, load_bus, load_rank, load_prio;
    std::vector<bool> load_sheddable;
    std::vector<long long> bustie_a, bustie_b;
    std::vector<long long> ev_kind, ev_target;
    long long tie_bus = 0;
    bool tie_present = false;
};

PlantTables build_tables(const GridConfig& config, const EventCatalog& catalog) {
    PlantTables t;
    t.tie_present = config.tie.present;
    if (config.tie.present) {
        t.tie_bus = static_cast<long long>(*config.busbar_index(config.tie.busbar));
    }

    for (const auto& g : config.generators) {
        t.gen_bus.push_back(static_cast<long long>(*config.busbar_index(g.busbar)));
        auto bldg = std::find(catalog.buildings.begin(), catalog.buildings.end(), g.building);
        t.gen_bldg.push_back(bldg - catalog.buildings.begin());
    }

    std::vector<std::size_t> by_id(config.loads.size());
    for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
    std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
        return config.loads[a].id < config.loads[b].id;
    });
    t.load_rank.assign(config.loads.size(), 0);
    for (std::size_t rank = 0; rank < by_id.size(); ++rank) {
        t.load_rank[by_id[rank]] = static_cast<long long>(rank);
    }
    for (const auto& l : config.loads) {
        t.load_bus.push_back(static_cast<long long>(*config.busbar_index(l.busbar)));
        t.load_prio.push_back(l.priority);
        t.load_sheddable.push_back(l.sheddable);
    }

    for (const auto& b : config.busties) {
        t.bustie_a.push_back(static_cast<long long>(*config.busbar_index(b.busbar_a)));
        t.bustie_b.push_back(static_cast<long long>(*config.busbar_index(b.busbar_b)));
    }

    for (const Event& ev : catalog.events) {
        long long kind = 0;
        switch (ev.kind) {
            case EventKind::generator_trip: kind = 0; break;
            case EventKind::bustie_open: kind = 1; break;
            case EventKind::building_loss: kind = 2; break;
            case EventKind::grid_blackout: kind = 3; break;
        }
        t.ev_kind.push_back(kind);
        t.ev_target.push_back(static_cast<long long>(ev.target_index));
    }
    return t;
}

void emit_event_tables(Emitter& out, const GridConfig& config, const PlantTables& t,
                       std::size_t n_events, std::size_t n_buildings) {
    out.ln(1, "N_GENS : INT := " + std::to_string(config.generators.size()) + ";");
    out.ln(1, "N_LOADS : INT := " + std::to_string(config.loads.size()) + ";");
    out.ln(1, "N_BUSBARS : INT := " + std::to_string(config.busbars.size()) + ";");
    out.ln(1, "N_BUSTIES : INT := " + std::to_string(config.busties.size()) + ";");
    out.ln(1, "N_BUILDINGS : INT := " + std::to_string(n_buildings) + ";");
    out.ln(1, "N_EVENTS : INT := " + std::to_string(n_events) + ";");
    out.ln(1, "TIE_PRESENT : BOOL := " + std::string(t.tie_present ? "TRUE" : "FALSE") + ";");
    out.ln(1, "TIE_BUS : INT := " + std::to_string(t.tie_bus) + ";");
    out.ln(1, "GEN_BUS : ARRAY[" + dim(config.generators.size()) +
                  "] OF INT := " + int_list(t.gen_bus) + ";");
    out.ln(1, "GEN_BLDG : ARRAY[" + dim(config.generators.size()) +
                  "] OF INT := " + int_list(t.gen_bldg) + ";");
    out.ln(1, "EV_KIND : ARRAY[" + dim(n_events) + "] OF INT := " + int_list(t.ev_kind) + ";");
    out.ln(1, "EV_TARGET : ARRAY[" + dim(n_events) + "] OF INT := " + int_list(t.ev_target) + ";");
}

void emit_lse_block(Emitter& out, const GridConfig& config, const PlantTables& t,
                    const EventCatalog& catalog, const std::string& name) {
    const std::string ng = dim(config.generators.size());
    const std::string nl = dim(config.loads.size());
    const std::string nt = dim(config.busties.size());
    const std::string ne = dim(catalog.size());
    const std::string nb = dim(config.busbars.size());

    out.ln(0, "FUNCTION_BLOCK " + name);
    out.ln(0, "VAR_INPUT");
    out.ln(1, "GEN_CLOSED : ARRAY[" + ng + "] OF BOOL;");
    out.ln(1, "GEN_P_MW : ARRAY[" + ng + "] OF LREAL;");
    out.ln(1, "GEN_SR_MW : ARRAY[" + ng + "] OF LREAL;");
    out.ln(1, "LOAD_CLOSED : ARRAY[" + nl + "] OF BOOL;");
    out.ln(1, "LOAD_P_MW : ARRAY[" + nl + "] OF LREAL;");
    out.ln(1, "BUSTIE_CLOSED : ARRAY[" + nt + "] OF BOOL;");
    out.ln(1, "TIE_CLOSED : BOOL;");
    out.ln(1, "TIE_P_MW : LREAL;");
    out.ln(0, "END_VAR");
    out.ln(0, "VAR_OUTPUT");
    out.ln(1, "MATRIX : ARRAY[" + ne + ", " + nl + "] OF BOOL;");
    out.ln(1, "INFEASIBLE : ARRAY[" + ne + "] OF BOOL;");
    out.ln(0, "END_VAR");
    out.ln(0, "VAR CONSTANT");
    emit_event_tables(out, config, t, catalog.size(), catalog.buildings.size());
    out.ln(1, "LOAD_BUS : ARRAY[" + nl + "] OF INT := " + int_list(t.load_bus) + ";");
    out.ln(1, "LOAD_PRIO : ARRAY[" + nl + "] OF INT := " + int_list(t.load_prio) + ";");
    out.ln(1, "LOAD_SHEDDABLE : ARRAY[" + nl + "] OF BOOL := " + bool_list(t.load_sheddable) + ";");
    out.ln(1, "LOAD_RANK : ARRAY[" + nl + "] OF INT := " + int_list(t.load_rank) + ";");
    out.ln(1, "BUSTIE_A : ARRAY[" + nt + "] OF INT := " + int_list(t.bustie_a) + ";");
    out.ln(1, "BUSTIE_B : ARRAY[" + nt + "] OF INT := " + int_list(t.bustie_b) + ";");
    out.ln(0, "END_VAR");
    out.ln(0, "VAR");
    out.ln(1, "e : INT;");
    out.ln(1, "b : INT;");
    out.ln(1, "t : INT;");
    out.ln(1, "g : INT;");
    out.ln(1, "l : INT;");
    out.ln(1, "pass : INT;");
    out.ln(1, "root : INT;");
    out.ln(1, "pick : INT;");
    out.ln(1, "best : INT;");
    out.ln(1, "excl : INT;");
    out.ln(1, "LBL : ARRAY[" + nb + "] OF INT;");
    out.ln(1, "skip : BOOL;");
    out.ln(1, "in_use : BOOL;");
    out.ln(1, "has_pm : BOOL;");
    out.ln(1, "member : BOOL;");
    out.ln(1, "pm : LREAL;");
    out.ln(1, "ps : LREAL;");
    out.ln(1, "sr_tot : LREAL;");
    out.ln(1, "p_load : LREAL;");
    out.ln(1, "p_gen : LREAL;");
    out.ln(1, "lost : LREAL;");
    out.ln(1, "surv_sr : LREAL;");
    out.ln(0, "END_VAR");
    out.ln();

    out.ln(0, "FOR e := 0 TO N_EVENTS - 1 DO");
    out.ln(1, "INFEASIBLE[e] := FALSE;");
    out.ln(1, "FOR l := 0 TO N_LOADS - 1 DO");
    out.ln(2, "MATRIX[e, l] := FALSE;");
    out.ln(1, "END_FOR;");
    out.ln(0, "END_FOR;");
    out.ln();

    out.ln(0, "FOR e := 0 TO N_EVENTS - 1 DO");
    out.ln(1, "(* an already-open target cannot produce a closed-to-open transition *)");
    out.ln(1, "skip := FALSE;");
    out.ln(1, "IF EV_KIND[e] = 0 THEN");
    out.ln(2, "IF NOT GEN_CLOSED[EV_TARGET[e]] THEN");
    out.ln(3, "skip := TRUE;");
    out.ln(2, "END_IF;");
    out.ln(1, "ELSIF EV_KIND[e] = 1 THEN");
    out.ln(2, "IF NOT BUSTIE_CLOSED[EV_TARGET[e]] THEN");
    out.ln(3, "skip := TRUE;");
    out.ln(2, "END_IF;");
    out.ln(1, "ELSIF EV_KIND[e] = 3 THEN");
    out.ln(2, "IF NOT TIE_CLOSED THEN");
    out.ln(3, "skip := TRUE;");
    out.ln(2, "END_IF;");
    out.ln(1, "END_IF;");
    out.ln(1, "IF NOT skip THEN");
    out.ln(2, "excl := -1;");
    out.ln(2, "IF EV_KIND[e] = 1 THEN");
    out.ln(3, "excl := EV_TARGET[e];");
    out.ln(2, "END_IF;");
    out.ln(2, "(* sub-network labels: minimum busbar index over closed busties *)");
    out.ln(2, "FOR b := 0 TO N_BUSBARS - 1 DO");
    out.ln(3, "LBL[b] := b;");
    out.ln(2, "END_FOR;");
    out.ln(2, "FOR pass := 1 TO N_BUSBARS DO");
    out.ln(3, "FOR t := 0 TO N_BUSTIES - 1 DO");
    out.ln(4, "IF BUSTIE_CLOSED[t] AND (t <> excl) THEN");
    out.ln(5, "IF LBL[BUSTIE_A[t]] < LBL[BUSTIE_B[t]] THEN");
    out.ln(6, "LBL[BUSTIE_B[t]] := LBL[BUSTIE_A[t]];");
    out.ln(5, "ELSIF LBL[BUSTIE_B[t]] < LBL[BUSTIE_A[t]] THEN");
    out.ln(6, "LBL[BUSTIE_A[t]] := LBL[BUSTIE_B[t]];");
    out.ln(5, "END_IF;");
    out.ln(4, "END_IF;");
    out.ln(3, "END_FOR;");
    out.ln(2, "END_FOR;");
    out.ln(2, "FOR root := 0 TO N_BUSBARS - 1 DO");
    out.ln(3, "in_use := FALSE;");
    out.ln(3, "FOR b := 0 TO N_BUSBARS - 1 DO");
    out.ln(4, "IF LBL[b] = root THEN");
    out.ln(5, "in_use := TRUE;");
    out.ln(4, "END_IF;");
    out.ln(3, "END_FOR;");
    out.ln(3, "IF in_use THEN");
    out.ln(4, "has_pm := FALSE;");
    out.ln(4, "pm := 0.0;");
    out.ln(4, "IF EV_KIND[e] = 0 THEN");
    out.ln(5, "IF LBL[GEN_BUS[EV_TARGET[e]]] = root THEN");
    out.ln(6, "sr_tot := 0.0;");
    out.ln(6, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(7, "IF (LBL[GEN_BUS[g]] = root) AND GEN_CLOSED[g] THEN");
    out.ln(8, "sr_tot := sr_tot + GEN_SR_MW[g];");
    out.ln(7, "END_IF;");
    out.ln(6, "END_FOR;");
    out.ln(6, "pm := GEN_P_MW[EV_TARGET[e]] - (sr_tot - GEN_SR_MW[EV_TARGET[e]]);");
    out.ln(6, "has_pm := TRUE;");
    out.ln(5, "END_IF;");
    out.ln(4, "ELSIF EV_KIND[e] = 1 THEN");
    out.ln(5, "p_load := 0.0;");
    out.ln(5, "FOR l := 0 TO N_LOADS - 1 DO");
    out.ln(6, "IF (LBL[LOAD_BUS[l]] = root) AND LOAD_CLOSED[l] THEN");
    out.ln(7, "p_load := p_load + LOAD_P_MW[l];");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "p_gen := 0.0;");
    out.ln(5, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(6, "IF (LBL[GEN_BUS[g]] = root) AND GEN_CLOSED[g] THEN");
    out.ln(7, "p_gen := p_gen + GEN_P_MW[g];");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "(* a closed external tie keeps feeding its side of the split *)");
    out.ln(5, "IF TIE_PRESENT AND TIE_CLOSED AND (LBL[TIE_BUS] = root) THEN");
    out.ln(6, "p_gen := p_gen + TIE_P_MW;");
    out.ln(5, "END_IF;");
    out.ln(5, "sr_tot := 0.0;");
    out.ln(5, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(6, "IF (LBL[GEN_BUS[g]] = root) AND GEN_CLOSED[g] THEN");
    out.ln(7, "sr_tot := sr_tot + GEN_SR_MW[g];");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "pm := p_load - p_gen - sr_tot;");
    out.ln(5, "has_pm := TRUE;");
    out.ln(4, "ELSIF EV_KIND[e] = 2 THEN");
    out.ln(5, "member := FALSE;");
    out.ln(5, "lost := 0.0;");
    out.ln(5, "surv_sr := 0.0;");
    out.ln(5, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(6, "IF LBL[GEN_BUS[g]] = root THEN");
    out.ln(7, "IF GEN_BLDG[g] = EV_TARGET[e] THEN");
    out.ln(8, "member := TRUE;");
    out.ln(8, "IF GEN_CLOSED[g] THEN");
    out.ln(9, "lost := lost + GEN_P_MW[g];");
    out.ln(8, "END_IF;");
    out.ln(7, "ELSIF GEN_CLOSED[g] THEN");
    out.ln(8, "surv_sr := surv_sr + GEN_SR_MW[g];");
    out.ln(7, "END_IF;");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "IF member THEN");
    out.ln(6, "pm := lost - surv_sr;");
    out.ln(6, "has_pm := TRUE;");
    out.ln(5, "END_IF;");
    out.ln(4, "ELSIF (EV_KIND[e] = 3) AND TIE_PRESENT AND (LBL[TIE_BUS] = root) THEN");
    out.ln(5, "sr_tot := 0.0;");
    out.ln(5, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(6, "IF (LBL[GEN_BUS[g]] = root) AND GEN_CLOSED[g] THEN");
    out.ln(7, "sr_tot := sr_tot + GEN_SR_MW[g];");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "pm := TIE_P_MW - sr_tot;");
    out.ln(5, "has_pm := TRUE;");
    out.ln(4, "END_IF;");
    out.ln(4, "IF has_pm AND (pm > 0.0) THEN");
    out.ln(5, "(* mark by ascending priority, descending power, ascending id rank");
    out.ln(5, "   until the shed power strictly exceeds the mismatch *)");
    out.ln(5, "ps := 0.0;");
    out.ln(5, "FOR pick := 0 TO N_LOADS - 1 DO");
    out.ln(6, "IF NOT (ps > pm) THEN");
    out.ln(7, "best := -1;");
    out.ln(7, "FOR l := 0 TO N_LOADS - 1 DO");
    out.ln(8, "IF (LBL[LOAD_BUS[l]] = root) AND LOAD_SHEDDABLE[l] AND LOAD_CLOSED[l] AND NOT MATRIX[e, l] THEN");
    out.ln(9, "IF best < 0 THEN");
    out.ln(10, "best := l;");
    out.ln(9, "ELSIF LOAD_PRIO[l] < LOAD_PRIO[best] THEN");
    out.ln(10, "best := l;");
    out.ln(9, "ELSIF LOAD_PRIO[l] = LOAD_PRIO[best] THEN");
    out.ln(10, "IF LOAD_P_MW[l] > LOAD_P_MW[best] THEN");
    out.ln(11, "best := l;");
    out.ln(10, "ELSIF (LOAD_P_MW[l] = LOAD_P_MW[best]) AND (LOAD_RANK[l] < LOAD_RANK[best]) THEN");
    out.ln(11, "best := l;");
    out.ln(10, "END_IF;");
    out.ln(9, "END_IF;");
    out.ln(8, "END_IF;");
    out.ln(7, "END_FOR;");
    out.ln(7, "IF best >= 0 THEN");
    out.ln(8, "MATRIX[e, best] := TRUE;");
    out.ln(8, "ps := ps + LOAD_P_MW[best];");
    out.ln(7, "END_IF;");
    out.ln(6, "END_IF;");
    out.ln(5, "END_FOR;");
    out.ln(5, "IF NOT (ps > pm) THEN");
    out.ln(6, "INFEASIBLE[e] := TRUE;");
    out.ln(5, "END_IF;");
    out.ln(4, "END_IF;");
    out.ln(3, "END_IF;");
    out.ln(2, "END_FOR;");
    out.ln(1, "END_IF;");
    out.ln(0, "END_FOR;");
    out.ln(0, "END_FUNCTION_BLOCK");
}

void emit_edsa_block(Emitter& out, const GridConfig& config, const PlantTables& t,
                     const EventCatalog& catalog, const std::string& name) {
    const std::string ng = dim(config.generators.size());
    const std::string nl = dim(config.loads.size());
    const std::string nt = dim(config.busties.size());
    const std::string ne = dim(catalog.size());
    const std::string nbd = dim(catalog.buildings.size());

    out.ln(0, "FUNCTION_BLOCK " + name);
    out.ln(0, "VAR_INPUT");
    out.ln(1, "PREV_GEN_CLOSED : ARRAY[" + ng + "] OF BOOL;");
    out.ln(1, "CUR_GEN_CLOSED : ARRAY[" + ng + "] OF BOOL;");
    out.ln(1, "PREV_BUSTIE_CLOSED : ARRAY[" + nt + "] OF BOOL;");
    out.ln(1, "CUR_BUSTIE_CLOSED : ARRAY[" + nt + "] OF BOOL;");
    out.ln(1, "PREV_TIE_CLOSED : BOOL;");
    out.ln(1, "CUR_TIE_CLOSED : BOOL;");
    out.ln(1, "MATRIX : ARRAY[" + ne + ", " + nl + "] OF BOOL;");
    out.ln(0, "END_VAR");
    out.ln(0, "VAR_OUTPUT");
    out.ln(1, "TRIP : ARRAY[" + nl + "] OF BOOL;");
    out.ln(1, "DETECTED : BOOL;");
    out.ln(1, "EVENT_INDEX : INT;");
    out.ln(0, "END_VAR");
    out.ln(0, "VAR CONSTANT");
    emit_event_tables(out, config, t, catalog.size(), catalog.buildings.size());
    out.ln(0, "END_VAR");
    out.ln(0, "VAR");
    out.ln(1, "e : INT;");
    out.ln(1, "g : INT;");
    out.ln(1, "l : INT;");
    out.ln(1, "b : INT;");
    out.ln(1, "fires : BOOL;");
    out.ln(1, "all_open : BOOL;");
    out.ln(1, "any_prev : BOOL;");
    out.ln(1, "BLDG_FIRE : ARRAY[" + nbd + "] OF BOOL;");
    out.ln(0, "END_VAR");
    out.ln();

    out.ln(0, "DETECTED := FALSE;");
    out.ln(0, "EVENT_INDEX := -1;");
    out.ln(0, "FOR l := 0 TO N_LOADS - 1 DO");
    out.ln(1, "TRIP[l] := FALSE;");
    out.ln(0, "END_FOR;");
    out.ln();
    out.ln(0, "(* a building is lost when its last closed member opens in this window *)");
    out.ln(0, "FOR b := 0 TO N_BUILDINGS - 1 DO");
    out.ln(1, "all_open := TRUE;");
    out.ln(1, "any_prev := FALSE;");
    out.ln(1, "FOR g := 0 TO N_GENS - 1 DO");
    out.ln(2, "IF GEN_BLDG[g] = b THEN");
    out.ln(3, "IF CUR_GEN_CLOSED[g] THEN");
    out.ln(4, "all_open := FALSE;");
    out.ln(3, "END_IF;");
    out.ln(3, "IF PREV_GEN_CLOSED[g] THEN");
    out.ln(4, "any_prev := TRUE;");
    out.ln(3, "END_IF;");
    out.ln(2, "END_IF;");
    out.ln(1, "END_FOR;");
    out.ln(1, "BLDG_FIRE[b] := all_open AND any_prev;");
    out.ln(0, "END_FOR;");
    out.ln();
    out.ln(0, "(* first matching event in catalog order wins; its column is the trip set *)");
    out.ln(0, "FOR e := 0 TO N_EVENTS - 1 DO");
    out.ln(1, "IF NOT DETECTED THEN");
    out.ln(2, "fires := FALSE;");
    out.ln(2, "IF EV_KIND[e] = 0 THEN");
    out.ln(3, "IF PREV_GEN_CLOSED[EV_TARGET[e]] AND NOT CUR_GEN_CLOSED[EV_TARGET[e]] AND NOT BLDG_FIRE[GEN_BLDG[EV_TARGET[e]]] THEN");
    out.ln(4, "fires := TRUE;");
    out.ln(3, "END_IF;");
    out.ln(2, "ELSIF EV_KIND[e] = 1 THEN");
    out.ln(3, "IF PREV_BUSTIE_CLOSED[EV_TARGET[e]] AND NOT CUR_BUSTIE_CLOSED[EV_TARGET[e]] THEN");
    out.ln(4, "fires := TRUE;");
    out.ln(3, "END_IF;");
    out.ln(2, "ELSIF EV_KIND[e] = 2 THEN");
    out.ln(3, "fires := BLDG_FIRE[EV_TARGET[e]];");
    out.ln(2, "ELSIF PREV_TIE_CLOSED AND NOT CUR_TIE_CLOSED THEN");
    out.ln(3, "fires := TRUE;");
    out.ln(2, "END_IF;");
    out.ln(2, "IF fires THEN");
    out.ln(3, "DETECTED := TRUE;");
    out.ln(3, "EVENT_INDEX := e;");
    out.ln(3, "FOR l := 0 TO N_LOADS - 1 DO");
    out.ln(4, "TRIP[l] := MATRIX[e, l];");
    out.ln(3, "END_FOR;");
    out.ln(2, "END_IF;");
    out.ln(1, "END_IF;");
    out.ln(0, "END_FOR;");
    out.ln(0, "END_FUNCTION_BLOCK");
}

st::Variable bool_array(const std::vector<bool>& v) {
    st::Variable var;
    var.type = st::Type::boolean;
    const std::size_t n = v.empty() ? 1 : v.size();
    var.dims = {{0, static_cast<long long>(n) - 1}};
    var.data.assign(n, st::Value::of_bool(false));
    for (std::size_t i = 0; i < v.size(); ++i) var.data[i] = st::Value::of_bool(v[i]);
    return var;
}

st::Variable real_array(const std::vector<double>& v) {
    st::Variable var;
    var.type = st::Type::real;
    const std::size_t n = v.empty() ? 1 : v.size();
    var.dims = {{0, static_cast<long long>(n) - 1}};
    var.data.assign(n, st::Value::of_real(0.0));
    for (std::size_t i = 0; i < v.size(); ++i) var.data[i] = st::Value::of_real(v[i]);
    return var;
}

st::Variable scalar_bool(bool v) {
    st::Variable var;
    var.type = st::Type::boolean;
    var.data.assign(1, st::Value::of_bool(v));
    return var;
}

st::Variable scalar_real(double v) {
    st::Variable var;
    var.type = st::Type::real;
    var.data.assign(1, st::Value::of_real(v));
    return var;
}

}  // namespace

StProgram emit_st(const GridConfig& config, const StOptions& options) {
    ValidationReport report = validate_config(config);
    if (!report.ok()) {
        throw PreconditionError("invalid config: " + report.findings.front().message);
    }
    if (!st_identifier_ok(options.lse_block) || !st_identifier_ok(options.edsa_block) ||
        options.lse_block == options.edsa_block) {
        throw PreconditionError("block names must be distinct ST identifiers");
    }

    const EventCatalog catalog = enumerate_events(config);
    const PlantTables tables = build_tables(config, catalog);

    Emitter out;
    out.ln(0, "(* IEC 61131-3 structured text for event-driven fast load shedding. *)");
    out.ln(0, "(* " + options.lse_block + ": cyclic shedding-matrix computation from live measurements. *)");
    out.ln(0, "(* " + options.edsa_block + ": breaker-transition detection and trip-column lookup. *)");
    out.ln();
    emit_lse_block(out, config, tables, catalog, options.lse_block);
    out.ln();
    emit_edsa_block(out, config, tables, catalog, options.edsa_block);

    StProgram program;
    program.source = out.take();
    program.lse_block = options.lse_block;
    program.edsa_block = options.edsa_block;
    program.n_gens = static_cast<int>(config.generators.size());
    program.n_loads = static_cast<int>(config.loads.size());
    program.n_busbars = static_cast<int>(config.busbars.size());
    program.n_busties = static_cast<int>(config.busties.size());
    program.n_buildings = static_cast<int>(catalog.buildings.size());
    program.n_events = static_cast<int>(catalog.size());
    return program;
}

st::Env st_lse_inputs(const GridConfig& config, const NetworkSnapshot& snap) {
    if (snap.gen_sr_mw.size() != config.generators.size()) {
        throw PreconditionError("snapshot lacks SR values; normalize_snapshot first");
    }
    st::Env env;
    env.emplace("GEN_CLOSED", bool_array(snap.gen_closed));
    env.emplace("GEN_P_MW", real_array(snap.gen_power_mw));
    env.emplace("GEN_SR_MW", real_array(snap.gen_sr_mw));
    env.emplace("LOAD_CLOSED", bool_array(snap.load_closed));
    env.emplace("LOAD_P_MW", real_array(snap.load_power_mw));
    env.emplace("BUSTIE_CLOSED", bool_array(snap.bustie_closed));
    env.emplace("TIE_CLOSED", scalar_bool(snap.tie_closed));
    env.emplace("TIE_P_MW", scalar_real(snap.imported_power_mw));
    return env;
}

st::Env st_edsa_inputs(const NetworkSnapshot& prev, const NetworkSnapshot& next,
                       const SheddingMatrix& matrix) {
    st::Env env;
    env.emplace("PREV_GEN_CLOSED", bool_array(prev.gen_closed));
    env.emplace("CUR_GEN_CLOSED", bool_array(next.gen_closed));
    env.emplace("PREV_BUSTIE_CLOSED", bool_array(prev.bustie_closed));
    env.emplace("CUR_BUSTIE_CLOSED", bool_array(next.bustie_closed));
    env.emplace("PREV_TIE_CLOSED", scalar_bool(prev.tie_closed));
    env.emplace("CUR_TIE_CLOSED", scalar_bool(next.tie_closed));

    st::Variable m;
    m.type = st::Type::boolean;
    const std::size_t rows = matrix.cols() == 0 ? 1 : matrix.cols();    // events
    const std::size_t cols = matrix.rows() == 0 ? 1 : matrix.rows();    // loads
    m.dims = {{0, static_cast<long long>(rows) - 1}, {0, static_cast<long long>(cols) - 1}};
    m.data.assign(rows * cols, st::Value::of_bool(false));
    for (std::size_t e = 0; e < matrix.cols(); ++e) {
        for (std::size_t l = 0; l < matrix.rows(); ++l) {
            m.data[e * cols + l] = st::Value::of_bool(matrix.entry(l, e));
        }
    }
    env.emplace("MATRIX", std::move(m));
    return env;
}

}  // namespace flsim
