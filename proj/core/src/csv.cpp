#include "flsim/csv.hpp"

#include <charconv>

#include "flsim/errors.hpp"

namespace flsim {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw Error("double formatting failed");
    return std::string(buf, ptr);
}

double parse_double_field(const std::string& field) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw FileParseError("<csv>", 0, 0, "not a number: '" + field + "'");
    }
    return value;
}

std::string matrix_csv(const SheddingMatrix& matrix) {
    std::string out = "load_id";
    for (const Event& ev : matrix.catalog.events) {
        out += ',';
        out += ev.label;
    }
    out += '\n';
    for (std::size_t l = 0; l < matrix.rows(); ++l) {
        out += matrix.load_ids[l];
        for (std::size_t e = 0; e < matrix.cols(); ++e) {
            out += matrix.entry(l, e) ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

std::string trace_csv(const GridConfig& config, const SimTrace& trace) {
    std::string out = "time_s,frequency_hz,total_load_mw";
    for (const auto& g : config.generators) {
        out += ",gen_";
        out += g.id;
        out += "_mw";
    }
    out += '\n';
    for (std::size_t k = 0; k < trace.time_s.size(); ++k) {
        out += format_double(trace.time_s[k]);
        out += ',';
        out += format_double(trace.frequency_hz[k]);
        out += ',';
        out += format_double(trace.total_load_mw[k]);
        for (std::size_t g = 0; g < trace.gen_power_mw.size(); ++g) {
            out += ',';
            out += format_double(trace.gen_power_mw[g][k]);
        }
        out += '\n';
    }
    return out;
}

std::string surface_csv(const NadirSurface& surface) {
    std::string out = "sr_mw,delay_s,nadir_hz,blackout\n";
    for (std::size_t i = 0; i < surface.rows(); ++i) {
        for (std::size_t j = 0; j < surface.cols(); ++j) {
            out += format_double(surface.sr_mw[i]);
            out += ',';
            out += format_double(surface.delay_s[j]);
            out += ',';
            out += format_double(surface.nadir_hz[i][j]);
            out += surface.blackout[i][j] ? ",1\n" : ",0\n";
        }
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        pos = end + 1;
        ++line_no;

        std::vector<std::string> fields = split_fields(line);
        if (line_no == 1) {
            table.header = std::move(fields);
            continue;
        }
        if (line.empty() && pos >= text.size()) break;  // trailing newline
        if (fields.size() != table.header.size()) {
            throw FileParseError("<csv>", line_no, 0,
                                 "expected " + std::to_string(table.header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty() || (table.header.size() == 1 && table.header[0].empty())) {
        throw FileParseError("<csv>", 1, 0, "missing header row");
    }
    return table;
}

}  // namespace flsim
