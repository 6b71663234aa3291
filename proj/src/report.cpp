#include "flrw/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "flrw/errors.hpp"

namespace flrw {

namespace {

using nlohmann::json;

constexpr const char* kMultiplierHeader = "t,s,xi,ell,beta,zone,rel_err_m1,rel_err_dtm1,lemma1_ratio";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') throw IoError("CSV must use LF line endings");
        out.push_back(line);
    }
    return out;
}

double parse_double(const std::string& cell) {
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end) throw IoError("not a number in CSV: '" + cell + "'");
    return v;
}

double lq_from_name(const std::string& name) {
    if (name.rfind("lq_", 0) != 0) throw IoError("unexpected CSV column " + name);
    return parse_double(name.substr(3));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

json fit_to_json(const DecayFit& f) {
    return {{"exponent", f.exponent},   {"intercept", f.intercept}, {"t_lo", f.t_lo},
            {"t_hi", f.t_hi},           {"residual", f.residual},   {"samples", f.samples},
            {"log_factor", f.log_factor}, {"local_slopes", f.local_slopes}};
}

DecayFit fit_from_json(const json& j) {
    DecayFit f;
    f.exponent = j.at("exponent").get<double>();
    f.intercept = j.at("intercept").get<double>();
    f.t_lo = j.at("t_lo").get<double>();
    f.t_hi = j.at("t_hi").get<double>();
    f.residual = j.at("residual").get<double>();
    f.samples = j.at("samples").get<int>();
    f.log_factor = j.at("log_factor").get<bool>();
    f.local_slopes = j.at("local_slopes").get<std::vector<double>>();
    return f;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string_view to_string(GrowthClass value) {
    switch (value) {
        case GrowthClass::growth: return "growth";
        case GrowthClass::decay: return "decay";
        case GrowthClass::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

GrowthClass parse_growth_class(std::string_view text) {
    for (GrowthClass g : {GrowthClass::growth, GrowthClass::decay, GrowthClass::indeterminate}) {
        if (to_string(g) == text) return g;
    }
    throw IoError("unknown growth class '" + std::string(text) + "'");
}

bool Report::operator==(const Report& o) const {
    return experiment == o.experiment && config == o.config && version == o.version && seed == o.seed &&
           status == o.status && passed == o.passed && fits == o.fits && comparisons == o.comparisons &&
           series == o.series && sweep == o.sweep && bracket_lo == o.bracket_lo &&
           bracket_hi == o.bracket_hi && monotone == o.monotone && samples == o.samples && notes == o.notes;
}

std::string decay_csv(const DecaySeries& series) {
    std::string out = "t,l2,linf";
    for (double q : series.q_list) out += "," + lq_column_name(q);
    out += "\n";
    for (const DecayRow& r : series.rows) {
        out += format_double(r.t) + "," + format_double(r.l2) + "," + format_double(r.linf);
        for (double v : r.lq) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

DecaySeries parse_decay_csv(const std::string& text) {
    const std::vector<std::string> lines = lines_of(text);
    if (lines.empty()) throw IoError("empty decay CSV");
    const std::vector<std::string> header = split(lines[0], ',');
    if (header.size() < 3 || header[0] != "t" || header[1] != "l2" || header[2] != "linf") {
        throw IoError("decay CSV header must start with t,l2,linf");
    }
    DecaySeries series;
    for (std::size_t c = 3; c < header.size(); ++c) series.q_list.push_back(lq_from_name(header[c]));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> cells = split(lines[i], ',');
        if (cells.size() != header.size()) throw IoError("decay CSV row has the wrong width");
        DecayRow r;
        r.t = parse_double(cells[0]);
        r.l2 = parse_double(cells[1]);
        r.linf = parse_double(cells[2]);
        for (std::size_t c = 3; c < cells.size(); ++c) r.lq.push_back(parse_double(cells[c]));
        series.rows.push_back(std::move(r));
    }
    return series;
}

std::string multiplier_csv(const std::vector<MultiplierRow>& rows) {
    std::string out = kMultiplierHeader;
    out += "\n";
    for (const MultiplierRow& r : rows) {
        out += format_double(r.t) + "," + format_double(r.s) + "," + format_double(r.xi) + "," +
               format_double(r.ell) + "," + format_double(r.beta) + "," + r.zone + "," +
               format_double(r.rel_err_m1) + "," + format_double(r.rel_err_dtm1) + "," +
               format_double(r.lemma1_ratio) + "\n";
    }
    return out;
}

std::vector<MultiplierRow> parse_multiplier_csv(const std::string& text) {
    const std::vector<std::string> lines = lines_of(text);
    if (lines.empty() || lines[0] != kMultiplierHeader) throw IoError("unexpected multiplier CSV header");
    std::vector<MultiplierRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> c = split(lines[i], ',');
        if (c.size() != 9) throw IoError("multiplier CSV row has the wrong width");
        MultiplierRow r;
        r.t = parse_double(c[0]);
        r.s = parse_double(c[1]);
        r.xi = parse_double(c[2]);
        r.ell = parse_double(c[3]);
        r.beta = parse_double(c[4]);
        r.zone = c[5];
        r.rel_err_m1 = parse_double(c[6]);
        r.rel_err_dtm1 = parse_double(c[7]);
        r.lemma1_ratio = parse_double(c[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "p,status,exponent,blowup_time,class\n";
    for (const SweepRow& r : rows) {
        out += format_double(r.p) + "," + r.status + "," + (r.exponent ? format_double(*r.exponent) : "") +
               "," + (r.blowup_time ? format_double(*r.blowup_time) : "") + "," +
               std::string(to_string(r.growth)) + "\n";
    }
    return out;
}

json report_to_json(const Report& r) {
    json j;
    j["experiment"] = r.experiment;
    j["config"] = r.config;
    j["provenance"] = {{"version", r.version}, {"seed", r.seed}};
    j["status"] = r.status;
    j["passed"] = r.passed;
    j["fits"] = json::array();
    for (const ColumnFit& f : r.fits) j["fits"].push_back({{"column", f.column}, {"fit", fit_to_json(f.fit)}});
    j["comparisons"] = json::array();
    for (const Comparison& c : r.comparisons) {
        j["comparisons"].push_back({{"column", c.column},
                                    {"measured", c.measured},
                                    {"predicted", c.predicted},
                                    {"case_tag", c.case_tag},
                                    {"variant", c.variant},
                                    {"tolerance", c.tolerance},
                                    {"pass", c.pass},
                                    {"required", c.required}});
    }
    json rows = json::array();
    for (const DecayRow& row : r.series.rows) rows.push_back({row.t, row.l2, row.linf, row.lq});
    j["series"] = {{"q_list", r.series.q_list}, {"rows", rows}};
    if (r.series.fit) j["series"]["fit"] = fit_to_json(*r.series.fit);
    j["sweep"] = json::array();
    for (const SweepRow& s : r.sweep) {
        j["sweep"].push_back({{"p", s.p},
                              {"status", s.status},
                              {"exponent", optional_number(s.exponent)},
                              {"blowup_time", optional_number(s.blowup_time)},
                              {"class", to_string(s.growth)}});
    }
    j["bracket"] = {optional_number(r.bracket_lo), optional_number(r.bracket_hi)};
    j["monotone"] = r.monotone;
    j["samples"] = json::array();
    for (const MultiplierRow& m : r.samples) {
        j["samples"].push_back({m.t, m.s, m.xi, m.ell, m.beta, m.zone, m.rel_err_m1, m.rel_err_dtm1,
                                m.lemma1_ratio});
    }
    j["notes"] = r.notes;
    return j;
}

Report report_from_json(const json& j) {
    try {
        Report r;
        r.experiment = j.at("experiment").get<std::string>();
        r.config = j.at("config");
        r.version = j.at("provenance").at("version").get<std::string>();
        r.seed = j.at("provenance").at("seed").get<std::uint64_t>();
        r.status = j.at("status").get<std::string>();
        r.passed = j.at("passed").get<bool>();
        for (const json& f : j.at("fits")) r.fits.push_back({f.at("column").get<std::string>(), fit_from_json(f.at("fit"))});
        for (const json& c : j.at("comparisons")) {
            Comparison x;
            x.column = c.at("column").get<std::string>();
            x.measured = c.at("measured").get<double>();
            x.predicted = c.at("predicted").get<double>();
            x.case_tag = c.at("case_tag").get<std::string>();
            x.variant = c.at("variant").get<std::string>();
            x.tolerance = c.at("tolerance").get<double>();
            x.pass = c.at("pass").get<bool>();
            x.required = c.at("required").get<bool>();
            r.comparisons.push_back(std::move(x));
        }
        const json& series = j.at("series");
        r.series.q_list = series.at("q_list").get<std::vector<double>>();
        for (const json& row : series.at("rows")) {
            r.series.rows.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>(),
                                     row.at(3).get<std::vector<double>>()});
        }
        if (series.contains("fit")) r.series.fit = fit_from_json(series.at("fit"));
        for (const json& s : j.at("sweep")) {
            SweepRow x;
            x.p = s.at("p").get<double>();
            x.status = s.at("status").get<std::string>();
            x.exponent = read_optional(s, "exponent");
            x.blowup_time = read_optional(s, "blowup_time");
            x.growth = parse_growth_class(s.at("class").get<std::string>());
            r.sweep.push_back(std::move(x));
        }
        const json& bracket = j.at("bracket");
        if (!bracket.at(0).is_null()) r.bracket_lo = bracket.at(0).get<double>();
        if (!bracket.at(1).is_null()) r.bracket_hi = bracket.at(1).get<double>();
        r.monotone = j.at("monotone").get<bool>();
        for (const json& m : j.at("samples")) {
            r.samples.push_back({m.at(0).get<double>(), m.at(1).get<double>(), m.at(2).get<double>(),
                                 m.at(3).get<double>(), m.at(4).get<double>(), m.at(5).get<std::string>(),
                                 m.at(6).get<double>(), m.at(7).get<double>(), m.at(8).get<double>()});
        }
        r.notes = j.at("notes").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed report: ") + e.what());
    }
}

std::string report_csv(const Report& report) {
    if (report.experiment == "verify_multipliers") return multiplier_csv(report.samples);
    if (report.experiment == "sweep") return sweep_csv(report.sweep);
    return decay_csv(report.series);
}

void export_csv(const Report& report, const std::string& path) { write_file(path, report_csv(report)); }

void export_json(const Report& report, const std::string& path) {
    write_file(path, report_to_json(report).dump(2) + "\n");
}

}  // namespace flrw
