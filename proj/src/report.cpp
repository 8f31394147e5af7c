#include "mixou/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mixou/errors.hpp"

namespace mixou {

namespace {

constexpr std::string_view kCsvHeader = "H,theta_true,T,delta,l,mean,sdev";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_number(std::string_view text) {
    text = trim(text);
    if (text == "NA") return std::nan("");
    if (const auto slash = text.find('/'); slash != std::string_view::npos)
        return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ArgumentError("cannot parse number '" + std::string(text) + "'");
    return v;
}

std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ArgumentError("cannot parse integer '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_list(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') throw ArgumentError("unterminated list '" + std::string(text) + "'");
        text = text.substr(1, text.size() - 2);
    }
    std::vector<double> out;
    for (const auto item : split(text, ','))
        if (!trim(item).empty()) out.push_back(parse_number(item));
    return out;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

ReportFormat parse_format(std::string_view name) {
    if (name == "csv") return ReportFormat::CSV;
    if (name == "json") return ReportFormat::JSON;
    throw ArgumentError("unknown report format '" + std::string(name) + "'");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string emit_report(const SummaryTable& table, ReportFormat format) {
    if (format == ReportFormat::CSV) {
        std::string out(kCsvHeader);
        out += '\n';
        for (const auto& r : table) {
            out += format_double(r.H) + ',' + format_double(r.theta_true) + ',' + format_double(r.T) + ',' +
                   format_double(r.delta) + ',' + std::to_string(r.l) + ',' + format_double(r.mean) + ',' +
                   format_double(r.sdev) + '\n';
        }
        return out;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table) {
        rows.push_back({{"H", r.H},
                        {"theta_true", r.theta_true},
                        {"T", r.T},
                        {"delta", r.delta},
                        {"l", r.l},
                        {"mean", number_or_null(r.mean)},
                        {"sdev", number_or_null(r.sdev)},
                        {"missing", r.missing()}});
    }
    nlohmann::json doc{{"schema_version", kReportSchemaVersion}, {"kind", "summary_table"}, {"rows", rows}};
    return doc.dump(2) + '\n';
}

nlohmann::json to_json(const PhiStats& s) {
    return {{"count", s.count},       {"mean", s.mean},         {"median", s.median},
            {"sdev", s.sdev},         {"skewness", s.skewness}, {"kurtosis", s.kurtosis}};
}

std::string emit_report(const PhiRun& run, const nlohmann::json& parameters, ReportFormat format) {
    if (format != ReportFormat::JSON) throw ArgumentError("phi statistics are emitted as JSON only");
    nlohmann::json doc{{"schema_version", kReportSchemaVersion},
                       {"kind", "phi_stats"},
                       {"parameters", parameters},
                       {"failures", run.failures},
                       {"stats", to_json(run.stats)},
                       {"histogram", {{"lo", run.bins.lo}, {"hi", run.bins.hi}, {"counts", run.bins.counts}}}};
    return doc.dump(2) + '\n';
}

SummaryTable parse_summary_csv(std::string_view text) {
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines.front()) != kCsvHeader) throw ArgumentError("not a summary table CSV");
    SummaryTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 7) throw ArgumentError("summary row " + std::to_string(i) + " needs 7 fields");
        table.push_back({parse_number(f[0]), parse_number(f[1]), parse_number(f[2]), parse_number(f[3]),
                         static_cast<std::size_t>(parse_unsigned(f[4])), parse_number(f[5]), parse_number(f[6])});
    }
    return table;
}

nlohmann::json to_json(const EstimateResult& r) {
    return {{"name", std::string(to_string(r.name))},
            {"value", r.value},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"inputs_digest", r.inputs_digest}};
}

ExperimentSpec parse_experiment_config(std::string_view text) {
    ExperimentSpec spec;
    std::map<std::string, bool> seen;
    std::size_t lineno = 0;
    for (auto line : split(text, '\n')) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        if (seen[key]) throw ArgumentError("config key '" + key + "' given twice");
        seen[key] = true;

        if (key == "H")
            spec.H = parse_list(value);
        else if (key == "theta")
            spec.theta = parse_list(value);
        else if (key == "T")
            spec.T = parse_list(value);
        else if (key == "delta")
            spec.delta = parse_list(value);
        else if (key == "reps")
            spec.reps = parse_unsigned(value);
        else if (key == "seed")
            spec.seed = parse_unsigned(value);
        else if (key == "threads")
            spec.threads = parse_unsigned(value);
        else if (key == "method")
            spec.method = parse_method(value);
        else if (key == "estimator") {
            if (value == "ergodic")
                spec.estimator = EstimatorKind::ERGODIC;
            else if (value == "lse")
                spec.estimator = EstimatorKind::LSE_NONERGODIC;
            else if (value == "oracle")
                spec.estimator = EstimatorKind::LSE_ORACLE;
            else
                throw ArgumentError("unknown estimator '" + std::string(value) + "'");
        } else {
            throw ArgumentError("unknown config key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

}  // namespace mixou
