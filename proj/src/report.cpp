#include "sclab/report.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "sclab/errors.hpp"
#include "sclab/util.hpp"

namespace sclab::report {

namespace {

using experiments::CheckLine;
using experiments::ConvergenceRecord;
using experiments::CriterionResult;
using nlohmann::json;

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

json record_to_json(const ConvergenceRecord& r) {
    return json{{"model", r.model},
                {"param_name", r.param_name},
                {"param_value", r.param_value},
                {"observable", r.observable},
                {"quantum", r.quantum},
                {"classical", r.classical},
                {"abs_error", r.abs_error}};
}

ConvergenceRecord record_from_json(const json& j) {
    ConvergenceRecord r;
    r.model = j.at("model").get<std::string>();
    r.param_name = j.at("param_name").get<std::string>();
    r.param_value = j.at("param_value").get<double>();
    r.observable = j.at("observable").get<std::string>();
    r.quantum = j.at("quantum").get<double>();
    r.classical = j.at("classical").get<double>();
    r.abs_error = j.at("abs_error").get<double>();
    return r;
}

json check_to_json(const CheckLine& l) {
    return json{{"label", l.label},           {"measured", l.measured},
                {"target", l.target},         {"tolerance", l.tolerance},
                {"pass", l.pass},             {"informational", l.informational}};
}

CheckLine check_from_json(const json& j) {
    CheckLine l;
    l.label = j.at("label").get<std::string>();
    l.measured = j.at("measured").get<double>();
    l.target = j.at("target").get<double>();
    l.tolerance = j.at("tolerance").get<double>();
    l.pass = j.at("pass").get<bool>();
    l.informational = j.at("informational").get<bool>();
    return l;
}

json criterion_to_json(const CriterionResult& c) {
    json checks = json::array();
    for (const auto& l : c.checks) checks.push_back(check_to_json(l));
    return json{{"id", c.id},
                {"name", c.name},
                {"pass", c.pass},
                {"note", c.note},
                {"checks", std::move(checks)}};
}

CriterionResult criterion_from_json(const json& j) {
    CriterionResult c;
    c.id = j.at("id").get<int>();
    c.name = j.at("name").get<std::string>();
    c.pass = j.at("pass").get<bool>();
    c.note = j.at("note").get<std::string>();
    for (const auto& l : j.at("checks")) c.checks.push_back(check_from_json(l));
    return c;
}

}  // namespace

bool operator==(const Report& a, const Report& b) {
    if (a.version != b.version || a.config_hash != b.config_hash ||
        a.timestamp != b.timestamp || a.dgr_sign != b.dgr_sign ||
        !same_bits(a.dgr_scale, b.dgr_scale) || a.criteria.size() != b.criteria.size() ||
        a.tables.size() != b.tables.size())
        return false;
    for (std::size_t i = 0; i < a.criteria.size(); ++i) {
        const auto& ca = a.criteria[i];
        const auto& cb = b.criteria[i];
        if (ca.id != cb.id || ca.name != cb.name || ca.pass != cb.pass ||
            ca.note != cb.note || ca.checks.size() != cb.checks.size())
            return false;
        for (std::size_t k = 0; k < ca.checks.size(); ++k) {
            const auto& la = ca.checks[k];
            const auto& lb = cb.checks[k];
            if (la.label != lb.label || !same_bits(la.measured, lb.measured) ||
                !same_bits(la.target, lb.target) ||
                !same_bits(la.tolerance, lb.tolerance) || la.pass != lb.pass ||
                la.informational != lb.informational)
                return false;
        }
    }
    for (std::size_t i = 0; i < a.tables.size(); ++i) {
        const auto& ra = a.tables[i];
        const auto& rb = b.tables[i];
        if (ra.model != rb.model || ra.param_name != rb.param_name ||
            !same_bits(ra.param_value, rb.param_value) || ra.observable != rb.observable ||
            !same_bits(ra.quantum, rb.quantum) || !same_bits(ra.classical, rb.classical) ||
            !same_bits(ra.abs_error, rb.abs_error))
            return false;
    }
    return true;
}

std::string render_records_csv(std::vector<experiments::ConvergenceRecord> records,
                               const std::string& config_hash) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ConvergenceRecord& a, const ConvergenceRecord& b) {
                         if (a.observable != b.observable) return a.observable < b.observable;
                         return a.param_value < b.param_value;
                     });
    std::string out = "# config_hash = " + config_hash + "\n";
    out += "model,param_name,param_value,observable,quantum,classical,abs_error\n";
    for (const auto& r : records) {
        out += r.model + "," + r.param_name + "," + util::format_g17(r.param_value) + "," +
               r.observable + "," + util::format_g17(r.quantum) + "," +
               util::format_g17(r.classical) + "," + util::format_g17(r.abs_error) + "\n";
    }
    return out;
}

std::string render_report_json(const Report& rep) {
    json criteria = json::array();
    for (const auto& c : rep.criteria) criteria.push_back(criterion_to_json(c));
    json tables = json::array();
    for (const auto& r : rep.tables) tables.push_back(record_to_json(r));
    const json j{{"version", rep.version},
                 {"config_hash", rep.config_hash},
                 {"timestamp", rep.timestamp},
                 {"convention", json{{"sign", rep.dgr_sign}, {"scale", rep.dgr_scale}}},
                 {"criteria", std::move(criteria)},
                 {"tables", std::move(tables)}};
    return j.dump(2) + "\n";
}

Report parse_report_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        Report rep;
        rep.version = j.at("version").get<std::string>();
        rep.config_hash = j.at("config_hash").get<std::string>();
        rep.timestamp = j.at("timestamp").get<std::string>();
        rep.dgr_sign = j.at("convention").at("sign").get<int>();
        rep.dgr_scale = j.at("convention").at("scale").get<double>();
        for (const auto& c : j.at("criteria")) rep.criteria.push_back(criterion_from_json(c));
        for (const auto& r : j.at("tables")) rep.tables.push_back(record_from_json(r));
        return rep;
    } catch (const json::exception& ex) {
        throw Error(std::string("report json: ") + ex.what());
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("short write to '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move '" + tmp + "' to '" + path + "'");
    }
}

void emit_records_csv(const std::vector<experiments::ConvergenceRecord>& records,
                      const std::string& config_hash, const std::string& path) {
    write_file_atomic(path, render_records_csv(records, config_hash));
}

void emit_report_json(const Report& rep, const std::string& path) {
    write_file_atomic(path, render_report_json(rep));
}

}  // namespace sclab::report
