#include "sclab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>

#include "sclab/errors.hpp"
#include "sclab/util.hpp"

namespace sclab::config {

namespace {

using classical::ModelId;

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& v, int line, const std::string& key) {
    const std::string t = trim(v);
    if (t.empty()) throw TypeMismatch(line, key + " expects a number, got an empty value");
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size())
        throw TypeMismatch(line, key + " expects a number, got '" + t + "'");
    return x;
}

int to_int(const std::string& v, int line, const std::string& key) {
    const std::string t = trim(v);
    if (t.empty()) throw TypeMismatch(line, key + " expects an integer, got an empty value");
    char* end = nullptr;
    const long x = std::strtol(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size())
        throw TypeMismatch(line, key + " expects an integer, got '" + t + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& v, int line, const std::string& key) {
    const std::string t = trim(v);
    if (t == "true") return true;
    if (t == "false") return false;
    throw TypeMismatch(line, key + " expects true or false, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& v, int line, const std::string& key) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw TypeMismatch(line, key + " has an empty list element");
        out.push_back(item);
    }
    if (out.empty()) throw TypeMismatch(line, key + " expects a comma-separated list");
    return out;
}

std::vector<double> to_double_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split_list(v, line, key)) out.push_back(to_double(item, line, key));
    return out;
}

std::vector<int> to_int_list(const std::string& v, int line, const std::string& key) {
    std::vector<int> out;
    for (const auto& item : split_list(v, line, key)) out.push_back(to_int(item, line, key));
    return out;
}

ModelId to_model(const std::string& v, int line) {
    const std::string t = trim(v);
    if (t == "double_well") return ModelId::double_well;
    if (t == "curie_weiss") return ModelId::curie_weiss;
    if (t == "bose_hubbard") return ModelId::bose_hubbard;
    throw TypeMismatch(line, "kind expects double_well, curie_weiss or bose_hubbard, got '" +
                                 t + "'");
}

std::string model_text(ModelId id) {
    switch (id) {
        case ModelId::double_well:
            return "double_well";
        case ModelId::curie_weiss:
            return "curie_weiss";
        case ModelId::bose_hubbard:
            return "bose_hubbard";
    }
    return "curie_weiss";
}

void apply_model_key(RunConfig& cfg, const std::string& key, const std::string& value,
                     int line) {
    if (key == "kind")
        cfg.kind = to_model(value, line);
    else if (key == "J")
        cfg.J = to_double(value, line, key);
    else if (key == "B")
        cfg.B = to_double(value, line, key);
    else if (key == "hbar")
        cfg.hbar = to_double(value, line, key);
    else if (key == "box")
        cfg.box = to_double(value, line, key);
    else if (key == "points")
        cfg.points = to_int(value, line, key);
    else if (key == "n")
        cfg.n = to_int(value, line, key);
    else
        throw UnknownKey(line, "[model] " + key);
}

void apply_sweep_key(RunConfig& cfg, const std::string& key, const std::string& value,
                     int line) {
    if (key == "n_values")
        cfg.n_values = to_int_list(value, line, key);
    else if (key == "hbar_values")
        cfg.hbar_values = to_double_list(value, line, key);
    else if (key == "observables")
        cfg.observables = split_list(value, line, key);
    else if (key == "include_energy")
        cfg.include_energy = to_bool(value, line, key);
    else if (key == "workers")
        cfg.workers = to_int(value, line, key);
    else
        throw UnknownKey(line, "[sweep] " + key);
}

void apply_perturbation_key(RunConfig& cfg, const std::string& key, const std::string& value,
                            int line) {
    if (key == "kind") {
        const std::string t = trim(value);
        if (t != "none" && t != "field" && t != "bump")
            throw TypeMismatch(line, "kind expects none, field or bump, got '" + t + "'");
        cfg.perturbation = t;
    } else if (key == "epsilon")
        cfg.epsilon = to_double(value, line, key);
    else if (key == "epsilons")
        cfg.epsilons = to_double_list(value, line, key);
    else if (key == "delta")
        cfg.delta = to_double(value, line, key);
    else if (key == "q0")
        cfg.q0 = to_double(value, line, key);
    else if (key == "w")
        cfg.w = to_double(value, line, key);
    else
        throw UnknownKey(line, "[perturbation] " + key);
}

void apply_output_key(RunConfig& cfg, const std::string& key, const std::string& value,
                      int line) {
    if (key == "format") {
        const std::string t = trim(value);
        if (t != "csv" && t != "json" && t != "both")
            throw TypeMismatch(line, "format expects csv, json or both, got '" + t + "'");
        cfg.format = t;
    } else if (key == "prefix") {
        const std::string t = trim(value);
        if (t.empty() || t.find('/') != std::string::npos || t.find('\\') != std::string::npos)
            throw TypeMismatch(line, "prefix expects a bare file stem, got '" + t + "'");
        cfg.prefix = t;
    } else {
        throw UnknownKey(line, "[output] " + key);
    }
}

std::string join_names(const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += ",";
        out += names[i];
    }
    return out;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += util::format_g17(values[i]);
    }
    return out;
}

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace

std::string RunConfig::canonical() const {
    std::string out;
    out += "[model]\n";
    out += "kind = " + model_text(kind) + "\n";
    out += "J = " + util::format_g17(J) + "\n";
    out += "B = " + util::format_g17(B) + "\n";
    out += "hbar = " + util::format_g17(hbar) + "\n";
    out += "box = " + util::format_g17(box) + "\n";
    out += "points = " + std::to_string(points) + "\n";
    out += "n = " + std::to_string(n) + "\n";
    out += "[sweep]\n";
    out += "n_values = " + join_ints(n_values) + "\n";
    out += "hbar_values = " + join_doubles(hbar_values) + "\n";
    if (!observables.empty()) out += "observables = " + join_names(observables) + "\n";
    out += std::string("include_energy = ") + (include_energy ? "true" : "false") + "\n";
    out += "workers = " + std::to_string(workers) + "\n";
    out += "[perturbation]\n";
    out += "kind = " + perturbation + "\n";
    out += "epsilon = " + util::format_g17(epsilon) + "\n";
    out += "epsilons = " + join_doubles(epsilons) + "\n";
    out += "delta = " + util::format_g17(delta) + "\n";
    out += "q0 = " + util::format_g17(q0) + "\n";
    out += "w = " + util::format_g17(w) + "\n";
    out += "[output]\n";
    out += "format = " + format + "\n";
    out += "prefix = " + prefix + "\n";
    return out;
}

std::string RunConfig::hash() const {
    return util::hex64(util::fnv1a64(canonical()));
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;

        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ParseError(line, "unterminated section header '" + stripped + "'");
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name != "model" && name != "sweep" && name != "perturbation" &&
                name != "output")
                throw UnknownKey(line, "[" + name + "]");
            section = name;
            continue;
        }

        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ParseError(line, "missing key before '='");
        if (section.empty())
            throw ParseError(line, "key '" + key + "' appears before any [section]");

        if (section == "model")
            apply_model_key(cfg, key, value, line);
        else if (section == "sweep")
            apply_sweep_key(cfg, key, value, line);
        else if (section == "perturbation")
            apply_perturbation_key(cfg, key, value, line);
        else
            apply_output_key(cfg, key, value, line);
    }
    return cfg;
}

}  // namespace sclab::config
