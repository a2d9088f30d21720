#pragma once

#include <string>
#include <vector>

#include "sclab/classical.hpp"

namespace sclab::config {

/// Typed run configuration, parsed from flat INI-style text with four
/// sections. Every field has a default, so the empty text is a valid
/// config (the mean-field chain at B = 0.5 with the standard N sweep).
struct RunConfig {
    // [model]
    classical::ModelId kind = classical::ModelId::curie_weiss;
    double J = 1.0;     ///< chain coupling (curie_weiss)
    double B = 0.5;     ///< transverse field (curie_weiss)
    double hbar = 0.1;  ///< single-solve hbar (double_well)
    double box = 8.0;   ///< position half-width (double_well)
    int points = 2048;  ///< interior grid points (double_well)
    int n = 100;        ///< single-solve size (spin models)

    // [sweep]
    std::vector<int> n_values = {50, 100, 200, 500, 1000};
    std::vector<double> hbar_values = {0.5, 0.2, 0.1, 0.05, 0.02};
    /// Observable names from the fixed catalog; empty selects the model's
    /// default set (x, z, z2 on the spin spaces; q, q2, p2 on the plane).
    std::vector<std::string> observables;
    bool include_energy = true;
    int workers = 0;

    // [perturbation]
    std::string perturbation = "none";  ///< none | field | bump
    double epsilon = 1e-3;              ///< single-solve field strength
    std::vector<double> epsilons = {-1e-3, 1e-3};  ///< field-scan strengths
    double delta = 0.1;                 ///< bump amplitude
    double q0 = 1.0;                    ///< bump center
    double w = 0.2;                     ///< bump width

    // [output]
    std::string format = "both";  ///< csv | json | both
    std::string prefix = "run";   ///< output file stem (no path separators)

    /// Deterministic canonical text: every key in a fixed order, doubles at
    /// 17 significant digits. parse_config(canonical()) reproduces *this.
    std::string canonical() const;

    /// 16 hex digits of the FNV-1a digest of canonical(); embedded in every
    /// output file so results can be traced to the exact configuration.
    std::string hash() const;
};

/// Parses INI-style text: `[section]` headers, `key = value` lines, `#`
/// comments (full-line or trailing), blank lines ignored. Later duplicates
/// of a key override earlier ones. Throws ParseError for malformed lines,
/// UnknownKey for keys or sections outside the schema, TypeMismatch for
/// values that do not parse as the key's type — each carrying the 1-based
/// line number.
RunConfig parse_config(const std::string& text);

}  // namespace sclab::config
