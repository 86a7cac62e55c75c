#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade::species {

// Alkali D1 line data plus an atomic-radius scale for the momentum cutoff.
// These are external constants carried with their source strings; nothing
// here is derived inside the library.
struct SpeciesData {
    std::string name;
    double lambda_D1 = 0.0;      // m, idler transition wavelength
    double gamma3 = 0.0;         // s^-1, natural linewidth (angular)
    double atomic_radius = 0.0;  // m
    std::string source;
};

// Built-in table mirroring data/species.tsv.
inline std::vector<SpeciesData> default_species_table() {
    return {
        {"Na", 589.756e-9, 6.154e7, 1.80e-10, "Steck Na D line data; Slater 1964 radii"},
        {"K", 770.108e-9, 3.743e7, 2.20e-10, "Tiecke K D line data; Slater 1964 radii"},
        {"Rb", 794.979e-9, 3.611e7, 2.35e-10, "Steck Rb-87 D line data; Slater 1964 radii"},
        {"Cs", 894.593e-9, 2.863e7, 2.60e-10, "Steck Cs D line data; Slater 1964 radii"},
    };
}

// Whitespace-separated table: name lambda_D1_m gamma3_per_s atomic_radius_m
// source... (rest of line). '#' starts a comment.
inline std::vector<SpeciesData> parse_species_table(std::istream& in) {
    std::vector<SpeciesData> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        SpeciesData row;
        if (!(ss >> row.name)) continue;  // blank line
        if (!(ss >> row.lambda_D1 >> row.gamma3 >> row.atomic_radius))
            throw ConfigError("species:" + std::to_string(line_no),
                              "expected: name lambda_D1_m gamma3_per_s atomic_radius_m source");
        std::getline(ss, row.source);
        const auto start = row.source.find_first_not_of(" \t");
        row.source = start == std::string::npos ? "" : row.source.substr(start);
        if (!(row.lambda_D1 > 0.0) || !(row.gamma3 > 0.0) || !(row.atomic_radius > 0.0))
            throw ConfigError("species:" + std::to_string(line_no),
                              "all numeric columns must be positive");
        out.push_back(std::move(row));
    }
    return out;
}

inline std::vector<SpeciesData> load_species_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("species_file", "cannot open " + path);
    return parse_species_table(in);
}

inline const SpeciesData& find_species(const std::vector<SpeciesData>& table,
                                       const std::string& name) {
    for (const auto& s : table)
        if (s.name == name) return s;
    throw ConfigError("species", "unknown species " + name);
}

} // namespace cascade::species
