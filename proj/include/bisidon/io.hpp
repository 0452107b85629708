#pragma once

#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "rational.hpp"

namespace bisidon {

// Input format: one rational per line (decimal integer or a/b), lines
// starting with '#' and blank lines ignored. Duplicates are an error.
inline std::vector<Rat> parse_value_lines(std::istream& in) {
    std::vector<Rat> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // trim
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(begin, end - begin + 1);
        if (token[0] == '#') continue;
        try {
            out.push_back(parse_rational(token));
        } catch (const input_error& e) {
            throw input_error("line " + std::to_string(lineno) + ": " +
                              e.what());
        }
    }
    as_sorted_set(out); // duplicate check
    return out;
}

inline std::vector<Rat> read_input_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file '" + path + "'");
    return parse_value_lines(in);
}

inline void write_value_file(const std::string& path,
                             const std::vector<Rat>& values,
                             const std::string& comment = "") {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open output file '" + path + "'");
    if (!comment.empty()) out << "# " << comment << '\n';
    for (const auto& v : values) out << rat_to_string(v) << '\n';
}

} // namespace bisidon
