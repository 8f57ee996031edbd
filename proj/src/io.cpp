#include "ceop/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ceop {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

bool parse_double(const std::string& field, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(field, &used);
        // Allow trailing whitespace only.
        for (std::size_t k = used; k < field.size(); ++k) {
            if (!std::isspace(static_cast<unsigned char>(field[k]))) {
                return false;
            }
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

std::string csv_field(const std::string& line, int column) {
    std::size_t start = 0;
    for (int c = 0; c < column; ++c) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            return {};
        }
        start = comma + 1;
    }
    const auto end = line.find(',', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

std::vector<double> read_series_file(const std::string& path, int csv_column) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        // Skip blanks and comment lines.
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const std::string field = csv_column >= 0 ? csv_field(line, csv_column) : line;
        double v = 0.0;
        if (!parse_double(field, v)) {
            if (!seen_data) {
                seen_data = true;  // header line
                continue;
            }
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": not a number");
        }
        if (!std::isfinite(v)) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": non-finite value");
        }
        seen_data = true;
        values.push_back(v);
    }
    return values;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace ceop
