#include "blm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blm {
namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool parse_pair_line(const std::string& line, std::array<double, 2>& out) {
    std::string s = line;
    for (char& ch : s)
        if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream is(s);
    double a, b;
    if (!(is >> a >> b)) return false;
    out = {a, b};
    return true;
}

}  // namespace

std::string sample_to_csv(const std::vector<std::array<double, 2>>& pairs) {
    std::ostringstream os;
    os << "u1,u2\n";
    for (const auto& p : pairs) os << fmt17(p[0]) << ',' << fmt17(p[1]) << '\n';
    return os.str();
}

void write_sample_csv(const std::string& path, const std::vector<std::array<double, 2>>& pairs) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << sample_to_csv(pairs);
    if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<std::array<double, 2>> parse_pairs_csv(const std::string& text) {
    std::vector<std::array<double, 2>> out;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::array<double, 2> p{};
        if (!parse_pair_line(line, p)) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw std::runtime_error("malformed data row " + std::to_string(lineno) + ": " + line);
        }
        first = false;
        out.push_back(p);
    }
    return out;
}

std::vector<std::array<double, 2>> read_pairs_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_pairs_csv(os.str());
}

}  // namespace blm
