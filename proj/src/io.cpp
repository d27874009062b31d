#include "hamlock/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hamlock {

namespace {

// Shortest-exact double formatting: 17 significant digits round-trip.
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("trailing characters in number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw ConfigError("not a number: " + s);
    }
}

template <typename Writer>
void to_file(const std::filesystem::path& path, Writer&& w) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path.string());
    w(os);
}

}  // namespace

void write_sequence_csv(std::ostream& os, const Sequence& u) {
    os << "t";
    for (int j = 1; j <= u.dim(); ++j) os << ",x_" << j;
    os << "\n";
    for (long t = u.first(); !u.is_zero() && t <= u.last(); ++t) {
        os << t;
        auto x = u.site(t);
        for (int j = 0; j < u.dim(); ++j) os << "," << fmt(x[j]);
        os << "\n";
    }
}

Sequence read_sequence_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("empty sequence CSV");
    auto header = split_csv(line);
    if (header.size() < 2 || header[0] != "t")
        throw ConfigError("sequence CSV must start with header t,x_1,...");
    int dim = static_cast<int>(header.size()) - 1;

    std::map<long, std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != dim + 1)
            throw ConfigError("sequence CSV row has wrong arity: " + line);
        long t = std::stol(cells[0]);
        std::vector<double> x(dim);
        for (int j = 0; j < dim; ++j) x[j] = parse_double(cells[j + 1]);
        rows[t] = std::move(x);
    }
    if (rows.empty()) return Sequence(dim);
    long lo = rows.begin()->first, hi = rows.rbegin()->first;
    std::vector<double> vals((hi - lo + 1) * dim, 0.0);
    for (const auto& [t, x] : rows)
        std::copy(x.begin(), x.end(), vals.begin() + (t - lo) * dim);
    return Sequence(dim, lo, std::move(vals));
}

void write_sequence_csv(const std::filesystem::path& path, const Sequence& u) {
    to_file(path, [&](std::ostream& os) { write_sequence_csv(os, u); });
}

Sequence read_sequence_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open sequence CSV: " + path.string());
    return read_sequence_csv(is);
}

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj) {
    os << "iter,f,grad_norm,step\n";
    for (size_t i = 0; i < traj.actions.size(); ++i)
        os << i << "," << fmt(traj.actions[i]) << "," << fmt(traj.grad_norms[i]) << ","
           << fmt(traj.step_sizes[i]) << "\n";
}

void write_trajectory_csv(const std::filesystem::path& path, const FlowTrajectory& traj) {
    to_file(path, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
}

void write_levels_csv(std::ostream& os, const std::vector<double>& levels) {
    os << "round,level\n";
    for (size_t i = 0; i < levels.size(); ++i) os << i + 1 << "," << fmt(levels[i]) << "\n";
}

void write_levels_csv(const std::filesystem::path& path, const std::vector<double>& levels) {
    to_file(path, [&](std::ostream& os) { write_levels_csv(os, levels); });
}

void write_profiles_csv(std::ostream& os, const std::vector<MassProfile>& rhos) {
    os << "iterate,t,rho\n";
    for (size_t i = 0; i < rhos.size(); ++i)
        for (size_t j = 0; j < rhos[i].values.size(); ++j)
            os << i << "," << rhos[i].base + static_cast<long>(j) << ","
               << fmt(rhos[i].values[j]) << "\n";
}

std::vector<MassProfile> read_profiles_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || split_csv(line) != std::vector<std::string>{"iterate", "t", "rho"})
        throw ConfigError("profiles CSV must start with header iterate,t,rho");
    std::map<long, std::map<long, double>> table;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) throw ConfigError("profiles CSV row has wrong arity: " + line);
        table[std::stol(cells[0])][std::stol(cells[1])] = parse_double(cells[2]);
    }
    std::vector<MassProfile> out;
    for (const auto& [idx, row] : table) {
        if (row.empty()) continue;
        MassProfile p;
        p.base = row.begin()->first;
        long hi = row.rbegin()->first;
        p.values.assign(hi - p.base + 1, 0.0);
        for (const auto& [t, v] : row) p.values[t - p.base] = v;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<MassProfile> read_profiles_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open profiles CSV: " + path.string());
    return read_profiles_csv(is);
}

}  // namespace hamlock
