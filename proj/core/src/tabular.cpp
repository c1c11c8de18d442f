#include "solvdyn/tabular.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace solvdyn {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read '" + path + "'");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ','))
        cells.push_back(cell);
    return cells;
}

double parse_double(const std::string& text, const std::string& path) {
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw ConfigError("bad numeric cell '" + text + "' in '" + path + "'");
    }
}

void expect_header(std::ifstream& in, const std::string& expected, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != expected)
        throw ConfigError("'" + path + "' does not start with header '" + expected + "'");
}

} // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_series_csv(const std::string& path, const ObservableSeries& series) {
    std::ofstream out = open_out(path);
    out << "t,value\n";
    for (size_t i = 0; i < series.times.size(); ++i)
        out << format_double(series.times[i]) << ',' << format_double(series.values[i]) << '\n';
}

ObservableSeries read_series_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_header(in, "t,value", path);
    ObservableSeries series;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != 2)
            throw ConfigError("bad row in '" + path + "'");
        series.times.push_back(parse_double(cells[0], path));
        series.values.push_back(parse_double(cells[1], path));
    }
    return series;
}

void write_moments_csv(const std::string& path, std::span<const ObservableSeries> series) {
    std::ofstream out = open_out(path);
    out << "t,n,value\n";
    if (series.empty())
        return;
    const size_t n_times = series.front().times.size();
    for (const ObservableSeries& s : series)
        if (s.times.size() != n_times)
            throw ConfigError("moment series lengths differ");
    for (size_t i = 0; i < n_times; ++i)
        for (const ObservableSeries& s : series)
            out << format_double(s.times[i]) << ',' << s.order << ','
                << format_double(s.values[i]) << '\n';
}

std::vector<ObservableSeries> read_moments_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    expect_header(in, "t,n,value", path);
    std::map<int, ObservableSeries> by_order;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != 3)
            throw ConfigError("bad row in '" + path + "'");
        const int order = static_cast<int>(parse_double(cells[1], path));
        ObservableSeries& series = by_order[order];
        series.kind = ObservableSeries::Kind::RawMoment;
        series.order = order;
        series.times.push_back(parse_double(cells[0], path));
        series.values.push_back(parse_double(cells[2], path));
    }
    std::vector<ObservableSeries> out;
    out.reserve(by_order.size());
    for (auto& [order, series] : by_order)
        out.push_back(std::move(series));
    return out;
}

void write_portrait_csv(const std::string& path, const PhasePortrait& portrait) {
    std::ofstream out = open_out(path);
    out << "alpha,k,epsilon0_critical,status\n";
    for (size_t ik = 0; ik < portrait.ks.size(); ++ik)
        for (size_t ia = 0; ia < portrait.alphas.size(); ++ia) {
            const int cell = portrait.index(static_cast<int>(ia), static_cast<int>(ik));
            out << format_double(portrait.alphas[ia]) << ',' << format_double(portrait.ks[ik])
                << ',' << format_double(portrait.critical[cell]) << ',' << portrait.status[cell]
                << '\n';
        }
}

void write_smax_csv(const std::string& path, std::span<const SMaxCurve> curves) {
    std::ofstream out = open_out(path);
    out << "alpha,k,epsilon0,s_max\n";
    for (const SMaxCurve& curve : curves)
        for (size_t i = 0; i < curve.epsilon0s.size(); ++i)
            out << format_double(curve.alpha) << ',' << format_double(curve.k) << ','
                << format_double(curve.epsilon0s[i]) << ',' << format_double(curve.s_max[i])
                << '\n';
}

void write_oracle_csv(const std::string& path, const EnsembleResult& result) {
    std::ofstream out = open_out(path);
    out << "t,n,mean,stderr\n";
    for (const MomentEstimate& m : result.moments)
        out << format_double(m.time) << ',' << m.order << ',' << format_double(m.mean) << ','
            << format_double(m.std_error) << '\n';
}

} // namespace solvdyn
