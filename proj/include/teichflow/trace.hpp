#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "teichflow/slopes.hpp"
#include "teichflow/torus.hpp"

namespace teichflow {

/// Locale-independent "%.12g" formatting used for every CSV/stdout number.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/**
 * @brief One record of a discretized flow trajectory: time, projected torus
 *        point (when the backend has one), raw length functionals over the
 *        curve family, their sup-normalized values, and the worst diagnostic
 *        residual for that sample.
 */
struct FlowSample {
    double t = 0.0;
    std::optional<TorusPoint> tau;
    std::vector<double> raw;
    std::vector<double> normalized;
    double residual = 0.0;
};

/**
 * @brief Time-indexed sequence of length-functional samples over a fixed
 *        curve family. Times are strictly increasing; raw values are
 *        nonnegative and each normalized vector has sup-norm 1.
 */
struct FlowTrace {
    CurveFamily family;
    std::vector<FlowSample> samples;

    void append(FlowSample sample) {
        if (sample.raw.size() != family.size() || sample.normalized.size() != family.size())
            throw FamilyError("FlowTrace: sample width does not match family");
        if (!samples.empty() && !(sample.t > samples.back().t))
            throw ConfigError("FlowTrace: times must be strictly increasing");
        samples.push_back(std::move(sample));
    }
};

/**
 * @brief CSV serialization: columns t, tau_re, tau_im, then per slope
 *        L[p/q], N[p/q], then residual. tau columns are blank when the
 *        backend has no half-plane projection.
 */
inline std::string trace_to_csv(const FlowTrace& trace) {
    std::string out = "t,tau_re,tau_im";
    for (const Slope& s : trace.family)
        out += ",L[" + to_string(s) + "],N[" + to_string(s) + "]";
    out += ",residual\n";
    for (const FlowSample& sm : trace.samples) {
        out += format_number(sm.t);
        if (sm.tau) {
            out += "," + format_number(sm.tau->x) + "," + format_number(sm.tau->y);
        } else {
            out += ",,";
        }
        for (std::size_t i = 0; i < trace.family.size(); ++i)
            out += "," + format_number(sm.raw[i]) + "," + format_number(sm.normalized[i]);
        out += "," + format_number(sm.residual) + "\n";
    }
    return out;
}

namespace detail {
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') { cells.push_back(cur); cur.clear(); }
        else if (ch != '\r') cur += ch;
    }
    cells.push_back(cur);
    return cells;
}
} // namespace detail

/// Parses CSV produced by trace_to_csv. Throws ConfigError on malformed input.
inline FlowTrace trace_from_csv(const std::string& csv) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : csv) {
        if (ch == '\n') { lines.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    if (!cur.empty()) lines.push_back(cur);
    if (lines.empty()) throw ConfigError("trace_from_csv: empty input");

    auto header = detail::split_csv_line(lines[0]);
    if (header.size() < 6 || header[0] != "t" || header[1] != "tau_re" ||
        header[2] != "tau_im" || header.back() != "residual" ||
        (header.size() - 4) % 2 != 0)
        throw ConfigError("trace_from_csv: unrecognized header");

    FlowTrace trace;
    std::size_t pairs = (header.size() - 4) / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        const std::string& lcol = header[3 + 2 * i];
        if (lcol.size() < 4 || lcol.substr(0, 2) != "L[" || lcol.back() != ']')
            throw ConfigError("trace_from_csv: bad slope column \"" + lcol + "\"");
        try {
            trace.family.push_back(parse_slope(lcol.substr(2, lcol.size() - 3)));
        } catch (const InvalidSlope&) {
            throw ConfigError("trace_from_csv: bad slope column \"" + lcol + "\"");
        }
    }

    auto to_double = [](const std::string& cell) {
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size() || cell.empty())
            throw ConfigError("trace_from_csv: bad numeric cell \"" + cell + "\"");
        return v;
    };

    for (std::size_t row = 1; row < lines.size(); ++row) {
        if (lines[row].empty()) continue;
        auto cells = detail::split_csv_line(lines[row]);
        if (cells.size() != header.size())
            throw ConfigError("trace_from_csv: row width mismatch");
        FlowSample sm;
        sm.t = to_double(cells[0]);
        if (!cells[1].empty() && !cells[2].empty())
            sm.tau = TorusPoint(to_double(cells[1]), to_double(cells[2]));
        for (std::size_t i = 0; i < pairs; ++i) {
            sm.raw.push_back(to_double(cells[3 + 2 * i]));
            sm.normalized.push_back(to_double(cells[4 + 2 * i]));
        }
        sm.residual = to_double(cells.back());
        trace.append(std::move(sm));
    }
    if (trace.samples.empty())
        throw ConfigError("trace_from_csv: no samples");
    return trace;
}

} // namespace teichflow
