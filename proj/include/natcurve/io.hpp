#pragma once

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "natcurve/analysis.hpp"
#include "natcurve/error.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/solver.hpp"

namespace natcurve {

inline constexpr const char* csv_header = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,tau";

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// One row per node, 17 significant digits, '\n' line ends. Bishop samples use the
/// same columns for (T, N1, N2, k1, k2).
inline void write_csv(const CurveSamples& samples, std::ostream& os) {
    const std::size_t n = samples.size();
    if (samples.frame.size() != n || samples.kappa.size() != n || samples.tau.size() != n ||
        samples.grid.size() != n) {
        throw Error(ErrorCode::GridMismatch, "sample columns have inconsistent lengths");
    }
    os << csv_header << '\n';
    os << std::setprecision(17);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& x = samples.position[i];
        const Frame& f = samples.frame[i];
        os << samples.grid.node(i);
        for (const double v : {x.x, x.y, x.z, f.e1.x, f.e1.y, f.e1.z, f.e2.x, f.e2.y, f.e2.z, f.e3.x, f.e3.y, f.e3.z,
                               samples.kappa[i], samples.tau[i]}) {
            os << ',' << v;
        }
        os << '\n';
    }
}

inline void export_csv(const CurveSamples& samples, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing: " + std::strerror(errno));
    write_csv(samples, os);
    os.flush();
    if (!os) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

/// Parses CSV written by write_csv. The s column must be a uniform grid.
inline CurveSamples read_csv(std::istream& is, const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::Parse, source + ": empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw Error(ErrorCode::Parse, source + ": header does not match '" + csv_header + "'");
    std::vector<std::array<double, 15>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, 15> row{};
        const char* p = line.c_str();
        for (std::size_t k = 0; k < 15; ++k) {
            char* end = nullptr;
            errno = 0;
            row[k] = std::strtod(p, &end);
            if (end == p) {
                throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno) + ": bad number in column " +
                                                  std::to_string(k + 1));
            }
            p = end;
            if (k + 1 < 15) {
                if (*p != ',') {
                    throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno) + ": expected 15 columns");
                }
                ++p;
            }
        }
        if (*p != '\0') throw Error(ErrorCode::Parse, source + ":" + std::to_string(lineno) + ": trailing data");
        rows.push_back(row);
    }
    if (rows.size() < 2) throw Error(ErrorCode::GridTooSmall, source + ": need at least 2 rows");
    CurveSamples out;
    out.grid = Grid({rows.front()[0], rows.back()[0]}, rows.size() - 1);
    const double tol = 1e-9 * std::max({1.0, std::fabs(rows.front()[0]), std::fabs(rows.back()[0])});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (std::fabs(r[0] - out.grid.node(i)) > tol) {
            throw Error(ErrorCode::GridMismatch, source + ": s column is not uniform at row " + std::to_string(i + 1));
        }
        out.position.push_back({r[1], r[2], r[3]});
        out.frame.push_back(Frame{{r[4], r[5], r[6]}, {r[7], r[8], r[9]}, {r[10], r[11], r[12]}});
        out.kappa.push_back(r[13]);
        out.tau.push_back(r[14]);
    }
    return out;
}

inline CurveSamples import_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading: " + std::strerror(errno));
    return read_csv(is, path);
}

// ---------------------------------------------------------------------------
// Apparatus <-> samples
// ---------------------------------------------------------------------------

inline CurveSamples to_samples(const FrenetApparatus& app, const Vec3& x0) {
    CurveSamples out;
    out.grid = app.grid();
    out.frame = app.frames.frames;
    out.position = integrate_positions(app.frames, x0);
    out.kappa = app.kappa.sample(out.grid);
    out.tau = app.tau.sample(out.grid);
    return out;
}

inline CurveSamples to_samples(const BishopApparatus& app, const Vec3& x0) {
    CurveSamples out;
    out.grid = app.grid();
    out.frame = app.frames.frames;
    out.position = integrate_positions(app.frames, x0);
    out.kappa = app.k1.sample(out.grid);
    out.tau = app.k2.sample(out.grid);
    out.kind = FrameKind::bishop;
    return out;
}

inline FrenetApparatus frenet_from_samples(const CurveSamples& s) {
    return {FrameField{s.grid, s.frame}, ScalarField::table(s.grid, s.kappa), ScalarField::table(s.grid, s.tau)};
}

inline BishopApparatus bishop_from_samples(const CurveSamples& s) {
    return {FrameField{s.grid, s.frame}, ScalarField::table(s.grid, s.kappa), ScalarField::table(s.grid, s.tau)};
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const VerificationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"worst_node", c.worst_node},
                          {"worst_s", c.worst_s}});
    }
    return {{"passed", report.passed()}, {"checks", checks}};
}

inline nlohmann::json to_json(const Classification& c) {
    nlohmann::json j{{"family", to_string(c.family)}};
    if (c.theta) j["theta"] = *c.theta;
    if (c.slope) j["slope"] = *c.slope;
    return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading: " + std::strerror(errno));
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::Parse, path + ": " + e.what());
    }
}

} // namespace natcurve
