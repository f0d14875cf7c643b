/// \file mesh_io.hpp
/// \brief Mesh JSON format, SVG rendering and the CSV schemas of the studies.
#ifndef VEMREC_MESH_IO_HPP
#define VEMREC_MESH_IO_HPP

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vemrec/bench.hpp"
#include "vemrec/mesh.hpp"

namespace vemrec {

// {"vertices": [[x,y],...], "cells": [[i,...],...], "meta": {family,n,seed}}
inline nlohmann::json mesh_to_json(const PolygonMesh& mesh) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Point2& p : mesh.vertices) j["vertices"].push_back({p.x, p.y});
    j["cells"] = nlohmann::json::array();
    for (const PolygonCell& c : mesh.cells) j["cells"].push_back(c.v);
    j["meta"] = {{"family", mesh.meta.family}, {"n", mesh.meta.n}, {"seed", mesh.meta.seed}};
    return j;
}

inline PolygonMesh mesh_from_json(const nlohmann::json& j) {
    std::vector<Point2> verts;
    for (const auto& v : j.at("vertices")) verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<PolygonCell> cells;
    for (const auto& c : j.at("cells")) {
        PolygonCell cell;
        for (const auto& vid : c) cell.v.push_back(vid.get<int>());
        cells.push_back(std::move(cell));
    }
    MeshMeta meta;
    if (j.contains("meta")) {
        meta.family = j["meta"].value("family", "");
        meta.n = j["meta"].value("n", 0);
        meta.seed = j["meta"].value("seed", std::uint64_t{0});
    }
    return build_topology(std::move(verts), std::move(cells), std::move(meta));
}

inline void write_mesh_json(const PolygonMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    require(os.good(), "write_mesh_json: cannot open " + path);
    os << mesh_to_json(mesh).dump(1) << "\n";
}

inline PolygonMesh read_mesh_json(const std::string& path) {
    std::ifstream is(path);
    require(is.good(), "read_mesh_json: cannot open " + path);
    nlohmann::json j;
    is >> j;
    return mesh_from_json(j);
}

// ---------------------------------------------------------------------------
// SVG rendering: cells as closed paths, optional per-cell fill by value.
// ---------------------------------------------------------------------------

struct SvgOptions {
    double width_px = 800.0;
    double stroke_width = 1.0;
    std::string colormap = "heat";          // "heat" or "gray"
    std::vector<double> cell_values;        // optional per-cell fill values
};

namespace detail {

inline std::string color_for(double t, const std::string& map) {
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (map == "gray") {
        r = g = b = static_cast<int>(255.0 * (1.0 - 0.85 * t));
    } else { // blue -> white -> red heat ramp
        if (t < 0.5) {
            const double s = t / 0.5;
            r = static_cast<int>(60 + 195 * s);
            g = static_cast<int>(90 + 165 * s);
            b = 255;
        } else {
            const double s = (t - 0.5) / 0.5;
            r = 255;
            g = static_cast<int>(255 - 195 * s);
            b = static_cast<int>(255 - 195 * s);
        }
    }
    std::ostringstream os;
    os << "rgb(" << r << "," << g << "," << b << ")";
    return os.str();
}

} // namespace detail

inline void write_mesh_svg(const PolygonMesh& mesh, const std::string& path, SvgOptions opt = {}) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Point2& p : mesh.vertices) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    const double span = std::max(xmax - xmin, ymax - ymin);
    const double scale = (span > 0.0) ? (opt.width_px - 20.0) / span : 1.0;
    const double height_px = (ymax - ymin) * scale + 20.0;
    auto X = [&](double x) { return (x - xmin) * scale + 10.0; };
    auto Y = [&](double y) { return height_px - ((y - ymin) * scale + 10.0); };

    double vmin = 0.0, vmax = 1.0;
    const bool filled = !opt.cell_values.empty();
    if (filled) {
        require(static_cast<int>(opt.cell_values.size()) == mesh.cell_count(),
                "write_mesh_svg: cell_values size mismatch");
        vmin = *std::min_element(opt.cell_values.begin(), opt.cell_values.end());
        vmax = *std::max_element(opt.cell_values.begin(), opt.cell_values.end());
        if (vmax <= vmin) vmax = vmin + 1.0;
    }

    std::ofstream os(path);
    require(os.good(), "write_mesh_svg: cannot open " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width_px << "\" height=\""
       << height_px << "\" viewBox=\"0 0 " << opt.width_px << " " << height_px << "\">\n";
    os << std::setprecision(8);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        os << "<path d=\"";
        const auto& cv = mesh.cells[static_cast<std::size_t>(c)].v;
        for (std::size_t k = 0; k < cv.size(); ++k) {
            const Point2 p = mesh.vertices[static_cast<std::size_t>(cv[k])];
            os << (k == 0 ? "M" : "L") << X(p.x) << " " << Y(p.y) << " ";
        }
        os << "Z\" fill=\"";
        if (filled)
            os << detail::color_for((opt.cell_values[static_cast<std::size_t>(c)] - vmin) / (vmax - vmin),
                                    opt.colormap);
        else
            os << "none";
        os << "\" stroke=\"black\" stroke-width=\"" << opt.stroke_width << "\"/>\n";
    }
    os << "</svg>\n";
}

// ---------------------------------------------------------------------------
// CSV schemas (column orders are stable; see README).
// ---------------------------------------------------------------------------

inline void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& os) {
    os << "level,n,dof,h,h1_error,supercloseness,recovered_error,"
          "h1_rate,supercloseness_rate,recovered_rate\n";
    os << std::setprecision(16);
    for (const auto& r : rows)
        os << r.level << "," << r.n << "," << r.dof << "," << r.h << "," << r.h1_error << ","
           << r.supercloseness << "," << r.recovered_error << "," << r.h1_rate << ","
           << r.supercloseness_rate << "," << r.recovered_rate << "\n";
}

inline void write_adaptive_csv(const std::vector<AdaptiveRow>& rows, std::ostream& os) {
    os << "iter,dof,eta_global,h1_error,recovered_error,kappa\n";
    os << std::setprecision(16);
    for (const auto& r : rows)
        os << r.iter << "," << r.dof << "," << r.eta_global << "," << r.h1_error << ","
           << r.recovered_error << "," << r.kappa << "\n";
}

inline void write_recovered_csv(const PolygonMesh& mesh, const RecoveredField& field, std::ostream& os) {
    os << "vertex_id,x,y,gx,gy\n";
    os << std::setprecision(16);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        os << v << "," << mesh.vertices[static_cast<std::size_t>(v)].x << ","
           << mesh.vertices[static_cast<std::size_t>(v)].y << "," << field.gx[v] << "," << field.gy[v]
           << "\n";
}

inline void write_solution_csv(const PolygonMesh& mesh, const DofVector& u, std::ostream& os) {
    os << "vertex_id,x,y,u\n";
    os << std::setprecision(16);
    for (int v = 0; v < mesh.vertex_count(); ++v)
        os << v << "," << mesh.vertices[static_cast<std::size_t>(v)].x << ","
           << mesh.vertices[static_cast<std::size_t>(v)].y << "," << u[v] << "\n";
}

} // namespace vemrec

#endif
