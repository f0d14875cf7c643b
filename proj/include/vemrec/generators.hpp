/// \file generators.hpp
/// \brief The benchmark mesh families: uniform squares, clipped hexagonal
///        tilings, chevron concave tilings, randomly perturbed quads, the
///        sinusoidally transformed hexagons, Lloyd-smoothed Voronoi meshes and
///        the uniform L-shape grid. Deterministic given (family, n, seed).
#ifndef VEMREC_GENERATORS_HPP
#define VEMREC_GENERATORS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vemrec/mesh.hpp"

namespace vemrec {

enum class MeshFamily { T1, T2, T3, T4, T5, T6, LShape };

inline std::string family_name(MeshFamily f) {
    switch (f) {
        case MeshFamily::T1: return "t1";
        case MeshFamily::T2: return "t2";
        case MeshFamily::T3: return "t3";
        case MeshFamily::T4: return "t4";
        case MeshFamily::T5: return "t5";
        case MeshFamily::T6: return "t6";
        case MeshFamily::LShape: return "lshape";
    }
    return "?";
}

inline MeshFamily family_from_name(const std::string& s) {
    if (s == "t1") return MeshFamily::T1;
    if (s == "t2") return MeshFamily::T2;
    if (s == "t3") return MeshFamily::T3;
    if (s == "t4") return MeshFamily::T4;
    if (s == "t5") return MeshFamily::T5;
    if (s == "t6") return MeshFamily::T6;
    if (s == "lshape") return MeshFamily::LShape;
    throw Error("unknown mesh family '" + s + "'");
}

inline const std::array<MeshFamily, 6>& unit_square_families() {
    static const std::array<MeshFamily, 6> fams{MeshFamily::T1, MeshFamily::T2, MeshFamily::T3,
                                                MeshFamily::T4, MeshFamily::T5, MeshFamily::T6};
    return fams;
}

namespace detail {

// Tolerance-based vertex merging on a hash grid.
class VertexWelder {
  public:
    explicit VertexWelder(double tol) : tol_(tol) {}

    int add(Point2 p) {
        const long ix = static_cast<long>(std::floor(p.x / tol_));
        const long iy = static_cast<long>(std::floor(p.y / tol_));
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy) {
                const auto it = grid_.find({ix + dx, iy + dy});
                if (it == grid_.end()) continue;
                for (int id : it->second)
                    if (dist(points_[static_cast<std::size_t>(id)], p) <= tol_) return id;
            }
        const int id = static_cast<int>(points_.size());
        points_.push_back(p);
        grid_[{ix, iy}].push_back(id);
        return id;
    }

    const std::vector<Point2>& points() const { return points_; }

  private:
    double tol_;
    std::vector<Point2> points_;
    std::map<std::pair<long, long>, std::vector<int>> grid_;
};

inline PolygonMesh mesh_from_polygons(const std::vector<std::vector<Point2>>& polys, double weld_tol,
                                      MeshMeta meta) {
    VertexWelder welder(weld_tol);
    std::vector<PolygonCell> cells;
    cells.reserve(polys.size());
    for (const auto& poly : polys) {
        PolygonCell cell;
        for (const Point2& p : poly) {
            const int id = welder.add(p);
            if (cell.v.empty() || cell.v.back() != id) cell.v.push_back(id);
        }
        while (cell.v.size() > 1 && cell.v.front() == cell.v.back()) cell.v.pop_back();
        if (cell.v.size() >= 3) cells.push_back(std::move(cell));
    }
    return build_topology(welder.points(), std::move(cells), std::move(meta));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Voronoi cells of seeds in the unit square by incremental bisector clipping.
// Cell vertices are welded through canonical labels (seed triples, seed pairs
// on a wall, wall corners) so shared vertices agree exactly across cells.
// ---------------------------------------------------------------------------

namespace voronoi {

struct EdgeLabel {
    // kind 0..3: walls x=0, x=1, y=0, y=1; kind 4: bisector of seeds (i, j)
    int kind = -1;
    int i = -1;
    int j = -1;
};

struct LabeledPoly {
    std::vector<Point2> pts;
    std::vector<EdgeLabel> labels; // labels[k] belongs to edge pts[k] -> pts[k+1]
};

inline LabeledPoly unit_square_poly() {
    LabeledPoly sq;
    sq.pts = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    sq.labels = {{2, -1, -1}, {1, -1, -1}, {3, -1, -1}, {0, -1, -1}};
    return sq;
}

inline LabeledPoly clip_labeled(const LabeledPoly& poly, Point2 a, Point2 nrm, EdgeLabel cut) {
    LabeledPoly out;
    const std::size_t m = poly.pts.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Point2 p = poly.pts[k];
        const Point2 q = poly.pts[(k + 1) % m];
        const double dp = dot(nrm, p - a);
        const double dq = dot(nrm, q - a);
        if (dp <= 0.0) {
            out.pts.push_back(p);
            out.labels.push_back(poly.labels[k]);
            if (dq > 0.0) {
                const double t = dp / (dp - dq);
                out.pts.push_back(p + t * (q - p));
                out.labels.push_back(cut);
            }
        } else if (dq <= 0.0) {
            const double t = dp / (dp - dq);
            out.pts.push_back(p + t * (q - p));
            out.labels.push_back(poly.labels[k]);
        }
    }
    return out;
}

// Canonical vertex key from the two edge labels meeting there.
struct VertexKey {
    std::array<int, 4> k{-1, -1, -1, -1};
    bool operator<(const VertexKey& o) const { return k < o.k; }
};

inline VertexKey make_key(const EdgeLabel& a, const EdgeLabel& b) {
    VertexKey key;
    if (a.kind < 4 && b.kind < 4) {
        key.k = {0, std::min(a.kind, b.kind), std::max(a.kind, b.kind), -1};
    } else if (a.kind < 4 || b.kind < 4) {
        const EdgeLabel& wall = (a.kind < 4) ? a : b;
        const EdgeLabel& bis = (a.kind < 4) ? b : a;
        key.k = {1, wall.kind, std::min(bis.i, bis.j), std::max(bis.i, bis.j)};
    } else {
        // two bisectors of one cell always share a seed; key on the triple
        std::array<int, 4> ids{a.i, a.j, b.i, b.j};
        std::sort(ids.begin(), ids.end());
        std::array<int, 3> uniq{ids[0], -1, -1};
        int u = 1;
        for (int t = 1; t < 4; ++t)
            if (ids[static_cast<std::size_t>(t)] != ids[static_cast<std::size_t>(t - 1)]) {
                require(u < 3, "voronoi: disjoint bisector pair at a cell vertex");
                uniq[static_cast<std::size_t>(u++)] = ids[static_cast<std::size_t>(t)];
            }
        require(u == 3, "voronoi: bisector pair does not define a triple");
        key.k = {2, uniq[0], uniq[1], uniq[2]};
    }
    return key;
}

inline Point2 wall_point(int wall, double along) {
    switch (wall) {
        case 0: return {0.0, along};
        case 1: return {1.0, along};
        case 2: return {along, 0.0};
        default: return {along, 1.0};
    }
}

// Canonical coordinates for a vertex key, computed once from the seeds.
inline Point2 key_point(const VertexKey& key, std::span<const Point2> seeds) {
    if (key.k[0] == 0) {
        const int w1 = key.k[1], w2 = key.k[2];
        return {(w1 == 1 || w2 == 1) ? 1.0 : 0.0, (w1 == 3 || w2 == 3) ? 1.0 : 0.0};
    }
    if (key.k[0] == 1) {
        const int wall = key.k[1];
        const Point2 p = seeds[static_cast<std::size_t>(key.k[2])];
        const Point2 q = seeds[static_cast<std::size_t>(key.k[3])];
        const Point2 m = midpoint(p, q);
        const Point2 d{-(q.y - p.y), q.x - p.x}; // bisector direction
        if (wall <= 1) {
            const double x = (wall == 0) ? 0.0 : 1.0;
            require(std::abs(d.x) > 0.0, "voronoi: bisector parallel to wall");
            return {x, m.y + (x - m.x) / d.x * d.y};
        }
        const double y = (wall == 2) ? 0.0 : 1.0;
        require(std::abs(d.y) > 0.0, "voronoi: bisector parallel to wall");
        return {m.x + (y - m.y) / d.y * d.x, y};
    }
    // circumcenter of the seed triple
    const Point2 a = seeds[static_cast<std::size_t>(key.k[1])];
    const Point2 b = seeds[static_cast<std::size_t>(key.k[2])];
    const Point2 c = seeds[static_cast<std::size_t>(key.k[3])];
    const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    require(std::abs(d) > 0.0, "voronoi: collinear seed triple");
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
}

// Bucket grid for candidate enumeration in nondecreasing ring distance.
class SeedGrid {
  public:
    explicit SeedGrid(std::span<const Point2> seeds) : seeds_(seeds) {
        g_ = std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(seeds.size())))));
        cell_ = 1.0 / g_;
        buckets_.assign(static_cast<std::size_t>(g_) * g_, {});
        for (std::size_t i = 0; i < seeds.size(); ++i)
            buckets_[bucket_of(seeds[i])].push_back(static_cast<int>(i));
    }

    int rings() const { return g_; }
    double cell_size() const { return cell_; }

    // all seeds whose bucket is at Chebyshev distance `r` from the seed's bucket
    void ring(Point2 center, int r, std::vector<int>& out) const {
        out.clear();
        const int cx = clampi(static_cast<int>(std::floor(center.x / cell_)));
        const int cy = clampi(static_cast<int>(std::floor(center.y / cell_)));
        for (int ix = cx - r; ix <= cx + r; ++ix)
            for (int iy = cy - r; iy <= cy + r; ++iy) {
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != r) continue;
                if (ix < 0 || iy < 0 || ix >= g_ || iy >= g_) continue;
                const auto& b = buckets_[static_cast<std::size_t>(iy) * g_ + static_cast<std::size_t>(ix)];
                out.insert(out.end(), b.begin(), b.end());
            }
    }

  private:
    int clampi(int v) const { return std::min(std::max(v, 0), g_ - 1); }
    std::size_t bucket_of(Point2 p) const {
        return static_cast<std::size_t>(clampi(static_cast<int>(std::floor(p.y / cell_)))) * g_ +
               static_cast<std::size_t>(clampi(static_cast<int>(std::floor(p.x / cell_))));
    }
    std::span<const Point2> seeds_;
    int g_ = 1;
    double cell_ = 1.0;
    std::vector<std::vector<int>> buckets_;
};

// Voronoi cell of seed i restricted to the unit square. A bisector at
// distance d can only cut the current polygon when d <= 2 r_max, so the
// ring sweep stops once every unprocessed candidate is past that bound.
inline LabeledPoly cell_of(std::span<const Point2> seeds, int i, const SeedGrid& grid) {
    LabeledPoly poly = unit_square_poly();
    const Point2 s = seeds[static_cast<std::size_t>(i)];
    auto r_max = [&]() {
        double r = 0.0;
        for (const Point2& p : poly.pts) r = std::max(r, dist(p, s));
        return r;
    };
    double reach = r_max();
    std::vector<int> ring_ids;
    std::vector<std::pair<double, int>> batch;
    for (int r = 0;; ++r) {
        if (r > 1 && (r - 1) * grid.cell_size() > 2.0 * reach) break;
        if (r > 2 * grid.rings()) break;
        grid.ring(s, r, ring_ids);
        batch.clear();
        for (int j : ring_ids)
            if (j != i) batch.emplace_back(dist(seeds[static_cast<std::size_t>(j)], s), j);
        std::sort(batch.begin(), batch.end());
        for (const auto& [d, j] : batch) {
            if (d > 2.0 * reach) break;
            require(d > 0.0, "voronoi: duplicate seeds");
            const Point2 t = seeds[static_cast<std::size_t>(j)];
            poly = clip_labeled(poly, midpoint(s, t), t - s,
                                EdgeLabel{4, std::min(i, j), std::max(i, j)});
            require(poly.pts.size() >= 3, "voronoi: cell clipped away");
            reach = r_max();
        }
    }
    return poly;
}

inline std::vector<LabeledPoly> diagram(std::span<const Point2> seeds) {
    const SeedGrid grid(seeds);
    std::vector<LabeledPoly> cells;
    cells.reserve(seeds.size());
    for (int i = 0; i < static_cast<int>(seeds.size()); ++i) cells.push_back(cell_of(seeds, i, grid));
    return cells;
}

inline std::vector<Point2> lloyd_relax(std::vector<Point2> seeds, int iterations) {
    for (int it = 0; it < iterations; ++it) {
        const auto cells = diagram(seeds);
        for (std::size_t i = 0; i < seeds.size(); ++i)
            seeds[i] = polygon_area_centroid(cells[i].pts).second;
    }
    return seeds;
}

inline PolygonMesh mesh_from_diagram(std::span<const Point2> seeds, MeshMeta meta) {
    const auto cells = diagram(seeds);
    std::map<VertexKey, int> key_ids;
    detail::VertexWelder welder(1e-12);
    std::vector<PolygonCell> mesh_cells;
    mesh_cells.reserve(cells.size());
    for (const auto& poly : cells) {
        PolygonCell cell;
        const std::size_t m = poly.pts.size();
        for (std::size_t k = 0; k < m; ++k) {
            const VertexKey key = make_key(poly.labels[(k + m - 1) % m], poly.labels[k]);
            auto it = key_ids.find(key);
            int id;
            if (it != key_ids.end()) {
                id = it->second;
            } else {
                id = welder.add(key_point(key, seeds));
                key_ids.emplace(key, id);
            }
            if (!cell.v.empty() && cell.v.back() == id) continue;
            cell.v.push_back(id);
        }
        while (cell.v.size() > 1 && cell.v.front() == cell.v.back()) cell.v.pop_back();
        require(cell.v.size() >= 3, "voronoi: degenerate cell after welding");
        mesh_cells.push_back(std::move(cell));
    }
    return build_topology(welder.points(), std::move(mesh_cells), std::move(meta));
}

} // namespace voronoi

namespace detail {

inline PolygonMesh generate_t1(int n) {
    std::vector<Point2> verts;
    verts.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    std::vector<PolygonCell> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    auto vid = [&](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            cells.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)}});
    return build_topology(std::move(verts), std::move(cells), {"t1", n, 0});
}

// Pointy-top hexagon tiling, width 1/n, rows rescaled so an integer number
// fits the unit height; boundary cells are the exact clipped halves/quarters.
inline PolygonMesh generate_t2(int n, MeshMeta meta) {
    const double w = 1.0 / n;
    const int rows = std::max(1, static_cast<int>(std::lround(2.0 * n / std::sqrt(3.0))));
    const double ry = 2.0 / (3.0 * rows);
    std::vector<std::vector<Point2>> polys;
    for (int j = 0; j <= rows; ++j) {
        const double cy = static_cast<double>(j) / rows;
        const bool odd = (j % 2) != 0;
        const int i_end = odd ? n - 1 : n;
        for (int i = 0; i <= i_end; ++i) {
            const double cx = odd ? (i + 0.5) * w : i * w;
            std::vector<Point2> hex = {{cx, cy + ry},           {cx - 0.5 * w, cy + 0.5 * ry},
                                       {cx - 0.5 * w, cy - 0.5 * ry}, {cx, cy - ry},
                                       {cx + 0.5 * w, cy - 0.5 * ry}, {cx + 0.5 * w, cy + 0.5 * ry}};
            hex = clip_halfplane(hex, {0.0, 0.0}, {-1.0, 0.0});
            hex = clip_halfplane(hex, {1.0, 1.0}, {1.0, 0.0});
            hex = clip_halfplane(hex, {0.0, 0.0}, {0.0, -1.0});
            hex = clip_halfplane(hex, {1.0, 1.0}, {0.0, 1.0});
            hex = dedup_ring(hex, 1e-12 * w);
            if (hex.size() >= 3 && polygon_signed_area(hex) > 1e-12 * w * ry) polys.push_back(std::move(hex));
        }
    }
    return mesh_from_polygons(polys, 1e-9 * w, std::move(meta));
}

// n x n blocks, each split into two congruent concave hexagons by a chevron
// through the block center with amplitude one quarter of the block width.
inline PolygonMesh generate_t3(int n) {
    const double u = 1.0 / (4.0 * n);
    VertexWelder welder(1e-12);
    auto vid = [&](int ix, int iy) { return welder.add({ix * u, iy * u}); };
    std::vector<PolygonCell> cells;
    cells.reserve(2 * static_cast<std::size_t>(n) * n);
    for (int bj = 0; bj < n; ++bj)
        for (int bi = 0; bi < n; ++bi) {
            const int x0 = 4 * bi, y0 = 4 * bj;
            cells.push_back({{vid(x0, y0), vid(x0 + 4, y0), vid(x0 + 4, y0 + 2), vid(x0 + 3, y0 + 1),
                              vid(x0 + 1, y0 + 3), vid(x0, y0 + 2)}});
            cells.push_back({{vid(x0, y0 + 2), vid(x0 + 1, y0 + 3), vid(x0 + 3, y0 + 1), vid(x0 + 4, y0 + 2),
                              vid(x0 + 4, y0 + 4), vid(x0, y0 + 4)}});
        }
    return build_topology(welder.points(), std::move(cells), {"t3", n, 0});
}

inline PolygonMesh generate_t4(int n, std::uint64_t seed) {
    PolygonMesh base = generate_t1(n);
    const double rho = 0.25;
    const double amp = rho * base.h; // h = sqrt(2)/n on the uniform square mesh
    std::mt19937_64 rng(seed);
    std::vector<Point2> verts = base.vertices;
    std::vector<int> interior;
    for (int v = 0; v < base.vertex_count(); ++v)
        if (!base.boundary_vertex[static_cast<std::size_t>(v)]) interior.push_back(v);
    auto displace = [&](int v) {
        const Point2 orig = base.vertices[static_cast<std::size_t>(v)];
        verts[static_cast<std::size_t>(v)] = {orig.x + uniform(rng, -amp, amp),
                                              orig.y + uniform(rng, -amp, amp)};
    };
    for (int v : interior) displace(v);

    auto cell_ok = [&](const PolygonCell& c) {
        std::vector<Point2> pts;
        for (int vid : c.v) pts.push_back(verts[static_cast<std::size_t>(vid)]);
        return polygon_signed_area(pts) > 0.0 && polygon_is_simple(pts);
    };
    for (int attempt = 0; attempt < 64; ++attempt) {
        bool all_ok = true;
        for (const auto& c : base.cells) {
            if (cell_ok(c)) continue;
            all_ok = false;
            for (int vid : c.v)
                if (!base.boundary_vertex[static_cast<std::size_t>(vid)]) displace(vid);
        }
        if (all_ok) return build_topology(std::move(verts), base.cells, {"t4", n, seed});
    }
    throw MeshError("generate_t4: could not untangle perturbed mesh");
}

inline Point2 sin_transform(Point2 p) {
    const double bump = 0.1 * std::sin(2.0 * M_PI * p.x) * std::sin(2.0 * M_PI * p.y);
    return {p.x + bump, p.y + bump};
}

inline PolygonMesh generate_t5(int n) {
    PolygonMesh hex = generate_t2(n, {"t5", n, 0});
    std::vector<Point2> verts;
    verts.reserve(hex.vertices.size());
    for (const Point2& p : hex.vertices) verts.push_back(sin_transform(p));
    return build_topology(std::move(verts), hex.cells, {"t5", n, 0});
}

inline constexpr int kLloydIterations = 20;

inline std::vector<Point2> t6_seeds(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point2> seeds;
    seeds.reserve(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n * n; ++k) seeds.push_back({uniform01(rng), uniform01(rng)});
    return voronoi::lloyd_relax(std::move(seeds), kLloydIterations);
}

inline PolygonMesh generate_t6(int n, std::uint64_t seed) {
    return voronoi::mesh_from_diagram(t6_seeds(n, seed), {"t6", n, seed});
}

inline PolygonMesh generate_lshape(int n) {
    VertexWelder welder(1e-12);
    auto vid = [&](int i, int j) { return welder.add({static_cast<double>(i) / n - 1.0, static_cast<double>(j) / n - 1.0}); };
    std::vector<PolygonCell> cells;
    for (int j = 0; j < 2 * n; ++j)
        for (int i = 0; i < 2 * n; ++i) {
            const bool removed_quadrant = (i >= n) && (j < n); // (0,1) x (-1,0)
            if (removed_quadrant) continue;
            cells.push_back({{vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)}});
        }
    return build_topology(welder.points(), std::move(cells), {"lshape", n, 0});
}

} // namespace detail

inline PolygonMesh generate(MeshFamily family, int n, std::uint64_t seed = 1) {
    require(n >= 2, "generate: n must be >= 2");
    switch (family) {
        case MeshFamily::T1: return detail::generate_t1(n);
        case MeshFamily::T2: return detail::generate_t2(n, {"t2", n, 0});
        case MeshFamily::T3: return detail::generate_t3(n);
        case MeshFamily::T4: return detail::generate_t4(n, seed);
        case MeshFamily::T5: return detail::generate_t5(n);
        case MeshFamily::T6: return detail::generate_t6(n, seed);
        case MeshFamily::LShape: return detail::generate_lshape(n);
    }
    throw Error("generate: unknown family");
}

} // namespace vemrec

#endif
