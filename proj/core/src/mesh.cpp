#include "habitat/mesh.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace habitat {

std::string to_string(BoundaryTag tag) {
    switch (tag) {
    case BoundaryTag::Lateral: return "lateral";
    case BoundaryTag::Bottom: return "bottom";
    case BoundaryTag::Top: return "top";
    }
    return "?";
}

double SpaceTimeMesh::total_area() const {
    double s = 0.0;
    for (const auto& tr : triangles) s += tr.area;
    return s;
}

std::string SpaceTimeMesh::dump() const {
    std::ostringstream os;
    os.precision(15);
    os << "vertices " << vertices.size() << '\n';
    for (const auto& v : vertices) os << v.t << ' ' << v.x << '\n';
    os << "triangles " << triangles.size() << '\n';
    for (const auto& tr : triangles)
        os << tr.v[0] << ' ' << tr.v[1] << ' ' << tr.v[2] << " area " << tr.area << '\n';
    os << "boundary " << boundary.size() << '\n';
    for (const auto& b : boundary)
        os << b.v0 << ' ' << b.v1 << ' ' << to_string(b.tag) << '\n';
    os << "facets " << facets.size() << '\n';
    for (const auto& f : facets)
        os << f.v0 << ' ' << f.v1 << " tris " << f.tri_i << ' ' << f.tri_j << " n " << f.nx << ' '
           << f.nt << '\n';
    return os.str();
}

FacetValues facet_calculus(double vi, double vj, double nix, double nit) {
    FacetValues out;
    out.jump_x = vi * nix + vj * (-nix);
    out.jump_t = vi * nit + vj * (-nit);
    out.average = 0.5 * (vi + vj);
    if (nit >= 0.0) {
        out.upwind = vi;
        out.downwind = vj;
    } else {
        out.upwind = vj;
        out.downwind = vi;
    }
    return out;
}

namespace {

double signed_area(const Vertex2& a, const Vertex2& b, const Vertex2& c) {
    // Positive for counterclockwise orientation in the (x, t) plane.
    return 0.5 * ((b.x - a.x) * (c.t - a.t) - (c.x - a.x) * (b.t - a.t));
}

double dist(const Vertex2& a, const Vertex2& b) {
    return std::hypot(a.t - b.t, a.x - b.x);
}

} // namespace

SpaceTimeMesh build_mesh(const Scenario& s, int nt, int nx) {
    if (nt < 1 || nx < 1) throw std::invalid_argument("build_mesh: nt and nx must be >= 1");
    SpaceTimeMesh m;
    m.nt = nt;
    m.nx = nx;
    m.horizon = s.horizon;

    const double ht = s.horizon / nt;
    m.vertices.reserve(static_cast<std::size_t>(nt + 1) * (nx + 1));
    for (int k = 0; k <= nt; ++k) {
        const double t = k * ht;
        const double A = s.motion.A(t);
        const double L = s.motion.L(t);
        if (!(L > 0.0)) throw std::runtime_error("build_mesh: nonpositive habitat length");
        for (int j = 0; j <= nx; ++j) m.vertices.push_back({t, A + L * j / nx});
    }

    // Quads split along the (k, j) -> (k+1, j+1) diagonal; both halves are
    // positively oriented for any positive slab lengths.
    for (int k = 0; k < nt; ++k)
        for (int j = 0; j < nx; ++j) {
            const int a = m.vertex_index(k, j);
            const int b = m.vertex_index(k, j + 1);
            const int c = m.vertex_index(k + 1, j);
            const int dd = m.vertex_index(k + 1, j + 1);
            m.triangles.push_back({{a, b, dd}, {}, 0.0, 0.0});
            m.triangles.push_back({{a, dd, c}, {}, 0.0, 0.0});
        }

    double hmin = std::numeric_limits<double>::infinity();
    for (auto& tr : m.triangles) {
        const auto& A = m.vertices[tr.v[0]];
        const auto& B = m.vertices[tr.v[1]];
        const auto& C = m.vertices[tr.v[2]];
        tr.area = signed_area(A, B, C);
        if (!(tr.area > 0.0)) throw std::runtime_error("build_mesh: degenerate triangle");
        tr.diameter = std::max({dist(A, B), dist(B, C), dist(C, A)});
        m.h = std::max(m.h, tr.diameter);
        hmin = std::min(hmin, tr.diameter);
    }
    m.quasi_uniformity = m.h / hmin;

    // Edge identification; adjacency drives boundary/interior classification.
    std::map<std::pair<int, int>, int> index;
    std::vector<std::array<int, 2>> adjacent; // up to two triangles per edge
    for (std::size_t ti = 0; ti < m.triangles.size(); ++ti) {
        auto& tr = m.triangles[ti];
        for (int e = 0; e < 3; ++e) {
            int u = tr.v[e], v = tr.v[(e + 1) % 3];
            std::pair<int, int> key = u < v ? std::make_pair(u, v) : std::make_pair(v, u);
            auto it = index.find(key);
            if (it == index.end()) {
                it = index.emplace(key, static_cast<int>(m.edges.size())).first;
                m.edges.push_back(key);
                adjacent.push_back({static_cast<int>(ti), -1});
            } else {
                adjacent[it->second][1] = static_cast<int>(ti);
            }
            tr.edge[e] = it->second;
        }
    }

    for (std::size_t e = 0; e < m.edges.size(); ++e) {
        const auto [u, v] = m.edges[e];
        const Vertex2& P = m.vertices[u];
        const Vertex2& Q = m.vertices[v];
        if (adjacent[e][1] < 0) {
            BoundaryEdge b;
            b.v0 = u;
            b.v1 = v;
            b.edge = static_cast<int>(e);
            b.tri = adjacent[e][0];
            if (P.t == 0.0 && Q.t == 0.0) b.tag = BoundaryTag::Bottom;
            else if (P.t == m.horizon && Q.t == m.horizon) b.tag = BoundaryTag::Top;
            else b.tag = BoundaryTag::Lateral;
            m.boundary.push_back(b);
        } else {
            InteriorFacet f;
            f.v0 = u;
            f.v1 = v;
            f.edge = static_cast<int>(e);
            f.tri_i = adjacent[e][0];
            f.tri_j = adjacent[e][1];
            f.length = dist(P, Q);
            // Unit normal perpendicular to (Q - P), oriented away from the
            // opposite vertex of tri_i.
            double nx = (Q.t - P.t) / f.length;
            double ntm = -(Q.x - P.x) / f.length;
            const auto& tri = m.triangles[f.tri_i];
            int opp = tri.v[0] + tri.v[1] + tri.v[2] - u - v;
            const Vertex2& O = m.vertices[opp];
            if (nx * (O.x - P.x) + ntm * (O.t - P.t) > 0.0) {
                nx = -nx;
                ntm = -ntm;
            }
            f.nx = nx;
            f.nt = ntm;
            m.facets.push_back(f);
        }
    }
    return m;
}

} // namespace habitat
