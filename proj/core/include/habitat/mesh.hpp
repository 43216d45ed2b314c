#pragma once

#include <array>
#include <string>
#include <vector>

#include "habitat/scenario.hpp"

namespace habitat {

enum class BoundaryTag { Lateral, Bottom, Top };
std::string to_string(BoundaryTag tag);

struct Vertex2 {
    double t = 0.0;
    double x = 0.0;
};

struct Triangle {
    std::array<int, 3> v{};      // positively oriented in the (x, t) plane
    std::array<int, 3> edge{};   // edges (v0,v1), (v1,v2), (v2,v0)
    double area = 0.0;
    double diameter = 0.0;
};

struct BoundaryEdge {
    int v0 = 0, v1 = 0;
    int edge = 0;   // global edge index
    int tri = 0;    // the single adjacent triangle
    BoundaryTag tag = BoundaryTag::Lateral;
};

/// Interior edge with the unit normal taken outward from the first
/// adjacent triangle tri_i; up/down classification follows sign(n_t).
struct InteriorFacet {
    int v0 = 0, v1 = 0;
    int edge = 0;
    int tri_i = 0, tri_j = 0;
    double nx = 0.0, nt = 0.0;
    double length = 0.0;
};

/// Conforming triangulation of the space-time domain
/// {(t, x): 0 < t < horizon, A(t) < x < A(t) + L(t)} with the lateral
/// boundary replaced by its piecewise-linear interpolant at slab levels.
struct SpaceTimeMesh {
    int nt = 0, nx = 0;
    double horizon = 0.0;
    std::vector<Vertex2> vertices;
    std::vector<Triangle> triangles;
    std::vector<std::pair<int, int>> edges; // sorted vertex pairs
    std::vector<BoundaryEdge> boundary;
    std::vector<InteriorFacet> facets;
    double h = 0.0;              // max element diameter
    double quasi_uniformity = 1.0; // h / min diameter

    int vertex_index(int k, int j) const { return k * (nx + 1) + j; }
    double total_area() const;
    /// Plain-text vertex/triangle/facet listing for golden tests.
    std::string dump() const;
};

/// Structured slab mesh: time levels t_k = k h_t, nodes
/// x_{k,j} = A(t_k) + (j/nx) L(t_k), quads split along the (k,j)-(k+1,j+1)
/// diagonal.
SpaceTimeMesh build_mesh(const Scenario& s, int nt, int nx);

/// Jump/average algebra on one interior facet, from the traces on the two
/// sides and the normal of the first triangle.
struct FacetValues {
    double jump_x = 0.0;   // v_i n_{i,x} + v_j n_{j,x}
    double jump_t = 0.0;
    double average = 0.0;
    double upwind = 0.0;   // v_i when n_{i,t} >= 0
    double downwind = 0.0;
};
FacetValues facet_calculus(double vi, double vj, double nix, double nit);

} // namespace habitat
