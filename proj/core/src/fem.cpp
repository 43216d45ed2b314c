#include "habitat/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace habitat {

namespace {

// Degree-4 six-point triangle rule (barycentric, weights sum to 1).
struct TriQP {
    double l0, l1, l2, w;
};
constexpr double kA1 = 0.108103018168070, kB1 = 0.445948490915965, kW1 = 0.223381589678011;
constexpr double kA2 = 0.816847572980459, kB2 = 0.091576213509771, kW2 = 0.109951743655322;
constexpr TriQP kTriRule[6] = {
    {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
    {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2},
};

// Three-point Gauss rule on [0, 1].
constexpr double kEdgeS[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kEdgeW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Quadratic Lagrange basis on one physical triangle; gradients are taken
// with respect to (t, x).
struct ElementBasis {
    Vertex2 P[3];
    double grad_l[3][2]; // gradients of the barycentric coordinates
    double det = 0.0;

    explicit ElementBasis(const SpaceTimeMesh& m, const Triangle& tr) {
        for (int i = 0; i < 3; ++i) P[i] = m.vertices[tr.v[i]];
        const double t1 = P[1].t - P[0].t, t2 = P[2].t - P[0].t;
        const double x1 = P[1].x - P[0].x, x2 = P[2].x - P[0].x;
        det = t1 * x2 - t2 * x1;
        grad_l[1][0] = x2 / det;
        grad_l[1][1] = -t2 / det;
        grad_l[2][0] = -x1 / det;
        grad_l[2][1] = t1 / det;
        grad_l[0][0] = -grad_l[1][0] - grad_l[2][0];
        grad_l[0][1] = -grad_l[1][1] - grad_l[2][1];
    }

    void bary(double t, double x, double l[3]) const {
        const double dt = t - P[0].t, dx = x - P[0].x;
        const double t2 = P[2].t - P[0].t, x2 = P[2].x - P[0].x;
        const double t1 = P[1].t - P[0].t, x1 = P[1].x - P[0].x;
        l[1] = (dt * x2 - t2 * dx) / det;
        l[2] = (t1 * dx - dt * x1) / det;
        l[0] = 1.0 - l[1] - l[2];
    }

    // Local dof order: vertices 0..2, then midpoints of (0,1), (1,2), (2,0).
    static void shapes(const double l[3], double N[6]) {
        for (int i = 0; i < 3; ++i) N[i] = l[i] * (2.0 * l[i] - 1.0);
        N[3] = 4.0 * l[0] * l[1];
        N[4] = 4.0 * l[1] * l[2];
        N[5] = 4.0 * l[2] * l[0];
    }

    void grads(const double l[3], double G[6][2]) const {
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 2; ++c) G[i][c] = (4.0 * l[i] - 1.0) * grad_l[i][c];
        for (int c = 0; c < 2; ++c) {
            G[3][c] = 4.0 * (l[1] * grad_l[0][c] + l[0] * grad_l[1][c]);
            G[4][c] = 4.0 * (l[2] * grad_l[1][c] + l[1] * grad_l[2][c]);
            G[5][c] = 4.0 * (l[0] * grad_l[2][c] + l[2] * grad_l[0][c]);
        }
    }

    // Constant mixed second derivative d2/dtdx of each shape function.
    void hess_tx(double H[6]) const {
        for (int i = 0; i < 3; ++i) H[i] = 4.0 * grad_l[i][0] * grad_l[i][1];
        H[3] = 4.0 * (grad_l[0][0] * grad_l[1][1] + grad_l[1][0] * grad_l[0][1]);
        H[4] = 4.0 * (grad_l[1][0] * grad_l[2][1] + grad_l[2][0] * grad_l[1][1]);
        H[5] = 4.0 * (grad_l[2][0] * grad_l[0][1] + grad_l[0][0] * grad_l[2][1]);
    }
};

void element_dofs(const P2Space& space, const SpaceTimeMesh& m, int tri, int dofs[6]) {
    const Triangle& tr = m.triangles[tri];
    for (int i = 0; i < 3; ++i) dofs[i] = space.vertex_dof(tr.v[i]);
    for (int e = 0; e < 3; ++e) dofs[3 + e] = space.edge_dof(tr.edge[e]);
}

// Shifted reaction R - c acting on U = u e^{-ct}.
double shifted_reaction(const Scenario& s, double c, double t, double x) {
    return s.growth(t, x) - c;
}

} // namespace

P2Space P2Space::build(const SpaceTimeMesh& mesh) {
    P2Space sp;
    sp.mesh = &mesh;
    sp.n_vertex = static_cast<int>(mesh.vertices.size());
    sp.n_edge = static_cast<int>(mesh.edges.size());
    sp.n_dof = sp.n_vertex + sp.n_edge;
    sp.constrained.assign(sp.n_dof, 0);
    sp.dof_point.resize(sp.n_dof);
    for (int v = 0; v < sp.n_vertex; ++v) sp.dof_point[v] = mesh.vertices[v];
    for (int e = 0; e < sp.n_edge; ++e) {
        const auto [u, v] = mesh.edges[e];
        sp.dof_point[sp.n_vertex + e] = {0.5 * (mesh.vertices[u].t + mesh.vertices[v].t),
                                         0.5 * (mesh.vertices[u].x + mesh.vertices[v].x)};
    }
    for (const auto& b : mesh.boundary) {
        if (b.tag == BoundaryTag::Top) continue;
        sp.constrained[sp.vertex_dof(b.v0)] = 1;
        sp.constrained[sp.vertex_dof(b.v1)] = 1;
        sp.constrained[sp.edge_dof(b.edge)] = 1;
    }
    return sp;
}

AssembledSystem assemble(const SpaceTimeMesh& mesh, const P2Space& space, const Scenario& s,
                         const FemOptions& opts) {
    if (opts.theta <= 0.0) throw std::invalid_argument("assemble: theta must be positive");
    if (opts.delta <= 0.0) throw std::invalid_argument("assemble: delta must be positive");
    AssembledSystem sys;
    sys.theta = opts.theta;
    sys.delta = opts.delta;
    sys.c_shift = opts.c_shift > 0.0 ? opts.c_shift : s.resolved_c_shift();
    sys.h = mesh.h;
    sys.rho = sys.c_shift - s.r;
    if (sys.rho <= 0.0)
        throw std::invalid_argument("assemble: shift constant must exceed the growth rate");

    const double d = s.d;
    const double theta = sys.theta, delta = sys.delta, c = sys.c_shift;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(mesh.triangles.size() * 36 + mesh.facets.size() * 144);

    // Volume terms.
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const Triangle& tr = mesh.triangles[ti];
        const ElementBasis eb(mesh, tr);
        int dofs[6];
        element_dofs(space, mesh, static_cast<int>(ti), dofs);
        const double hK = opts.local_h ? tr.diameter : mesh.h;
        double H[6];
        eb.hess_tx(H);
        double local[6][6] = {};
        for (const TriQP& qp : kTriRule) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            double N[6], G[6][2];
            ElementBasis::shapes(l, N);
            eb.grads(l, G);
            const double t = l[0] * eb.P[0].t + l[1] * eb.P[1].t + l[2] * eb.P[2].t;
            const double x = l[0] * eb.P[0].x + l[1] * eb.P[1].x + l[2] * eb.P[2].x;
            const double R = shifted_reaction(s, c, t, x);
            const double w = qp.w * tr.area;
            for (int i = 0; i < 6; ++i) {      // test
                const double test0 = N[i] + theta * hK * G[i][0];
                for (int j = 0; j < 6; ++j) {  // trial
                    double val = G[j][0] * test0;            // dt w (v + th h dt v)
                    val += d * G[j][1] * G[i][1];            // d dx w dx v
                    val -= R * N[j] * test0;                 // -R~ w (v + th h dt v)
                    val -= d * theta * hK * H[j] * G[i][1];  // -d th h dtx w dx v
                    local[i][j] += w * val;
                }
            }
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) trip.emplace_back(dofs[i], dofs[j], local[i][j]);
    }

    // Interior facet terms.
    for (const InteriorFacet& f : mesh.facets) {
        const ElementBasis ei(mesh, mesh.triangles[f.tri_i]);
        const ElementBasis ej(mesh, mesh.triangles[f.tri_j]);
        int di[6], dj[6];
        element_dofs(space, mesh, f.tri_i, di);
        element_dofs(space, mesh, f.tri_j, dj);
        const Vertex2& P = mesh.vertices[f.v0];
        const Vertex2& Q = mesh.vertices[f.v1];
        const bool up_is_i = f.nt >= 0.0;
        const double hF = mesh.h; // quasi-uniform: global h in facet terms

        // 12 coupled dofs: 0..5 from tri_i, 6..11 from tri_j.
        double local[12][12] = {};
        for (int q = 0; q < 3; ++q) {
            const double t = P.t + kEdgeS[q] * (Q.t - P.t);
            const double x = P.x + kEdgeS[q] * (Q.x - P.x);
            double li[3], lj[3], Gi[6][2], Gj[6][2];
            ei.bary(t, x, li);
            ej.bary(t, x, lj);
            ei.grads(li, Gi);
            ej.grads(lj, Gj);

            // Per extended dof m: traces of (dt, dx) from its own side and
            // the side sign (+1 for tri_i, -1 for tri_j) entering jumps.
            double dt_m[12], dx_m[12], sign_m[12];
            bool on_up[12];
            for (int m = 0; m < 6; ++m) {
                dt_m[m] = Gi[m][0];
                dx_m[m] = Gi[m][1];
                sign_m[m] = 1.0;
                on_up[m] = up_is_i;
                dt_m[6 + m] = Gj[m][0];
                dx_m[6 + m] = Gj[m][1];
                sign_m[6 + m] = -1.0;
                on_up[6 + m] = !up_is_i;
            }
            const double w = kEdgeW[q] * f.length;
            for (int i = 0; i < 12; ++i) {      // test
                const double jxv_t = dx_m[i] * sign_m[i] * f.nt; // [dx v]_t
                const double jtv_x = dt_m[i] * sign_m[i] * f.nx; // [dt v]_x
                const double avg_dxv = 0.5 * dx_m[i];
                for (int j = 0; j < 12; ++j) {  // trial
                    const double up_dxw = on_up[j] ? dx_m[j] : 0.0;
                    const double avg_dxw = 0.5 * dx_m[j];
                    const double jtw_x = dt_m[j] * sign_m[j] * f.nx;
                    double val = d * theta * hF * (up_dxw * jxv_t - avg_dxw * jtv_x);
                    val += d * theta * hF * avg_dxv * jtw_x;
                    val += delta * jtw_x * jtv_x;
                    local[i][j] += w * val;
                }
            }
        }
        int ext[12];
        for (int m = 0; m < 6; ++m) {
            ext[m] = di[m];
            ext[6 + m] = dj[m];
        }
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                if (local[i][j] != 0.0) trip.emplace_back(ext[i], ext[j], local[i][j]);
    }

    // Top boundary term d theta h int dx w dx v.
    for (const BoundaryEdge& b : mesh.boundary) {
        if (b.tag != BoundaryTag::Top) continue;
        const ElementBasis eb(mesh, mesh.triangles[b.tri]);
        int dofs[6];
        element_dofs(space, mesh, b.tri, dofs);
        const Vertex2& P = mesh.vertices[b.v0];
        const Vertex2& Q = mesh.vertices[b.v1];
        const double len = std::hypot(Q.t - P.t, Q.x - P.x);
        for (int q = 0; q < 3; ++q) {
            const double t = P.t + kEdgeS[q] * (Q.t - P.t);
            const double x = P.x + kEdgeS[q] * (Q.x - P.x);
            double l[3], G[6][2];
            eb.bary(t, x, l);
            eb.grads(l, G);
            const double w = kEdgeW[q] * len * d * theta * mesh.h;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j)
                    trip.emplace_back(dofs[i], dofs[j], w * G[j][1] * G[i][1]);
        }
    }

    sys.A.resize(space.n_dof, space.n_dof);
    sys.A.setFromTriplets(trip.begin(), trip.end());

    // Discrete lifting: nodal interpolant of the datum on bottom dofs.
    sys.lifting = Eigen::VectorXd::Zero(space.n_dof);
    const double A0 = s.motion.A(0.0);
    const double Lphys = s.motion.L(0.0);
    for (const BoundaryEdge& b : mesh.boundary) {
        if (b.tag != BoundaryTag::Bottom) continue;
        for (int dof : {space.vertex_dof(b.v0), space.vertex_dof(b.v1), space.edge_dof(b.edge)})
            sys.lifting[dof] = s.initial(space.dof_point[dof].x - A0, Lphys);
    }

    sys.free_dofs.reserve(space.n_dof);
    for (int i = 0; i < space.n_dof; ++i)
        if (!space.constrained[i]) sys.free_dofs.push_back(i);
    return sys;
}

SolutionField solve(const SpaceTimeMesh& mesh, const Scenario& s, const FemOptions& opts) {
    const P2Space space = P2Space::build(mesh);
    const AssembledSystem sys = assemble(mesh, space, s, opts);

    const int nf = static_cast<int>(sys.free_dofs.size());
    std::vector<int> to_free(space.n_dof, -1);
    for (int i = 0; i < nf; ++i) to_free[sys.free_dofs[i]] = i;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sys.A.nonZeros());
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
            const int fi = to_free[it.row()], fj = to_free[it.col()];
            if (fi >= 0 && fj >= 0) trip.emplace_back(fi, fj, it.value());
        }
    Eigen::SparseMatrix<double> Aff(nf, nf);
    Aff.setFromTriplets(trip.begin(), trip.end());
    Aff.makeCompressed();

    const Eigen::VectorXd Ag = sys.A * sys.lifting;
    Eigen::VectorXd rhs(nf);
    for (int i = 0; i < nf; ++i) rhs[i] = -Ag[sys.free_dofs[i]];

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(Aff);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve: factorization failed");
    const Eigen::VectorXd wf = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw std::runtime_error("solve: back substitution failed");

    SolutionField field;
    field.mesh_ = mesh;
    field.U_ = sys.lifting;
    for (int i = 0; i < nf; ++i) field.U_[sys.free_dofs[i]] += wf[i];
    field.c_shift_ = sys.c_shift;
    field.theta_ = sys.theta;
    field.delta_ = sys.delta;
    field.h_ = mesh.h;
    return field;
}

const Triangle& SolutionField::locate(double t, double x, double* bary) const {
    const int nt = mesh_.nt, nx = mesh_.nx;
    const double ht = mesh_.horizon / nt;
    int k = std::clamp(static_cast<int>(t / ht), 0, nt - 1);
    const double sig = std::clamp((t - k * ht) / ht, 0.0, 1.0);
    auto node_x = [&](int j) {
        return (1.0 - sig) * mesh_.vertices[mesh_.vertex_index(k, j)].x +
               sig * mesh_.vertices[mesh_.vertex_index(k + 1, j)].x;
    };
    int lo = 0, hi = nx;
    if (x <= node_x(0)) hi = 1;
    else if (x >= node_x(nx)) lo = nx - 1;
    else
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            (x < node_x(mid) ? hi : lo) = mid;
        }
    const int cell = 2 * (k * nx + lo);
    // Pick whichever half of the quad contains the point (least violation).
    const Triangle* best = nullptr;
    double best_min = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < 2; ++c) {
        const Triangle& tr = mesh_.triangles[cell + c];
        double l[3];
        ElementBasis(mesh_, tr).bary(t, x, l);
        const double mn = std::min({l[0], l[1], l[2]});
        if (mn > best_min) {
            best_min = mn;
            best = &tr;
            bary[0] = l[0];
            bary[1] = l[1];
            bary[2] = l[2];
        }
    }
    return *best;
}

double SolutionField::eval_shifted(double t, double x) const {
    t = std::clamp(t, 0.0, mesh_.horizon);
    double l[3];
    const Triangle& tr = locate(t, x, l);
    for (double& c : l) c = std::clamp(c, 0.0, 1.0);
    double N[6];
    ElementBasis::shapes(l, N);
    double val = 0.0;
    const int nv = static_cast<int>(mesh_.vertices.size());
    for (int i = 0; i < 3; ++i) val += N[i] * U_[tr.v[i]];
    for (int e = 0; e < 3; ++e) val += N[3 + e] * U_[nv + tr.edge[e]];
    return val;
}

double SolutionField::eval(double t, double x) const {
    return eval_shifted(t, x) * std::exp(c_shift_ * std::clamp(t, 0.0, mesh_.horizon));
}

std::vector<std::pair<double, double>> SolutionField::slice(double t, int n) const {
    t = std::clamp(t, 0.0, mesh_.horizon);
    const int nt = mesh_.nt, nx = mesh_.nx;
    const double ht = mesh_.horizon / nt;
    const int k = std::clamp(static_cast<int>(t / ht), 0, nt - 1);
    const double sig = std::clamp((t - k * ht) / ht, 0.0, 1.0);
    const double xl = (1.0 - sig) * mesh_.vertices[mesh_.vertex_index(k, 0)].x +
                      sig * mesh_.vertices[mesh_.vertex_index(k + 1, 0)].x;
    const double xr = (1.0 - sig) * mesh_.vertices[mesh_.vertex_index(k, nx)].x +
                      sig * mesh_.vertices[mesh_.vertex_index(k + 1, nx)].x;
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = xl + (xr - xl) * i / (n - 1);
        out.emplace_back(x, eval(t, x));
    }
    return out;
}

double SolutionField::slice_l2(double t, int n) const {
    const auto prof = slice(t, n);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < prof.size(); ++i) {
        const double dx = prof[i + 1].first - prof[i].first;
        s += 0.5 * dx * (prof[i].second * prof[i].second + prof[i + 1].second * prof[i + 1].second);
    }
    return std::sqrt(s);
}

double SolutionField::slice_linf(double t, int n) const {
    double mx = 0.0;
    for (const auto& [x, u] : slice(t, n)) mx = std::max(mx, std::abs(u));
    return mx;
}

std::string SolutionField::vtk_dump() const {
    std::ostringstream os;
    os.precision(12);
    os << "# vtk DataFile Version 3.0\nspace-time solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh_.vertices.size() << " double\n";
    for (const auto& v : mesh_.vertices) os << v.x << ' ' << v.t << " 0\n";
    os << "CELLS " << mesh_.triangles.size() << ' ' << 4 * mesh_.triangles.size() << '\n';
    for (const auto& tr : mesh_.triangles) os << "3 " << tr.v[0] << ' ' << tr.v[1] << ' ' << tr.v[2] << '\n';
    os << "CELL_TYPES " << mesh_.triangles.size() << '\n';
    for (std::size_t i = 0; i < mesh_.triangles.size(); ++i) os << "5\n";
    os << "POINT_DATA " << mesh_.vertices.size() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
    for (std::size_t v = 0; v < mesh_.vertices.size(); ++v)
        os << U_[static_cast<int>(v)] * std::exp(c_shift_ * mesh_.vertices[v].t) << '\n';
    return os.str();
}

std::string SolutionField::slice_csv(const std::vector<double>& times, int n) const {
    std::ostringstream os;
    os.precision(12);
    os << "t,x,u\n";
    for (double t : times)
        for (const auto& [x, u] : slice(t, n)) os << t << ',' << x << ',' << u << '\n';
    return os.str();
}

double mesh_norm(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                 double theta, double delta) {
    double vol_dx = 0.0, vol_dt = 0.0;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const Triangle& tr = mesh.triangles[ti];
        const ElementBasis eb(mesh, tr);
        int dofs[6];
        element_dofs(space, mesh, static_cast<int>(ti), dofs);
        for (const TriQP& qp : kTriRule) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            double G[6][2];
            eb.grads(l, G);
            double dt = 0.0, dx = 0.0;
            for (int m = 0; m < 6; ++m) {
                dt += G[m][0] * v[dofs[m]];
                dx += G[m][1] * v[dofs[m]];
            }
            vol_dx += qp.w * tr.area * dx * dx;
            vol_dt += qp.w * tr.area * dt * dt;
        }
    }
    double top_v = 0.0, top_dx = 0.0;
    for (const BoundaryEdge& b : mesh.boundary) {
        if (b.tag != BoundaryTag::Top) continue;
        const ElementBasis eb(mesh, mesh.triangles[b.tri]);
        int dofs[6];
        element_dofs(space, mesh, b.tri, dofs);
        const Vertex2& P = mesh.vertices[b.v0];
        const Vertex2& Q = mesh.vertices[b.v1];
        const double len = std::hypot(Q.t - P.t, Q.x - P.x);
        for (int q = 0; q < 3; ++q) {
            const double t = P.t + kEdgeS[q] * (Q.t - P.t);
            const double x = P.x + kEdgeS[q] * (Q.x - P.x);
            double l[3], N[6], G[6][2];
            eb.bary(t, x, l);
            ElementBasis::shapes(l, N);
            eb.grads(l, G);
            double val = 0.0, dx = 0.0;
            for (int m = 0; m < 6; ++m) {
                val += N[m] * v[dofs[m]];
                dx += G[m][1] * v[dofs[m]];
            }
            top_v += kEdgeW[q] * len * val * val;
            top_dx += kEdgeW[q] * len * dx * dx;
        }
    }
    double jump_dx_t = 0.0, jump_dt_x = 0.0;
    for (const InteriorFacet& f : mesh.facets) {
        const ElementBasis ei(mesh, mesh.triangles[f.tri_i]);
        const ElementBasis ej(mesh, mesh.triangles[f.tri_j]);
        int di[6], dj[6];
        element_dofs(space, mesh, f.tri_i, di);
        element_dofs(space, mesh, f.tri_j, dj);
        const Vertex2& P = mesh.vertices[f.v0];
        const Vertex2& Q = mesh.vertices[f.v1];
        for (int q = 0; q < 3; ++q) {
            const double t = P.t + kEdgeS[q] * (Q.t - P.t);
            const double x = P.x + kEdgeS[q] * (Q.x - P.x);
            double li[3], lj[3], Gi[6][2], Gj[6][2];
            ei.bary(t, x, li);
            ej.bary(t, x, lj);
            ei.grads(li, Gi);
            ej.grads(lj, Gj);
            double dxi = 0.0, dxj = 0.0, dti = 0.0, dtj = 0.0;
            for (int m = 0; m < 6; ++m) {
                dxi += Gi[m][1] * v[di[m]];
                dti += Gi[m][0] * v[di[m]];
                dxj += Gj[m][1] * v[dj[m]];
                dtj += Gj[m][0] * v[dj[m]];
            }
            const double jx_t = (dxi - dxj) * f.nt;
            const double jt_x = (dti - dtj) * f.nx;
            jump_dx_t += kEdgeW[q] * f.length * jx_t * jx_t;
            jump_dt_x += kEdgeW[q] * f.length * jt_x * jt_x;
        }
    }
    const double h = mesh.h;
    return std::sqrt(vol_dx + theta * h * vol_dt + top_v + theta * h * top_dx +
                     theta * h * jump_dx_t + delta * jump_dt_x);
}

double l2_error_q(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                  const std::function<double(double, double)>& ref) {
    double acc = 0.0;
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const Triangle& tr = mesh.triangles[ti];
        const ElementBasis eb(mesh, tr);
        int dofs[6];
        element_dofs(space, mesh, static_cast<int>(ti), dofs);
        for (const TriQP& qp : kTriRule) {
            const double l[3] = {qp.l0, qp.l1, qp.l2};
            double N[6];
            ElementBasis::shapes(l, N);
            const double t = l[0] * eb.P[0].t + l[1] * eb.P[1].t + l[2] * eb.P[2].t;
            const double x = l[0] * eb.P[0].x + l[1] * eb.P[1].x + l[2] * eb.P[2].x;
            double val = 0.0;
            for (int m = 0; m < 6; ++m) val += N[m] * v[dofs[m]];
            const double diff = val - (ref ? ref(t, x) : 0.0);
            acc += qp.w * tr.area * diff * diff;
        }
    }
    return std::sqrt(acc);
}

double l2_sigma_t(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                  const std::function<double(double, double)>& ref) {
    double acc = 0.0;
    for (const BoundaryEdge& b : mesh.boundary) {
        if (b.tag != BoundaryTag::Top) continue;
        const ElementBasis eb(mesh, mesh.triangles[b.tri]);
        int dofs[6];
        element_dofs(space, mesh, b.tri, dofs);
        const Vertex2& P = mesh.vertices[b.v0];
        const Vertex2& Q = mesh.vertices[b.v1];
        const double len = std::hypot(Q.t - P.t, Q.x - P.x);
        for (int q = 0; q < 3; ++q) {
            const double t = P.t + kEdgeS[q] * (Q.t - P.t);
            const double x = P.x + kEdgeS[q] * (Q.x - P.x);
            double l[3], N[6];
            eb.bary(t, x, l);
            ElementBasis::shapes(l, N);
            double val = 0.0;
            for (int m = 0; m < 6; ++m) val += N[m] * v[dofs[m]];
            const double diff = val - (ref ? ref(t, x) : 0.0);
            acc += kEdgeW[q] * len * diff * diff;
        }
    }
    return std::sqrt(acc);
}

double ellipticity_witness(const AssembledSystem& sys, const SpaceTimeMesh& mesh,
                           const P2Space& space, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double kappa = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < n; ++trial) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(space.n_dof);
        for (int dof : sys.free_dofs) v[dof] = gauss(rng);
        const double num = v.dot(sys.A * v);
        const double nh = mesh_norm(mesh, space, v, sys.theta, sys.delta);
        if (nh > 0.0) kappa = std::min(kappa, num / (nh * nh));
    }
    return kappa;
}

} // namespace habitat
