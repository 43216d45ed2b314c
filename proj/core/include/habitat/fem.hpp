#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "habitat/mesh.hpp"
#include "habitat/scenario.hpp"

namespace habitat {

/// Quadratic Lagrange space over a space-time mesh: one dof per vertex plus
/// one per edge midpoint. Dofs on the lateral and bottom boundaries are
/// constrained (Dirichlet data enters through the discrete lifting).
struct P2Space {
    const SpaceTimeMesh* mesh = nullptr;
    int n_vertex = 0;
    int n_edge = 0;
    int n_dof = 0;
    std::vector<char> constrained;  // lateral + bottom dofs
    std::vector<Vertex2> dof_point; // vertex / edge-midpoint locations

    static P2Space build(const SpaceTimeMesh& mesh);
    int vertex_dof(int v) const { return v; }
    int edge_dof(int e) const { return n_vertex + e; }
};

struct FemOptions {
    double theta = 1e-5;   // upwind stabilization
    double delta = 1e-6;   // time-derivative jump penalty
    double c_shift = -1.0; // exponential shift; <0 means use the scenario's
    bool local_h = false;  // per-element h_K in stabilization terms
};

/// Raw (unconstrained) stabilized bilinear form plus the lifting vector.
struct AssembledSystem {
    Eigen::SparseMatrix<double> A; // full n_dof x n_dof
    Eigen::VectorXd lifting;       // g_h: interpolated datum on bottom dofs
    std::vector<int> free_dofs;
    double theta = 0.0, delta = 0.0, c_shift = 0.0, h = 0.0, rho = 0.0;
};

AssembledSystem assemble(const SpaceTimeMesh& mesh, const P2Space& space, const Scenario& s,
                         const FemOptions& opts = {});

/// Discrete solution; evaluation undoes the exponential shift, so eval()
/// returns the physical population density u(t, x).
class SolutionField {
public:
    double eval(double t, double x) const;         // u, clipped to the domain
    double eval_shifted(double t, double x) const; // U = u e^{-ct}
    /// Uniform-in-x profile on the (interpolated) domain at time t.
    std::vector<std::pair<double, double>> slice(double t, int n) const;
    double slice_l2(double t, int n = 512) const;
    double slice_linf(double t, int n = 512) const;

    const SpaceTimeMesh& mesh() const { return mesh_; }
    const Eigen::VectorXd& dof_values() const { return U_; } // shifted unknown
    double c_shift() const { return c_shift_; }
    double h() const { return h_; }

    std::string vtk_dump() const;
    std::string slice_csv(const std::vector<double>& times, int n) const;

private:
    friend SolutionField solve(const SpaceTimeMesh&, const Scenario&, const FemOptions&);
    const Triangle& locate(double t, double x, double* bary) const;

    SpaceTimeMesh mesh_;
    Eigen::VectorXd U_;
    double c_shift_ = 0.0;
    double theta_ = 0.0, delta_ = 0.0, h_ = 0.0;
};

/// Assemble, constrain, and solve with a sparse direct factorization.
SolutionField solve(const SpaceTimeMesh& mesh, const Scenario& s, const FemOptions& opts = {});

/// Mesh-dependent norm of a dof vector:
/// ( ||dx v||^2_Q + theta h ||dt v||^2_Q + ||v||^2_{ST} + theta h ||dx v||^2_{ST}
///   + theta h sum ||[dx v]_t||^2_F + delta sum ||[dt v]_x||^2_F )^(1/2).
double mesh_norm(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                 double theta, double delta);

/// L2 norms of (v_h - reference) over Q and over the top boundary.
double l2_error_q(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                  const std::function<double(double, double)>& ref);
double l2_sigma_t(const SpaceTimeMesh& mesh, const P2Space& space, const Eigen::VectorXd& v,
                  const std::function<double(double, double)>& ref);

/// Smallest observed a_h(v,v)/||v||_h^2 over n random free-dof vectors.
double ellipticity_witness(const AssembledSystem& sys, const SpaceTimeMesh& mesh,
                           const P2Space& space, int n = 20, unsigned seed = 1234);

} // namespace habitat
