#pragma once

#include "opers/oper.hpp"

#include <optional>
#include <vector>

namespace opers {

struct MarkedPoint {
    GaussRat z;
    WeightTriple weight;
};

struct BetheRoot {
    GaussRat w;
    int color;  // 0..rank
};

struct MiuraData {
    ModelPtr model;
    std::vector<MarkedPoint> points;
    std::vector<BetheRoot> roots;

    // Throws on coincident points, bad colors or weights of the wrong size.
    void validate() const;
    // Marked points followed by Bethe roots.
    std::vector<GaussRat> singular_points() const;
};

// sum_i k_i / (z - z_i)
ExactRF twist_function(const MiuraData& d);
// sum_i lambda_i - sum_j alpha_{c(j)}
WeightTriple weight_at_infinity(const MiuraData& d);

Connection build_miura(const MiuraData& d);

struct MasterPartials {
    std::vector<GaussRat> points;  // dPhi/dz_i
    std::vector<GaussRat> roots;   // dPhi/dw_j
};
MasterPartials master_partials(const MiuraData& d);

std::vector<GaussRat> bethe_residuals(const MiuraData& d);

// Root of the single Bethe equation for one root of the given color with two marked points.
// Empty when the couplings cancel.
std::optional<GaussRat> solve_single_root(const MiuraData& d, int color);

struct RootVerdict {
    int root = 0;
    GaussRat residual;
    // Every v_j of the canonical form built after the local gauge exp(-e_c / (z - w)) is pole-free at w.
    bool regular_by_canonical_form = false;
    // h^vee <r(w), alpha_c> = twist(w).
    bool regular_by_criterion = false;
    std::vector<int> pole_orders;  // per exponent slot, at w
    GaussRat v1_residue;
    bool agree() const { return regular_by_canonical_form == regular_by_criterion; }
};
std::vector<RootVerdict> regularity_check(const MiuraData& d);

// Connection regauged by exp(-e_c / (z - w_j)) for root j.
Connection localize_root(const MiuraData& d, int j);

ExactRF v1_predicted(const MiuraData& d);

struct QuadraticEigenvalues {
    std::vector<GaussRat> casimir;      // (lambda_i | lambda_i + 2 rho) / 2
    std::vector<GaussRat> hamiltonian;  // dPhi/dz_i
    bool on_shell = true;
};
QuadraticEigenvalues quadratic_eigenvalue_data(const MiuraData& d);

}  // namespace opers
