#pragma once

#include "opers/contour.hpp"
#include "opers/miura.hpp"
#include "opers/oper.hpp"

#include <functional>

namespace opers {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 30;
    double roundoff_floor = 1e-12;  // panels also accept errors below this fraction of the absolute integral
    bool require_closure = true;  // throw instead of flagging the result invalid
    BranchOptions branch;
};

struct IntegralResult {
    Complex value;
    double error = 0;
    Complex multiplier{1, 0};
    int segments = 0;
    int panels = 0;
    bool valid = true;
};

// Integrand f(z) times exp(sum_i e_i log(z - z_i)) along the tracked branch.
struct TwistedIntegrand {
    std::vector<Complex> points;
    std::vector<Complex> exponents;
    std::function<Complex(Complex)> f;
    std::vector<Complex> f_poles;  // must stay clear of the contour
};

IntegralResult integrate_twisted(const TwistedIntegrand& g, const Contour& c, const QuadratureOptions& opts = {});

// exp(sum_i e_i log(z - z_i)) f(z) at the end of the contour minus at the start.
Complex twisted_boundary_term(const TwistedIntegrand& g, const Contour& c, const BranchOptions& opts = {});

// P(z)^s with exponents s k_i at the marked points.
TwistedIntegrand twisted_integrand(const MiuraData& d, const GaussRat& s, const ExactRF& f);

// Slot of exponent value r (copy selects among equal exponents).
int exponent_slot(const AlgebraModel& model, int r, int copy = 0);

// I_r = integral over c of P^{-r/h} v_r.
IntegralResult twisted_integral(const MiuraData& d, const QuasiCanonicalForm& q, int r, const Contour& c,
                                const QuadratureOptions& opts = {}, int copy = 0);

struct GaugeProbe {
    IntegralResult before, after;
    double delta;
};
GaugeProbe gauge_invariance_probe(const MiuraData& d, const QuasiCanonicalForm& q, int r, const Contour& c,
                                  const ExactRF& f, const QuadratureOptions& opts = {}, int copy = 0);

// integral over c of (f' - (j phi / h) f) P^{-j/h}.
IntegralResult stokes_check(const MiuraData& d, int j, const ExactRF& f, const Contour& c,
                            const QuadratureOptions& opts = {});

// Residue at w of P^s v, given the continued values of log(w - z_i).
Complex twisted_residue(const MiuraData& d, const GaussRat& s, const ExactRF& v, const GaussRat& w,
                        const std::vector<Complex>& logs_at_w);

// Values of log(w - z_i) continued from the principal branch at `from` along the straight segment to w.
std::vector<Complex> continue_logs(const std::vector<Complex>& points, Complex from, Complex to);

}  // namespace opers
