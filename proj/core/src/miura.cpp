#include "opers/miura.hpp"

#include "opers/partial_fractions.hpp"

#include <stdexcept>

namespace opers {

namespace {

WeightTriple without_level(WeightTriple w) {
    w.level = GaussRat(0);
    return w;
}

WeightTriple combine(const WeightTriple& a, const WeightTriple& b, const GaussRat& sb) {
    WeightTriple out = a;
    for (std::size_t i = 0; i < out.lambda_dot.size(); ++i) out.lambda_dot[i] += b.lambda_dot[i] * sb;
    out.level += b.level * sb;
    out.delta_shift += b.delta_shift * sb;
    return out;
}

WeightTriple zero_weight(int rank) { return {std::vector<GaussRat>(rank), GaussRat(0), GaussRat(0)}; }

}  // namespace

void MiuraData::validate() const {
    if (!model) throw std::invalid_argument("Miura data without a model");
    for (const auto& p : points)
        if (static_cast<int>(p.weight.lambda_dot.size()) != model->rank())
            throw std::invalid_argument("weight has the wrong number of components");
    for (const auto& r : roots)
        if (r.color < 0 || r.color > model->rank()) throw std::invalid_argument("Bethe root color out of range");
    auto all = singular_points();
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            if (all[i] == all[j]) throw std::invalid_argument("coincident marked points or Bethe roots");
}

std::vector<GaussRat> MiuraData::singular_points() const {
    std::vector<GaussRat> out;
    for (const auto& p : points) out.push_back(p.z);
    for (const auto& r : roots) out.push_back(r.w);
    return out;
}

ExactRF twist_function(const MiuraData& d) {
    ExactRF phi;
    for (const auto& p : d.points)
        if (!p.weight.level.is_zero()) phi += ExactRF::pole_term(p.weight.level, p.z, 1);
    return phi;
}

WeightTriple weight_at_infinity(const MiuraData& d) {
    WeightTriple total = zero_weight(d.model->rank());
    for (const auto& p : d.points) total = combine(total, p.weight, GaussRat(1));
    for (const auto& r : d.roots) total = combine(total, d.model->simple_root_weight(r.color), GaussRat(-1));
    return total;
}

Connection build_miura(const MiuraData& d) {
    d.validate();
    const ModelPtr& m = d.model;
    RFVector body(m);
    auto add_pole = [&](const WeightTriple& w, const GaussRat& coeff, const GaussRat& at) {
        RFVector e = to_rf(m->weight_element(without_level(w)));
        body += e.transform([&](const ExactRF& c) -> ExactRF {
            return c.is_zero() ? ExactRF() : c * ExactRF::pole_term(coeff, at, 1);
        });
    };
    for (const auto& p : d.points) add_pole(p.weight, GaussRat(-1), p.z);
    for (const auto& r : d.roots) add_pole(m->simple_root_weight(r.color), GaussRat(1), r.w);
    return Connection(m, twist_function(d), std::move(body));
}

MasterPartials master_partials(const MiuraData& d) {
    d.validate();
    const AlgebraModel& m = *d.model;
    MasterPartials out;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        GaussRat acc(0);
        for (std::size_t j = 0; j < d.points.size(); ++j)
            if (j != i)
                acc += weight_form(m, d.points[i].weight, d.points[j].weight) / (d.points[i].z - d.points[j].z);
        for (const auto& r : d.roots)
            acc -= weight_form(m, d.points[i].weight, m.simple_root_weight(r.color)) / (d.points[i].z - r.w);
        out.points.push_back(acc);
    }
    out.roots = bethe_residuals(d);
    return out;
}

std::vector<GaussRat> bethe_residuals(const MiuraData& d) {
    d.validate();
    const AlgebraModel& m = *d.model;
    std::vector<GaussRat> out;
    for (std::size_t j = 0; j < d.roots.size(); ++j) {
        const auto alpha = m.simple_root_weight(d.roots[j].color);
        GaussRat acc(0);
        for (const auto& p : d.points) acc -= weight_form(m, p.weight, alpha) / (d.roots[j].w - p.z);
        for (std::size_t i = 0; i < d.roots.size(); ++i)
            if (i != j)
                acc += weight_form(m, m.simple_root_weight(d.roots[i].color), alpha) / (d.roots[j].w - d.roots[i].w);
        out.push_back(acc);
    }
    return out;
}

std::optional<GaussRat> solve_single_root(const MiuraData& d, int color) {
    if (d.points.size() != 2) throw std::invalid_argument("closed-form root needs exactly two marked points");
    const auto alpha = d.model->simple_root_weight(color);
    GaussRat a = weight_form(*d.model, d.points[0].weight, alpha);
    GaussRat b = weight_form(*d.model, d.points[1].weight, alpha);
    if ((a + b).is_zero()) return std::nullopt;
    // a / (w - z_1) + b / (w - z_2) = 0
    return (a * d.points[1].z + b * d.points[0].z) / (a + b);
}

Connection localize_root(const MiuraData& d, int j) {
    const BetheRoot& r = d.roots.at(j);
    RFVector m = to_rf(d.model->e(r.color)).transform([&](const ExactRF& c) -> ExactRF {
        return c.is_zero() ? ExactRF() : c * ExactRF::pole_term(GaussRat(-1), r.w, 1);
    });
    return gauge_transform(build_miura(d), GaugeParameter(std::move(m)));
}

std::vector<RootVerdict> regularity_check(const MiuraData& d) {
    d.validate();
    const AlgebraModel& m = *d.model;
    const auto residuals = bethe_residuals(d);
    const ExactRF phi = twist_function(d);
    const GaussRat hv(m.dual_coxeter_number());
    std::vector<RootVerdict> out;
    for (std::size_t j = 0; j < d.roots.size(); ++j) {
        const BetheRoot& root = d.roots[j];
        RootVerdict v;
        v.root = static_cast<int>(j);
        v.residual = residuals[j];

        QuasiCanonicalForm q = quasi_canonicalize(localize_root(d, static_cast<int>(j)));
        v.regular_by_canonical_form = true;
        for (const auto& f : q.v) {
            int order = f.pole_order(root.w);
            v.pole_orders.push_back(order);
            if (order > 0) v.regular_by_canonical_form = false;
        }
        v.v1_residue = residue_at(q.v1(), root.w);

        // r(w) = u_0(w) - alpha_c / (z - w) at z = w, paired with alpha_c
        const auto alpha = m.simple_root_weight(root.color);
        GaussRat pairing(0);
        for (const auto& p : d.points) pairing -= weight_form(m, without_level(p.weight), alpha) / (root.w - p.z);
        for (std::size_t i = 0; i < d.roots.size(); ++i)
            if (i != j) pairing += weight_form(m, m.simple_root_weight(d.roots[i].color), alpha) / (root.w - d.roots[i].w);
        v.regular_by_criterion = hv * pairing == phi(root.w);
        out.push_back(std::move(v));
    }
    return out;
}

ExactRF v1_predicted(const MiuraData& d) {
    const AlgebraModel& m = *d.model;
    const MasterPartials partials = master_partials(d);
    const WeightTriple two_rho = combine(zero_weight(m.rank()), m.rho_weight(), GaussRat(2));
    ExactRF total;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const auto& lambda = d.points[i].weight;
        GaussRat casimir = weight_form(m, lambda, combine(lambda, two_rho, GaussRat(1))) * GaussRat::ratio(1, 2);
        if (!casimir.is_zero()) total += ExactRF::pole_term(casimir, d.points[i].z, 2);
        if (!partials.points[i].is_zero()) total += ExactRF::pole_term(partials.points[i], d.points[i].z, 1);
    }
    for (std::size_t j = 0; j < d.roots.size(); ++j)
        if (!partials.roots[j].is_zero()) total += ExactRF::pole_term(partials.roots[j], d.roots[j].w, 1);
    return total * (GaussRat(1) / GaussRat(m.dual_coxeter_number()));
}

QuadraticEigenvalues quadratic_eigenvalue_data(const MiuraData& d) {
    const AlgebraModel& m = *d.model;
    const WeightTriple two_rho = combine(zero_weight(m.rank()), m.rho_weight(), GaussRat(2));
    QuadraticEigenvalues out;
    for (const auto& p : d.points)
        out.casimir.push_back(weight_form(m, p.weight, combine(p.weight, two_rho, GaussRat(1))) *
                              GaussRat::ratio(1, 2));
    out.hamiltonian = master_partials(d).points;
    for (const auto& r : bethe_residuals(d))
        if (!r.is_zero()) out.on_shell = false;
    return out;
}

}  // namespace opers
