#include "opers/oper.hpp"

#include <stdexcept>

namespace opers {

namespace {

std::vector<ExactRF> apply_matrix(const QMatrix& m, const std::vector<ExactRF>& x) {
    std::vector<ExactRF> out(m.rows());
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            if (sgn(m(r, c)) != 0 && !x[c].is_zero()) out[r] += x[c] * GaussRat(m(r, c));
    return out;
}

void require_same_model(const ModelPtr& a, const ModelPtr& b) {
    if (a != b) throw std::invalid_argument("model mismatch");
}

}  // namespace

namespace detail {

Rational bernoulli(int n) {
    // B_0..B_n from sum_{k<=m} C(m+1, k) B_k = 0
    std::vector<Rational> b(n + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational acc(0), binom(1);
        for (int k = 0; k < m; ++k) {
            acc += binom * b[k];
            binom = binom * Rational(m + 1 - k) / Rational(k + 1);
        }
        b[m] = -acc / Rational(m + 1);
    }
    return b[n];
}

}  // namespace detail

RFVector to_rf(const GradedVector<Rational>& x) {
    RFVector out(x.model());
    for (const auto& [n, v] : x.grades()) {
        std::vector<ExactRF> w;
        for (const auto& c : v) w.emplace_back(GaussRat(c));
        out.set_grade(n, std::move(w));
    }
    out.set_delta(ExactRF(GaussRat(x.delta())));
    out.set_rho(ExactRF(GaussRat(x.rho())));
    return out;
}

RFVector to_rf(const GradedVector<GaussRat>& x) {
    RFVector out(x.model());
    for (const auto& [n, v] : x.grades()) {
        std::vector<ExactRF> w;
        for (const auto& c : v) w.emplace_back(c);
        out.set_grade(n, std::move(w));
    }
    out.set_delta(ExactRF(x.delta()));
    out.set_rho(ExactRF(x.rho()));
    return out;
}

RFVector derivative(const RFVector& x) {
    return x.transform([](const ExactRF& f) -> ExactRF { return f.derivative(); });
}

RFVector scale(const RFVector& x, const Rational& c) {
    if (sgn(c) == 0) return RFVector(x.model());
    GaussRat s(c);
    return x.transform([&](const ExactRF& f) -> ExactRF { return f * s; });
}

Connection::Connection(ModelPtr m, ExactRF phi, RFVector b)
    : model(std::move(m)), twist(std::move(phi)), body(std::move(b)) {
    if (!model) throw std::invalid_argument("connection without a model");
    if (!body.model()) body = RFVector(model);
    require_same_model(model, body.model());
    if (!body.rho().is_zero()) throw std::invalid_argument("rho part of a connection is fixed by the twist");
    if (!body.grades().empty() && (body.min_grade() < 0 || body.max_grade() > model->cutoff()))
        throw std::invalid_argument("connection body must live in grades 0..cutoff");
}

Connection Connection::trivial(ModelPtr m, ExactRF phi) {
    RFVector b(m);
    return Connection(std::move(m), std::move(phi), std::move(b));
}

ExactRF Connection::rho_coefficient() const {
    return twist * (GaussRat(-1) / GaussRat(model->dual_coxeter_number()));
}

RFVector Connection::element() const {
    RFVector x = body + to_rf(model->p_minus_one());
    x.set_rho(rho_coefficient());
    return x;
}

Connection Connection::from_element(ModelPtr m, ExactRF phi, const RFVector& element) {
    RFVector b = element - to_rf(m->p_minus_one());
    Connection c(m, std::move(phi), RFVector(m));
    if (b.rho() != c.rho_coefficient())
        throw std::logic_error("rho coefficient does not match the twist");
    b.set_rho(ExactRF());
    b.clear_truncated();
    c.body = b.up_to(m->cutoff());
    if (!c.body.grades().empty() && c.body.min_grade() < 0)
        throw std::logic_error("negative grades beyond p_-1 in a connection");
    return c;
}

Connection gauge_transform(const Connection& conn, const GaugeParameter& g) {
    if (g.m.is_zero()) return conn;
    require_same_model(conn.model, g.m.model());
    if (g.m.min_grade() < 1 || !g.m.delta().is_zero() || !g.m.rho().is_zero())
        throw std::invalid_argument("gauge parameter must live in positive grades");
    const int K = conn.cutoff();
    const RFVector& m = g.m;

    RFVector result = conn.element();
    RFVector term = result;
    for (int k = 1; !term.is_zero(); ++k) {
        term = scale(bracket(m, term, K), Rational(1, k));
        result += term;
    }
    term = derivative(m).up_to(K);
    for (int k = 1; !term.is_zero(); ++k) {
        result -= term;
        term = scale(bracket(m, term, K), Rational(1, k + 1));
    }
    return Connection::from_element(conn.model, conn.twist, result);
}

GaugeParameter compose(const GaugeParameter& outer, const GaugeParameter& inner) {
    if (outer.is_zero()) return inner;
    if (inner.is_zero()) return outer;
    require_same_model(outer.m.model(), inner.m.model());
    const int top = outer.m.model()->max_grade();
    auto br = [top](const RFVector& x, const RFVector& y) { return bracket(x, y, top); };
    return GaugeParameter(bch_series(outer.m, inner.m, top, br));
}

GaugeParameter inverse(const GaugeParameter& g) { return GaugeParameter(g.m.negated()); }

Connection QuasiCanonicalForm::reconstruct() const {
    RFVector b(model);
    const auto& slots = model->exponents();
    for (std::size_t s = 0; s < v.size(); ++s) {
        if (v[s].is_zero()) continue;
        std::vector<ExactRF> coords;
        for (const auto& c : model->p_plus_coords(static_cast<int>(s))) coords.push_back(v[s] * GaussRat(c));
        model->add_ambient(b, slots[s].value, coords);
    }
    return Connection(model, twist, std::move(b));
}

GaugeParameter QuasiCanonicalForm::total_gauge() const {
    GaugeParameter total;
    for (const auto& f : factors) total = compose(f, total);
    return total;
}

QuasiCanonicalForm quasi_canonicalize(const Connection& conn) {
    const ModelPtr& model = conn.model;
    const int K = model->cutoff();
    QuasiCanonicalForm q;
    q.model = model;
    q.twist = conn.twist;
    q.v.resize(model->exponents().size());
    Connection cur = conn;

    // grade n: remove the c_n part (and at n = 0 the delta part) with m_{n+1} in grade n + 1
    for (int n = 0; n <= K; ++n) {
        const GradeDecomposition& d = model->decomposition(n);
        std::vector<ExactRF> x = model->ambient(cur.body, n);
        std::vector<ExactRF> lifted = apply_matrix(d.solver, x);
        RFVector m(model);
        model->add_ambient(m, n + 1, lifted);
        if (m.is_zero()) continue;
        GaugeParameter g(std::move(m));
        cur = gauge_transform(cur, g);
        q.factors.push_back(std::move(g));
    }

    for (int n = 0; n <= K; ++n) {
        const GradeDecomposition& d = model->decomposition(n);
        std::vector<ExactRF> coords = apply_matrix(d.coords, model->ambient(cur.body, n));
        for (std::size_t k = d.a_basis.size(); k < coords.size(); ++k)
            if (!coords[k].is_zero()) throw std::logic_error("complement part survived canonicalization");
        if (n == 0) {
            if (!cur.body.delta().is_zero()) throw std::logic_error("delta part survived canonicalization");
            continue;
        }
        for (std::size_t k = 0; k < d.slots.size(); ++k) q.v[d.slots[k]] = coords[k];
    }
    return q;
}

ExactRF v1_direct(const Connection& conn) {
    const ModelPtr& model = conn.model;
    const GaussRat hv(model->dual_coxeter_number());
    RFVector u0 = conn.body.part(0);
    RFVector u1 = conn.body.part(1);
    RFVector rho = to_rf(model->rho_element());
    RFVector pm1 = to_rf(model->p_minus_one());
    ExactRF half(GaussRat::ratio(1, 2));
    ExactRF total = half * form(u0, u0) + form(rho, derivative(u0)) -
                    conn.twist * form(rho, u0) * (GaussRat(1) / hv) + form(pm1, u1);
    return total * (GaussRat(1) / hv);
}

QuasiCanonicalForm residual_gauge(const QuasiCanonicalForm& q, const std::map<int, ExactRF>& f,
                                  bool modulo_delta) {
    QuasiCanonicalForm out = q;
    const auto& slots = q.model->exponents();
    const GaussRat hv(q.model->dual_coxeter_number());
    for (const auto& [slot, fj] : f) {
        if (slot < 0 || slot >= static_cast<int>(slots.size()))
            throw std::out_of_range("unknown exponent slot");
        if (slots[slot].value == 1 && !modulo_delta)
            throw std::invalid_argument("residual gauge at exponent 1 is only defined modulo delta");
        out.v[slot] = out.v[slot] - fj.derivative() + q.twist * fj * (GaussRat(slots[slot].value) / hv);
    }
    out.factors.push_back(residual_gauge_parameter(q.model, f));
    return out;
}

GaugeParameter residual_gauge_parameter(const ModelPtr& model, const std::map<int, ExactRF>& f) {
    RFVector m(model);
    const auto& slots = model->exponents();
    for (const auto& [slot, fj] : f) {
        std::vector<ExactRF> coords;
        for (const auto& c : model->p_plus_coords(slot)) coords.push_back(fj * GaussRat(c));
        model->add_ambient(m, slots.at(slot).value, coords);
    }
    return GaugeParameter(std::move(m));
}

Mobius::Mobius(GaussRat a_, GaussRat b_, GaussRat c_, GaussRat d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (determinant().is_zero()) throw std::invalid_argument("degenerate Mobius map");
}

ExactRF Mobius::pullback(const ExactRF& f) const { return compose_mobius(f, a, b, c, d); }

ExactRF Mobius::derivative() const {
    if (c.is_zero()) return ExactRF(determinant() / (d * d));
    return ExactRF::pole_term(determinant() / (c * c), -d / c, 2);
}

ExactRF Mobius::log_derivative_of_derivative() const {
    if (c.is_zero()) return {};
    return ExactRF::pole_term(GaussRat(-2), -d / c, 1);
}

Connection change_coordinate(const Connection& conn, const Mobius& mu) {
    const ModelPtr& model = conn.model;
    const ExactRF dmu = mu.derivative();
    RFVector body(model);
    ExactRF scale_factor = dmu;  // mu'^{n+1} at grade n
    for (int n = 0; n <= model->cutoff(); ++n) {
        if (const auto* g = conn.body.grade(n)) {
            std::vector<ExactRF> w;
            for (const auto& f : *g) w.push_back(f.is_zero() ? ExactRF() : mu.pullback(f) * scale_factor);
            body.set_grade(n, std::move(w));
        }
        scale_factor = scale_factor * dmu;
    }
    if (!conn.body.delta().is_zero()) body.set_delta(mu.pullback(conn.body.delta()) * dmu);
    ExactRF twist = mu.pullback(conn.twist) * dmu +
                    mu.log_derivative_of_derivative() * GaussRat(model->dual_coxeter_number());
    return Connection(model, std::move(twist), std::move(body));
}

}  // namespace opers
