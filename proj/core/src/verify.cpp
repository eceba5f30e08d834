#include "opers/verify.hpp"

#include "opers/integrate.hpp"
#include "opers/io.hpp"

#include "json.hpp"

#include <array>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace opers::verify {

namespace {

using Rng = std::mt19937;
using QVec = GradedVector<Rational>;
constexpr double kPi = std::numbers::pi;


Rational small_rational(Rng& rng, int range = 4, int max_den = 3) {
    std::uniform_int_distribution<int> num(-range, range), den(1, max_den);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

GaussRat small_gauss(Rng& rng, bool complex_part) {
    return GaussRat(small_rational(rng), complex_part ? small_rational(rng, 2, 2) : Rational(0));
}

WeightTriple random_weight(const AlgebraModel& m, Rng& rng) {
    WeightTriple w{std::vector<GaussRat>(m.rank()), GaussRat(small_rational(rng, 3, 2)),
                   GaussRat(small_rational(rng, 2, 2))};
    for (auto& x : w.lambda_dot) x = GaussRat(small_rational(rng, 3, 2));
    if (w.level.is_zero()) w.level = GaussRat(1);
    return w;
}

GaussRat fresh_point(Rng& rng, const std::vector<GaussRat>& taken, bool complex_part) {
    for (;;) {
        GaussRat z = small_gauss(rng, complex_part);
        if (std::find(taken.begin(), taken.end(), z) == taken.end()) return z;
    }
}

MiuraData random_miura(const ModelPtr& model, Rng& rng, int n_points, int n_roots, bool complex_part) {
    MiuraData d{model, {}, {}};
    std::vector<GaussRat> taken;
    for (int i = 0; i < n_points; ++i) {
        taken.push_back(fresh_point(rng, taken, complex_part));
        d.points.push_back({taken.back(), random_weight(*model, rng)});
    }
    std::uniform_int_distribution<int> color(0, model->rank());
    for (int j = 0; j < n_roots; ++j) {
        taken.push_back(fresh_point(rng, taken, complex_part));
        d.roots.push_back({taken.back(), color(rng)});
    }
    return d;
}

// Single root from the closed-form solution of its Bethe equation.
MiuraData on_shell_solved(const ModelPtr& model, Rng& rng, int color) {
    for (;;) {
        MiuraData d = random_miura(model, rng, 2, 0, false);
        auto w = solve_single_root(d, color);
        if (!w || *w == d.points[0].z || *w == d.points[1].z) continue;
        d.roots.push_back({*w, color});
        return d;
    }
}

// Root placed anywhere in the plane; the second weight moves along the root's simple root until on shell.
MiuraData on_shell_placed(const ModelPtr& model, Rng& rng, int color) {
    for (;;) {
        MiuraData d = random_miura(model, rng, 2, 1, true);
        d.roots[0].color = color;
        const GaussRat& w = d.roots[0].w;
        const WeightTriple alpha = model->simple_root_weight(color);
        GaussRat a = weight_form(*model, d.points[0].weight, alpha);
        if (a.is_zero()) continue;
        GaussRat target = -a * (w - d.points[1].z) / (w - d.points[0].z);
        GaussRat t = (target - weight_form(*model, d.points[1].weight, alpha)) / weight_form(*model, alpha, alpha);
        WeightTriple& l2 = d.points[1].weight;
        for (std::size_t k = 0; k < l2.lambda_dot.size(); ++k) l2.lambda_dot[k] += t * alpha.lambda_dot[k];
        l2.level += t * alpha.level;
        l2.delta_shift += t * alpha.delta_shift;
        if (l2.level.is_zero()) continue;
        return d;
    }
}

std::vector<Complex> marked(const MiuraData& d) {
    std::vector<Complex> out;
    for (const auto& p : d.points) out.push_back(p.z.to_complex());
    return out;
}

std::optional<Contour> clear_pochhammer(const MiuraData& d, int i, int j) {
    try {
        return pochhammer_for(d, i, j);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Detour from the basepoint of `c` around the first Bethe root, or nothing when the path is crowded.
std::optional<Contour> detour_around_root(const MiuraData& d, const Contour& c) {
    auto pts = marked(d);
    Complex base = c.basepoint, w = d.roots[0].w.to_complex();
    double rho = 0.3 * std::min(std::abs(w - pts[0]), std::abs(w - pts[1]));
    Segment path = Segment::line(base, w);
    if (path.distance_to(pts[0]) < rho || path.distance_to(pts[1]) < rho || std::abs(w - base) < 2 * rho)
        return std::nullopt;
    return loop_around(w, rho, base, +1, pts, -1);
}

ExactRF random_rf(Rng& rng, const std::vector<GaussRat>& poles, int degree) {
    std::vector<GaussRat> coeffs;
    for (int k = 0; k <= degree; ++k) coeffs.push_back(small_gauss(rng, true));
    ExactRF f{ExactPoly(coeffs)};
    std::uniform_int_distribution<int> order(1, 2);
    for (const auto& p : poles) f += ExactRF::pole_term(small_gauss(rng, true), p, order(rng));
    return f;
}

// Lanczos approximation (g = 7, n = 9) with reflection.
Complex gamma(Complex z) {
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma(1.0 - z));
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    Complex x = c[0];
    for (int k = 1; k < 9; ++k) x += c[k] / (z + double(k));
    Complex t = z + 7.5;
    return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}


struct Recorder {
    CheckResult result;
    explicit Recorder(std::string name) { result.name = std::move(name); }
    void count() { ++result.instances; }
    void fail(const std::string& why, const std::string& instance = {}) {
        if (!result.pass) return;
        result.pass = false;
        result.detail = why;
        result.counterexample = instance;
    }
    // Runs one instance, turning exceptions into failures.
    template <class Fn>
    void guard(const std::string& instance, Fn fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            fail(std::string("exception: ") + e.what(), instance);
        }
        count();
    }
};

std::string describe(const Complex& z) { return to_string(z); }

using CheckFn = std::function<CheckResult(Rng&, const SuiteConfig&)>;
struct Check {
    std::string name;
    CheckFn run;
};


std::vector<ModelPtr> algebra_models() {
    return {AlgebraModel::build('A', 1, 9), AlgebraModel::build('A', 2, 8), AlgebraModel::build('A', 3, 6)};
}

CheckResult check_exponents(Rng&, const SuiteConfig&) {
    Recorder rec("exponents");
    for (const auto& m : algebra_models()) {
        std::vector<int> expected;
        const int h = m->rank() + 1;
        for (int n = 1; n <= m->cutoff(); ++n)
            if (n % h != 0) expected.push_back(n);
        if (m->exponent_values() != expected) rec.fail("exponent multiset mismatch for " + m->name());
        rec.count();
    }
    return rec.result;
}

CheckResult check_complement(Rng&, const SuiteConfig&) {
    Recorder rec("complement_dimension");
    for (const auto& m : algebra_models()) {
        for (int n = -m->cutoff(); n <= m->cutoff(); ++n) {
            const auto& d = m->decomposition(n);
            if (static_cast<int>(d.c_basis.size()) != m->rank() ||
                static_cast<int>(d.a_basis.size() + d.c_basis.size()) != m->ambient_dim(n))
                rec.fail(m->name() + ": wrong complement dimension in grade " + std::to_string(n));
        }
        rec.count();
    }
    return rec.result;
}

CheckResult check_principal(Rng&, const SuiteConfig&) {
    Recorder rec("principal_relations");
    for (const auto& m : algebra_models()) {
        const Rational hv(m->dual_coxeter_number());
        const auto& slots = m->exponents();
        for (std::size_t s = 0; s < slots.size(); ++s) {
            for (std::size_t t = 0; t < slots.size(); ++t) {
                if (form(m->p_plus(s), m->p_minus(t)) != (s == t ? hv : Rational(0)))
                    rec.fail(m->name() + ": (p_m|p_n) normalization");
                QVec c = bracket(m->p_plus(s), m->p_minus(t));
                if (!c.grades().empty() || c.delta() != (s == t ? Rational(slots[s].value) : Rational(0)))
                    rec.fail(m->name() + ": [p_m, p_-n] is not m delta");
                if (slots[s].value + slots[t].value <= m->cutoff() &&
                    (!bracket(m->p_plus(s), m->p_plus(t)).is_zero() || !bracket(m->p_minus(s), m->p_minus(t)).is_zero()))
                    rec.fail(m->name() + ": p_m do not commute");
            }
        }
        rec.count();
    }
    return rec.result;
}

QVec random_element(const ModelPtr& m, Rng& rng, int lo, int hi) {
    std::uniform_int_distribution<int> c(-3, 3);
    QVec x(m);
    for (int n = lo; n <= hi; ++n)
        for (int i = 0; i < m->dim(n); ++i) x.add(n, i, Rational(c(rng)));
    x.set_delta(Rational(c(rng)));
    x.set_rho(Rational(c(rng)));
    return x;
}

CheckResult check_jacobi(Rng& rng, const SuiteConfig&) {
    Recorder rec("jacobi_and_invariance");
    for (const auto& m : algebra_models()) {
        for (int trial = 0; trial < 40; ++trial) {
            QVec x = random_element(m, rng, -2, 2), y = random_element(m, rng, -2, 2), z = random_element(m, rng, -2, 2);
            if (!(bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))).is_zero())
                rec.fail(m->name() + ": Jacobi identity");
            if (form(bracket(x, y), z) != form(x, bracket(y, z))) rec.fail(m->name() + ": form invariance");
            rec.count();
        }
    }
    return rec.result;
}


CheckResult check_canonical(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("v1_closed_form");
    std::uniform_int_distribution<int> n_pts(1, 3), n_roots(0, 2), cutoff(2, 8);
    for (int trial = 0; trial < cfg.canonical_instances; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, cutoff(rng));
        MiuraData d = random_miura(m, rng, n_pts(rng), n_roots(rng), trial % 4 == 0);
        rec.guard(io::miura_to_json(d), [&] {
            Connection c = build_miura(d);
            ExactRF v1 = quasi_canonicalize(c).v1();
            if (v1 != v1_direct(c)) rec.fail("recursion differs from the direct formula", io::miura_to_json(d));
            if (v1 != v1_predicted(d)) rec.fail("recursion differs from the predicted v_1", io::miura_to_json(d));
        });
    }
    return rec.result;
}

CheckResult check_on_shell(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("on_shell_regular");
    for (int trial = 0; trial < cfg.on_shell_instances; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, 4);
        MiuraData d = on_shell_solved(m, rng, trial % (m->rank() + 1));
        rec.guard(io::miura_to_json(d), [&] {
            for (const auto& v : regularity_check(d)) {
                bool pole_free = std::all_of(v.pole_orders.begin(), v.pole_orders.end(), [](int o) { return o <= 0; });
                if (!v.residual.is_zero() || !pole_free || !v.regular_by_canonical_form || !v.regular_by_criterion)
                    rec.fail("on-shell root is not regular", io::miura_to_json(d));
            }
        });
    }
    return rec.result;
}

CheckResult check_off_shell(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("off_shell_pole");
    std::uniform_int_distribution<int> den(5, 13);
    for (int trial = 0; trial < cfg.off_shell_instances; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, 4);
        MiuraData d = on_shell_solved(m, rng, trial % (m->rank() + 1));
        d.roots[0].w += GaussRat::ratio(1, den(rng));
        if (d.roots[0].w == d.points[0].z || d.roots[0].w == d.points[1].z) {
            --trial;
            continue;
        }
        rec.guard(io::miura_to_json(d), [&] {
            const auto v = regularity_check(d).at(0);
            const GaussRat expected = master_partials(d).roots.at(0) / GaussRat(m->dual_coxeter_number());
            if (expected.is_zero()) return;
            if (v.regular_by_canonical_form || v.regular_by_criterion || v.pole_orders.at(0) != 1)
                rec.fail("off-shell root not detected", io::miura_to_json(d));
            if (v.v1_residue != expected)
                rec.fail("v_1 residue " + to_string(v.v1_residue) + " differs from " + to_string(expected),
                         io::miura_to_json(d));
        });
    }
    return rec.result;
}


CheckResult check_beta(Rng&, const SuiteConfig& cfg) {
    Recorder rec("beta_regression");
    auto m = AlgebraModel::build('A', 1, 2);
    const std::vector<std::pair<GaussRat, GaussRat>> cases = {
        {GaussRat::ratio(1, 3), GaussRat::ratio(1, 2)},
        {GaussRat(Rational(3, 10), Rational(1, 10)), GaussRat::ratio(9, 20)}};
    for (const auto& [a, b] : cases) {
        // A1, r = 1: P^{-1/2} = z^{a-1} (z-1)^{b-1} for levels 2(1-a), 2(1-b); v_1 = 1.
        MiuraData d{m, {{GaussRat(0), {{GaussRat(0)}, GaussRat(2) * (GaussRat(1) - a), GaussRat(0)}},
                        {GaussRat(1), {{GaussRat(0)}, GaussRat(2) * (GaussRat(1) - b), GaussRat(0)}}}, {}};
        rec.guard(io::miura_to_json(d), [&] {
            QuasiCanonicalForm q;
            q.model = m;
            q.twist = twist_function(d);
            q.v.assign(m->exponents().size(), ExactRF());
            q.v[exponent_slot(*m, 1)] = ExactRF(GaussRat(1));
            auto r = twisted_integral(d, q, 1, pochhammer({0, 1}, 0, 1, 0.25, 0.5));
            Complex ca = a.to_complex(), cb = b.to_complex();
            const Complex two_pi_i(0, 2 * kPi);
            Complex expected = std::exp(Complex(0, kPi) * (cb - 1.0)) * (1.0 - std::exp(two_pi_i * ca)) *
                               (1.0 - std::exp(two_pi_i * cb)) * gamma(ca) * gamma(cb) / gamma(ca + cb);
            if (std::abs(r.value - expected) > cfg.integral_tol)
                rec.fail("Pochhammer integral " + describe(r.value) + " vs " + describe(expected), io::miura_to_json(d));
        });
    }
    for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 3}}) {
        TwistedIntegrand g{{0, 1}, {Complex(a - 1), Complex(b - 1)}, [](Complex) { return Complex(1); }, {}};
        rec.guard("", [&] {
            if (std::abs(integrate_twisted(g, pochhammer({0, 1}, 0, 1, 0.25, 0.5)).value) > cfg.integral_tol)
                rec.fail("integer exponents do not give zero");
        });
    }
    return rec.result;
}

CheckResult check_stokes(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("twisted_stokes");
    int done = 0;
    for (int trial = 0; done < cfg.stokes_instances && trial < 50 * cfg.stokes_instances; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, 3);
        MiuraData d = random_miura(m, rng, 2 + trial % 2, trial % 2, true);
        auto c = clear_pochhammer(d, 0, 1);
        if (!c) continue;
        ExactRF f = random_rf(rng, d.singular_points(), 3);
        int j = 1 + trial % 3;
        rec.guard(io::miura_to_json(d), [&] {
            auto r = stokes_check(d, j, f, *c);
            if (std::abs(r.value) > cfg.stokes_tol)
                rec.fail("integral of an exact twisted derivative is " + describe(r.value), io::miura_to_json(d));
        });
        ++done;
    }
    if (done < cfg.stokes_instances) rec.fail("could not build enough clear contours");
    return rec.result;
}

CheckResult check_gauge(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("gauge_invariance");
    int done = 0;
    for (int trial = 0; done < cfg.gauge_instances && trial < 50 * cfg.gauge_instances; ++trial) {
        // A2 has no exponent 3, so that exponent is exercised on A1.
        const bool a1 = trial % 3 == 2;
        auto m = AlgebraModel::build('A', a1 ? 1 : 2, 4);
        MiuraData d = random_miura(m, rng, 2, 1, true);
        auto c = clear_pochhammer(d, 0, 1);
        if (!c) continue;
        rec.guard(io::miura_to_json(d), [&] {
            auto q = quasi_canonicalize(build_miura(d));
            for (int r : a1 ? std::vector<int>{3} : std::vector<int>{2, 4}) {
                auto probe = gauge_invariance_probe(d, q, r, *c, random_rf(rng, d.singular_points(), 4));
                if (probe.delta > cfg.integral_tol * std::max(1.0, std::abs(probe.before.value)))
                    rec.fail("residual gauge moved I_" + std::to_string(r) + " by " + std::to_string(probe.delta),
                             io::miura_to_json(d));
            }
        });
        ++done;
    }
    if (done < cfg.gauge_instances) rec.fail("could not build enough clear contours");
    return rec.result;
}

CheckResult check_deformation(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("contour_deformation");
    int done = 0;
    for (int trial = 0; done < cfg.deformation_instances && trial < 100 * cfg.deformation_instances; ++trial) {
        auto m = AlgebraModel::build('A', 2, 3);
        MiuraData d = on_shell_placed(m, rng, trial % 3);
        const bool off_shell = done % 2 == 1;
        if (off_shell) d.roots[0].w += GaussRat(Rational(1, 7), Rational(1, 11));
        auto c = clear_pochhammer(d, 0, 1);
        if (!c) continue;
        auto detour = detour_around_root(d, *c);
        if (!detour) continue;
        rec.guard(io::miura_to_json(d), [&] {
            if (!off_shell && !bethe_residuals(d)[0].is_zero()) rec.fail("instance is not on shell", io::miura_to_json(d));
            auto q = quasi_canonicalize(build_miura(d));
            auto logs = continue_logs(marked(d), c->basepoint, d.roots[0].w.to_complex());
            Contour moved = c->then(*detour);
            for (int r : {1, 2}) {
                Complex jump = twisted_integral(d, q, r, moved).value - twisted_integral(d, q, r, *c).value;
                Complex expected(0);
                if (off_shell) {
                    GaussRat s = GaussRat(-r) / GaussRat(m->dual_coxeter_number());
                    expected = Complex(0, 2 * kPi) * twisted_residue(d, s, q.v[exponent_slot(*m, r)], d.roots[0].w, logs);
                }
                if (std::abs(jump - expected) > cfg.integral_tol)
                    rec.fail("detour changed I_" + std::to_string(r) + " by " + describe(jump) + ", expected " +
                                 describe(expected),
                             io::miura_to_json(d));
            }
        });
        ++done;
    }
    if (done < cfg.deformation_instances) rec.fail("could not build enough clear contours");
    return rec.result;
}


CheckResult check_mobius(Rng& rng, const SuiteConfig& cfg) {
    Recorder rec("mobius_covariance");
    for (int trial = 0; trial < cfg.mobius_instances; ++trial) {
        auto m = AlgebraModel::build('A', 1 + trial % 2, 4);
        MiuraData d = random_miura(m, rng, 2, trial % 2, trial % 3 == 0);
        GaussRat a = small_gauss(rng, false), b = small_gauss(rng, true), c = small_gauss(rng, false),
                 e = small_gauss(rng, false);
        if ((a * e - b * c).is_zero()) {
            --trial;
            continue;
        }
        rec.guard(io::miura_to_json(d), [&] {
            Mobius mu(a, b, c, e);
            Connection miura = build_miura(d);
            auto q = quasi_canonicalize(miura);
            auto moved = quasi_canonicalize(change_coordinate(q.reconstruct(), mu));
            const ExactRF dmu = mu.derivative();
            const GaussRat hv(m->dual_coxeter_number());
            if (moved.twist != mu.pullback(q.twist) * dmu + mu.log_derivative_of_derivative() * hv)
                rec.fail("twist does not transform as a connection", io::miura_to_json(d));
            for (std::size_t s = 0; s < q.v.size(); ++s) {
                ExactRF expected = mu.pullback(q.v[s]);
                for (int k = 0; k <= m->exponents()[s].value; ++k) expected = expected * dmu;
                if (moved.v[s] != expected)
                    rec.fail("v_" + std::to_string(m->exponents()[s].value) + " is not a differential of the right weight",
                             io::miura_to_json(d));
            }
            if (quasi_canonicalize(change_coordinate(miura, mu)).v1() != mu.pullback(q.v1()) * dmu * dmu)
                rec.fail("v_1 of the transformed Miura oper is not the pulled-back quadratic differential",
                         io::miura_to_json(d));
        });
    }
    return rec.result;
}

std::vector<Check> checks_for(const std::string& suite) {
    if (suite == "algebra")
        return {{"exponents", check_exponents},
                {"complement_dimension", check_complement},
                {"principal_relations", check_principal},
                {"jacobi_and_invariance", check_jacobi}};
    if (suite == "canonical") return {{"v1_closed_form", check_canonical}};
    if (suite == "bethe") return {{"on_shell_regular", check_on_shell}, {"off_shell_pole", check_off_shell}};
    if (suite == "integrals")
        return {{"beta_regression", check_beta},
                {"twisted_stokes", check_stokes},
                {"gauge_invariance", check_gauge},
                {"contour_deformation", check_deformation}};
    if (suite == "covariance") return {{"mobius_covariance", check_mobius}};
    throw std::invalid_argument("unknown suite " + suite);
}

}  // namespace

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::string SuiteReport::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json entry{{"name", c.name}, {"pass", c.pass}, {"instances", c.instances}};
        if (!c.detail.empty()) entry["detail"] = c.detail;
        if (!c.counterexample.empty()) entry["counterexample"] = nlohmann::json::parse(c.counterexample);
        list.push_back(entry);
    }
    return nlohmann::json{{"suite", suite}, {"seed", seed}, {"pass", pass()}, {"checks", list}}.dump(2);
}

std::vector<std::string> suite_names() { return {"algebra", "canonical", "bethe", "integrals", "covariance"}; }

SuiteReport run_suite(const std::string& name, unsigned seed, const SuiteConfig& config) {
    std::vector<Check> checks;
    if (name == "all") {
        for (const auto& s : suite_names())
            for (auto& c : checks_for(s)) checks.push_back(std::move(c));
    } else {
        checks = checks_for(name);
    }
    SuiteReport report;
    report.suite = name;
    report.seed = seed;
    // Each check draws from its own stream, so results do not depend on scheduling.
    auto run_one = [&](const Check& c) {
        std::seed_seq seq(c.name.begin(), c.name.end());
        std::vector<unsigned> mix(1);
        seq.generate(mix.begin(), mix.end());
        Rng rng(seed ^ mix[0]);
        return c.run(rng, config);
    };
    if (config.parallel) {
        std::vector<std::future<CheckResult>> jobs;
        for (const auto& c : checks) jobs.push_back(std::async(std::launch::async, run_one, std::cref(c)));
        for (auto& j : jobs) report.checks.push_back(j.get());
    } else {
        for (const auto& c : checks) report.checks.push_back(run_one(c));
    }
    return report;
}

}  // namespace opers::verify
