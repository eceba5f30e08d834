#include "opers/io.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace opers::io {

using nlohmann::json;

namespace {

json exact(const GaussRat& x) {
    if (x.is_real()) return to_string(x.re());
    return json::array({to_string(x.re()), to_string(x.im())});
}

GaussRat exact_from(const json& j) {
    if (j.is_string()) return parse_gauss(j.get<std::string>());
    if (j.is_number_integer()) return GaussRat(j.get<long>());
    if (j.is_number()) return GaussRat(parse_rational(j.dump()));
    if (j.is_array() && j.size() == 2) {
        GaussRat re = exact_from(j[0]), im = exact_from(j[1]);
        if (!re.is_real() || !im.is_real()) throw std::invalid_argument("nested complex scalar");
        return GaussRat(re.re(), im.re());
    }
    throw std::invalid_argument("expected a scalar, got " + j.dump());
}

json number(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex number_from(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    return exact_from(j).to_complex();
}

double real_from(const json& j) {
    Complex z = number_from(j);
    if (z.imag() != 0) throw std::invalid_argument("expected a real number, got " + j.dump());
    return z.real();
}

json rf(const ExactRF& f) {
    json num = json::array();
    for (const auto& c : f.numerator().coeffs()) num.push_back(exact(c));
    json out{{"numerator", num}};
    if (f.is_factored()) {
        json poles = json::array();
        for (const auto& p : f.poles()) poles.push_back(json::array({exact(p.root), p.order}));
        out["poles"] = poles;
    } else {
        json den = json::array();
        const ExactPoly denominator = f.denominator();
        for (const auto& c : denominator.coeffs()) den.push_back(exact(c));
        out["denominator"] = den;
    }
    return out;
}

ExactRF rf_from(const json& j) {
    if (!j.is_object()) return ExactRF(exact_from(j));
    std::vector<GaussRat> num;
    for (const auto& c : j.at("numerator")) num.push_back(exact_from(c));
    if (j.contains("denominator")) {
        std::vector<GaussRat> den;
        for (const auto& c : j.at("denominator")) den.push_back(exact_from(c));
        return ExactRF(ExactPoly(num), ExactPoly(den));
    }
    ExactRF::PoleList poles;
    if (j.contains("poles"))
        for (const auto& p : j.at("poles")) poles.push_back({exact_from(p.at(0)), p.at(1).get<int>()});
    return ExactRF::from_poles(ExactPoly(num), std::move(poles));
}

json model_json(const AlgebraModel& m) {
    return {{"type", std::string(1, m.type())}, {"rank", m.rank()}, {"cutoff", m.cutoff()}};
}

ModelPtr model_from(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type.size() != 1) throw std::invalid_argument("model type must be one letter");
    return AlgebraModel::build(type[0], j.at("rank").get<int>(), j.at("cutoff").get<int>(),
                               j.value("shuffle_seed", 0u));
}

json weight_json(const WeightTriple& w) {
    json dot = json::array();
    for (const auto& x : w.lambda_dot) dot.push_back(exact(x));
    return {{"lambda_dot", dot}, {"level", exact(w.level)}, {"delta", exact(w.delta_shift)}};
}

WeightTriple weight_from(const json& j, int rank) {
    WeightTriple w;
    for (const auto& x : j.at("lambda_dot")) w.lambda_dot.push_back(exact_from(x));
    if (static_cast<int>(w.lambda_dot.size()) != rank) throw std::invalid_argument("lambda_dot has the wrong length");
    w.level = j.contains("level") ? exact_from(j.at("level")) : GaussRat(0);
    w.delta_shift = j.contains("delta") ? exact_from(j.at("delta")) : GaussRat(0);
    return w;
}

json segment_json(const Segment& s) {
    if (s.kind == Segment::Kind::Line) return {{"kind", "line"}, {"from", number(s.from)}, {"to", number(s.to)}};
    return {{"kind", "arc"},           {"center", number(s.center)},   {"radius", s.radius},
            {"from_angle", s.from_angle}, {"to_angle", s.to_angle}};
}

std::string exponent_label(const ExponentSlot& s) {
    return s.copy == 0 ? std::to_string(s.value) : std::to_string(s.value) + "#" + std::to_string(s.copy);
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ModelPtr model_from_json(const std::string& text) { return model_from(json::parse(text)); }
std::string model_to_json(const AlgebraModel& model) { return model_json(model).dump(); }

MiuraData miura_from_json(const std::string& text, ModelPtr model) {
    json j = json::parse(text);
    if (!model) {
        if (!j.contains("model")) throw std::invalid_argument("Miura data needs a model");
        model = model_from(j.at("model"));
    }
    MiuraData d{model, {}, {}};
    for (const auto& p : j.at("points")) d.points.push_back({exact_from(p.at("z")), weight_from(p.at("weight"), model->rank())});
    if (j.contains("bethe_roots"))
        for (const auto& r : j.at("bethe_roots")) d.roots.push_back({exact_from(r.at("w")), r.at("color").get<int>()});
    d.validate();
    return d;
}

std::string miura_to_json(const MiuraData& d) {
    json points = json::array(), roots = json::array();
    for (const auto& p : d.points) points.push_back({{"z", exact(p.z)}, {"weight", weight_json(p.weight)}});
    for (const auto& r : d.roots) roots.push_back({{"w", exact(r.w)}, {"color", r.color}});
    return json{{"model", model_json(*d.model)}, {"points", points}, {"bethe_roots", roots}}.dump(2);
}

Contour contour_from_json(const std::string& text) {
    json j = json::parse(text);
    Contour c;
    for (const auto& s : j.at("segments")) {
        std::string kind = s.at("kind").get<std::string>();
        if (kind == "line") {
            c.segments.push_back(Segment::line(number_from(s.at("from")), number_from(s.at("to"))));
        } else if (kind == "arc") {
            c.segments.push_back(Segment::arc(number_from(s.at("center")), real_from(s.at("radius")),
                                              real_from(s.at("from_angle")), real_from(s.at("to_angle"))));
        } else {
            throw std::invalid_argument("unknown segment kind " + kind);
        }
    }
    c.basepoint = j.contains("basepoint") ? number_from(j.at("basepoint"))
                                          : (c.segments.empty() ? Complex(0) : c.segments.front().start());
    if (j.contains("winding")) c.winding = j.at("winding").get<std::vector<int>>();
    c.check_continuity(1e-9);
    return c;
}

std::string contour_to_json(const Contour& c) {
    json segs = json::array();
    for (const auto& s : c.segments) segs.push_back(segment_json(s));
    return json{{"segments", segs}, {"basepoint", number(c.basepoint)}, {"winding", c.winding}}.dump(2);
}

ExactRF rf_from_json(const std::string& text) { return rf_from(json::parse(text)); }
std::string rf_to_json(const ExactRF& f) { return rf(f).dump(); }

std::string connection_to_json(const Connection& c) {
    const AlgebraModel& m = *c.model;
    json body = json::object();
    for (const auto& [n, v] : c.body.grades()) {
        json g = json::object();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) g[m.label(n, static_cast<int>(i))] = rf(v[i]);
        if (!g.empty()) body[std::to_string(n)] = g;
    }
    return json{{"model", model_json(m)}, {"twist", rf(c.twist)}, {"body", body}, {"delta", rf(c.body.delta())}}
        .dump(2);
}

Connection connection_from_json(const std::string& text, ModelPtr model) {
    json j = json::parse(text);
    if (!model) model = model_from(j.at("model"));
    RFVector body(model);
    for (const auto& [grade, g] : j.at("body").items()) {
        int n = std::stoi(grade);
        for (const auto& [label, f] : g.items()) body.set(n, model->index_of_label(n, label), rf_from(f));
    }
    if (j.contains("delta")) body.set_delta(rf_from(j.at("delta")));
    body.prune();
    return Connection(model, j.contains("twist") ? rf_from(j.at("twist")) : ExactRF(), std::move(body));
}

std::string quasi_canonical_to_json(const QuasiCanonicalForm& q) {
    json v = json::object();
    const auto& slots = q.model->exponents();
    for (std::size_t i = 0; i < slots.size(); ++i) v[exponent_label(slots[i])] = rf(q.v[i]);
    return json{{"model", model_json(*q.model)}, {"twist", rf(q.twist)}, {"v", v}}.dump(2);
}

std::string integral_to_json(const IntegralResult& r) {
    return json{{"value", number(r.value)},      {"err", r.error},         {"multiplier", number(r.multiplier)},
                {"valid", r.valid},              {"segments", r.segments}, {"panels", r.panels}}
        .dump(2);
}

}  // namespace opers::io
