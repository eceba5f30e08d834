#include "opers/contour.hpp"

#include "opers/miura.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opers {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

}  // namespace

Segment Segment::line(Complex a, Complex b) {
    Segment s;
    s.kind = Kind::Line;
    s.from = a;
    s.to = b;
    return s;
}

Segment Segment::arc(Complex center, double radius, double from_angle, double to_angle) {
    if (!(radius > 0)) throw std::invalid_argument("arc radius must be positive");
    Segment s;
    s.kind = Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.from_angle = from_angle;
    s.to_angle = to_angle;
    return s;
}

Complex Segment::point(double t) const {
    if (kind == Kind::Line) return from + (to - from) * t;
    return center + std::polar(radius, from_angle + (to_angle - from_angle) * t);
}

Complex Segment::velocity(double t) const {
    if (kind == Kind::Line) return to - from;
    double sweep = to_angle - from_angle;
    return Complex(0, sweep) * std::polar(radius, from_angle + sweep * t);
}

double Segment::length() const {
    if (kind == Kind::Line) return std::abs(to - from);
    return radius * std::abs(to_angle - from_angle);
}

Segment Segment::reversed() const {
    Segment s = *this;
    std::swap(s.from, s.to);
    std::swap(s.from_angle, s.to_angle);
    return s;
}

double Segment::distance_to(Complex p) const {
    if (kind == Kind::Line) {
        Complex d = to - from;
        double len2 = std::norm(d);
        double t = len2 == 0 ? 0 : std::clamp(((p - from) * std::conj(d)).real() / len2, 0.0, 1.0);
        return std::abs(p - (from + d * t));
    }
    double radial = std::abs(std::abs(p - center) - radius);
    double sweep = std::abs(to_angle - from_angle);
    if (sweep >= kTwoPi || p == center) return radial;
    double lo = std::min(from_angle, to_angle);
    double rel = wrap_angle(std::arg(p - center) - lo);
    if (rel <= sweep) return radial;
    return std::min(std::abs(p - start()), std::abs(p - end()));
}

bool Contour::is_closed(double tol) const {
    if (segments.empty()) return true;
    return std::abs(segments.back().end() - segments.front().start()) <= tol;
}

Contour Contour::reversed() const {
    Contour c;
    c.basepoint = segments.empty() ? basepoint : segments.back().end();
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) c.segments.push_back(it->reversed());
    for (int w : winding) c.winding.push_back(-w);
    return c;
}

void Contour::check_continuity(double tol) const {
    for (std::size_t k = 0; k + 1 < segments.size(); ++k)
        if (std::abs(segments[k].end() - segments[k + 1].start()) > tol)
            throw std::invalid_argument("contour segments are not joined");
    if (!segments.empty() && std::abs(segments.front().start() - basepoint) > tol)
        throw std::invalid_argument("contour does not start at its basepoint");
}

double Contour::distance_to(Complex p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : segments) d = std::min(d, s.distance_to(p));
    return d;
}

Contour Contour::then(const Contour& other) const {
    Contour c = *this;
    c.segments.insert(c.segments.end(), other.segments.begin(), other.segments.end());
    if (c.winding.size() < other.winding.size()) c.winding.resize(other.winding.size(), 0);
    for (std::size_t k = 0; k < other.winding.size(); ++k) c.winding[k] += other.winding[k];
    return c;
}

Contour loop_around(Complex center, double radius, Complex basepoint, int direction,
                    const std::vector<Complex>& marked, int center_index) {
    Complex offset = basepoint - center;
    if (std::abs(offset) <= radius) throw std::invalid_argument("basepoint lies inside the loop");
    double angle = std::arg(offset);
    Complex entry = center + std::polar(radius, angle);
    Contour c;
    c.basepoint = basepoint;
    c.segments = {Segment::line(basepoint, entry),
                  Segment::arc(center, radius, angle, angle + (direction > 0 ? kTwoPi : -kTwoPi)),
                  Segment::line(entry, basepoint)};
    c.winding.assign(marked.size(), 0);
    if (center_index >= 0) c.winding.at(center_index) = direction > 0 ? 1 : -1;
    return c;
}

Contour pochhammer(const std::vector<Complex>& marked, int i, int j, double radius, Complex basepoint) {
    const Complex zi = marked.at(i), zj = marked.at(j);
    const double dist = std::abs(zi - zj);
    if (i == j || dist == 0) throw std::invalid_argument("Pochhammer contour needs two distinct points");
    if (!(radius > 0) || radius >= dist / 2) throw std::invalid_argument("Pochhammer radius too large");
    const double di = std::abs(basepoint - zi), dj = std::abs(basepoint - zj);
    if (std::abs(di + dj - dist) > 1e-9 * (1 + dist) || di <= radius || dj <= radius)
        throw std::invalid_argument("Pochhammer basepoint must lie between the two circles");
    Contour c = loop_around(zj, radius, basepoint, +1, marked, j)
                    .then(loop_around(zi, radius, basepoint, +1, marked, i))
                    .then(loop_around(zj, radius, basepoint, -1, marked, j))
                    .then(loop_around(zi, radius, basepoint, -1, marked, i));
    const double clearance = default_clearance(marked);
    for (std::size_t k = 0; k < marked.size(); ++k) {
        if (static_cast<int>(k) == i || static_cast<int>(k) == j) continue;
        if (std::abs(marked[k] - zi) <= radius || std::abs(marked[k] - zj) <= radius ||
            c.distance_to(marked[k]) < clearance)
            throw std::invalid_argument("Pochhammer contour would enclose or touch another marked point");
    }
    return c;
}

Contour pochhammer_for(const MiuraData& d, int i, int j, double shrink) {
    std::vector<Complex> marked;
    for (const auto& p : d.points) marked.push_back(p.z.to_complex());
    const Complex zi = marked.at(i), zj = marked.at(j);
    double reach = std::abs(zi - zj);
    const Segment chord = Segment::line(zi, zj);
    for (const auto& s : d.singular_points()) {
        Complex p = s.to_complex();
        if (p == zi || p == zj) continue;
        reach = std::min({reach, std::abs(p - zi), std::abs(p - zj), 2 * chord.distance_to(p)});
    }
    Contour c = pochhammer(marked, i, j, shrink * reach, (zi + zj) / 2.0);
    BranchOptions opts;
    for (const auto& r : d.roots) opts.avoid.push_back(r.w.to_complex());
    branch_track(marked, std::vector<Complex>(marked.size()), c, opts);
    return c;
}

double default_clearance(const std::vector<Complex>& points) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b) d = std::min(d, std::abs(points[a] - points[b]));
    return std::isfinite(d) ? 1e-3 * d : 1e-3;
}

std::vector<int> winding_numbers(const Contour& c, const std::vector<Complex>& points) {
    BranchTrack t = branch_track(points, std::vector<Complex>(points.size()), c);
    std::vector<int> out;
    for (double w : t.windings) out.push_back(static_cast<int>(std::lround(w)));
    return out;
}

BranchTrack branch_track(const std::vector<Complex>& points, const std::vector<Complex>& exponents,
                         const Contour& c, const BranchOptions& opts) {
    if (points.size() != exponents.size()) throw std::invalid_argument("one exponent per point is required");
    c.check_continuity(1e-9);
    std::vector<Complex> cleared = points;
    cleared.insert(cleared.end(), opts.avoid.begin(), opts.avoid.end());
    const double clearance = opts.clearance >= 0 ? opts.clearance : default_clearance(cleared);
    for (const auto& s : c.segments)
        for (const auto& p : cleared)
            if (s.distance_to(p) < clearance) throw std::runtime_error("contour violates the clearance of a singular point");

    const std::size_t n = points.size();
    auto total = [&](const std::vector<Complex>& logs) {
        Complex v(0);
        for (std::size_t i = 0; i < n; ++i) v += exponents[i] * logs[i];
        return v;
    };

    BranchTrack track;
    Complex z0 = c.segments.empty() ? c.basepoint : c.segments.front().start();
    std::vector<Complex> logs(n);
    for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(z0 - points[i]);
    track.samples.push_back({0, 0.0, z0, logs, total(logs)});

    auto step_ok = [&](Complex za, Complex zb) {
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(std::log((zb - points[i]) / (za - points[i]))) >= opts.max_step_angle) return false;
        return true;
    };

    for (std::size_t s = 0; s < c.segments.size(); ++s) {
        const Segment& seg = c.segments[s];
        // stack of pending right endpoints, processed left to right
        std::vector<double> pending;
        for (int k = opts.min_steps_per_segment; k >= 1; --k) pending.push_back(double(k) / opts.min_steps_per_segment);
        double ta = 0;
        Complex za = seg.point(0);
        while (!pending.empty()) {
            double tb = pending.back();
            Complex zb = seg.point(tb), zm = seg.point((ta + tb) / 2);
            if (!step_ok(za, zb) || !step_ok(za, zm)) {
                if (tb - ta < 1e-12) throw std::runtime_error("branch tracking failed to resolve a step");
                pending.push_back((ta + tb) / 2);
                continue;
            }
            pending.pop_back();
            for (std::size_t i = 0; i < n; ++i) logs[i] += std::log((zb - points[i]) / (za - points[i]));
            track.samples.push_back({static_cast<int>(s), tb, zb, logs, total(logs)});
            ta = tb;
            za = zb;
        }
    }
    const auto& first = track.samples.front();
    const auto& last = track.samples.back();
    track.discrepancy = last.value - first.value;
    for (std::size_t i = 0; i < n; ++i) track.windings.push_back((last.logs[i] - first.logs[i]).imag() / kTwoPi);
    return track;
}

BranchTrack branch_track(const MiuraData& d, const GaussRat& s, const Contour& c, BranchOptions opts) {
    std::vector<Complex> points, exponents;
    for (const auto& p : d.points) {
        points.push_back(p.z.to_complex());
        exponents.push_back((s * p.weight.level).to_complex());
    }
    for (const auto& r : d.roots) opts.avoid.push_back(r.w.to_complex());
    if (opts.clearance < 0) {
        std::vector<Complex> all = points;
        all.insert(all.end(), opts.avoid.begin(), opts.avoid.end());
        opts.clearance = default_clearance(all);
    }
    return branch_track(points, exponents, c, opts);
}

ClosureResult closure_check(const BranchTrack& track) {
    Complex m = std::exp(track.discrepancy);
    return {std::abs(m - Complex(1)) < 1e-9, m};
}

ClosureResult closure_check(const MiuraData& d, const GaussRat& s, const Contour& c) {
    return closure_check(branch_track(d, s, c));
}

}  // namespace opers
