#pragma once

#include "opers/scalar.hpp"

#include <vector>

namespace opers {

struct MiuraData;

// Line segment or circular arc, parameterized over t in [0, 1].
struct Segment {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    Complex from, to;           // line endpoints
    Complex center;             // arc
    double radius = 0;
    double from_angle = 0, to_angle = 0;

    static Segment line(Complex a, Complex b);
    static Segment arc(Complex center, double radius, double from_angle, double to_angle);

    Complex point(double t) const;
    Complex velocity(double t) const;  // dz/dt
    Complex start() const { return point(0); }
    Complex end() const { return point(1); }
    double length() const;
    Segment reversed() const;
    double distance_to(Complex p) const;
};

struct Contour {
    std::vector<Segment> segments;
    Complex basepoint;
    std::vector<int> winding;  // declared winding number around each marked point

    bool is_closed(double tol = 1e-12) const;
    Contour reversed() const;
    // Endpoints of consecutive segments coincide; throws otherwise.
    void check_continuity(double tol = 1e-12) const;
    double distance_to(Complex p) const;
    Contour then(const Contour& other) const;
};

// Closed loop from `basepoint` to a circle of radius r around `center` and back; ccw when direction = +1.
Contour loop_around(Complex center, double radius, Complex basepoint, int direction,
                    const std::vector<Complex>& marked, int center_index);

// Commutator loop: around z_j ccw, around z_i ccw, around z_j cw, around z_i cw.
// The basepoint must lie on the open segment between the two points.
Contour pochhammer(const std::vector<Complex>& marked, int i, int j, double radius, Complex basepoint);

// Pochhammer contour around marked points i and j of the data, based at their midpoint, with radius
// `shrink` times the distance to the nearest other singular point (or to the chord). Throws when no
// clear contour of this shape exists.
Contour pochhammer_for(const MiuraData& d, int i, int j, double shrink = 0.3);

// 1e-3 times the minimum pairwise distance (1e-3 when fewer than two points).
double default_clearance(const std::vector<Complex>& points);

// Numerical winding numbers of a closed contour around each point.
std::vector<int> winding_numbers(const Contour& c, const std::vector<Complex>& points);

struct BranchSample {
    int segment;
    double t;
    Complex z;
    std::vector<Complex> logs;  // continuous log(z - z_i)
    Complex value;              // sum_i e_i log(z - z_i)
};

struct BranchTrack {
    std::vector<BranchSample> samples;
    Complex discrepancy;  // end minus start of the accumulated value
    std::vector<double> windings;
};

struct BranchOptions {
    int min_steps_per_segment = 8;
    double max_step_angle = 0.7853981633974483;  // pi / 4
    double clearance = -1;                       // negative: default_clearance of the points
    std::vector<Complex> avoid;                  // extra points that must be cleared (not punctures)
};

// Continuous determination of sum_i e_i log(z - z_i) along the contour, starting from principal logs.
BranchTrack branch_track(const std::vector<Complex>& points, const std::vector<Complex>& exponents,
                         const Contour& c, const BranchOptions& opts = {});
// P(z)^s with P = prod (z - z_i)^{k_i}; Bethe roots are cleared but are not punctures.
BranchTrack branch_track(const MiuraData& d, const GaussRat& s, const Contour& c, BranchOptions opts = {});

struct ClosureResult {
    bool pass;
    Complex multiplier;
};
ClosureResult closure_check(const BranchTrack& track);
ClosureResult closure_check(const MiuraData& d, const GaussRat& s, const Contour& c);

}  // namespace opers
