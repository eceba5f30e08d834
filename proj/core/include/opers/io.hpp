#pragma once

#include "opers/contour.hpp"
#include "opers/integrate.hpp"
#include "opers/miura.hpp"
#include "opers/oper.hpp"

#include <string>

// JSON text in and out. Exact scalars are "p/q" strings, or [re, im] pairs of such strings when complex;
// float scalars are [re, im] number pairs.
namespace opers::io {

std::string read_file(const std::string& path);

// {"type": "A", "rank": 2, "cutoff": 12}
ModelPtr model_from_json(const std::string& text);
std::string model_to_json(const AlgebraModel& model);

// {"model": {...}, "points": [{"z": "0", "weight": {"lambda_dot": [...], "level": "2", "delta": "0"}}],
//  "bethe_roots": [{"w": "1/2", "color": 1}]}. The "model" key may be omitted when a model is supplied.
MiuraData miura_from_json(const std::string& text, ModelPtr model = nullptr);
std::string miura_to_json(const MiuraData& d);

// {"segments": [{"kind": "line", "from": ..., "to": ...},
//               {"kind": "arc", "center": ..., "radius": ..., "from_angle": ..., "to_angle": ...}],
//  "basepoint": ...}
Contour contour_from_json(const std::string& text);
std::string contour_to_json(const Contour& c);

// {"numerator": [ascending coefficients], "poles": [[root, order], ...]} or "denominator" in place of "poles".
ExactRF rf_from_json(const std::string& text);
std::string rf_to_json(const ExactRF& f);

// Body grades map basis labels to rational functions.
std::string connection_to_json(const Connection& c);
Connection connection_from_json(const std::string& text, ModelPtr model = nullptr);
// "v" maps exponent labels ("3", or "3#1" for a repeated exponent) to rational functions.
std::string quasi_canonical_to_json(const QuasiCanonicalForm& q);

std::string integral_to_json(const IntegralResult& r);

}  // namespace opers::io
