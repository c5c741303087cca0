#pragma once

#include <string>

#include "structdae/matfun.hpp"
#include "structdae/models.hpp"

namespace structdae {

// JSON text formats. A matrix function is
//   {"rows": n, "cols": m, "kind": "constant", "data": [[...], ...]}
//   {"rows": n, "cols": m, "kind": "poly", "data": [[[c0, c1, ...], ...], ...]}
//   {"rows": n, "cols": m, "kind": "samples",
//    "data": {"grid": [...], "values": [[row-major], ...], "order": 1|3, "derivatives": [...]}}
// with polynomial coefficients lowest degree first and "derivatives" optional
// (Hermite data). Parse failures raise ErrorCode::Parse naming the line or
// the offending field.

std::string matfun_to_json(const MatrixFunction& f);
MatrixFunction matfun_from_json(const std::string& text);

/// Model record: type, name, interval, E, A, input, state_names, params,
/// seed, and the generating phdae / stokes blocks when present.
std::string model_to_json(const Model& m);
Model model_from_json(const std::string& text);

Model load_model(const std::string& path);
void save_model(const Model& m, const std::string& path);

}  // namespace structdae
