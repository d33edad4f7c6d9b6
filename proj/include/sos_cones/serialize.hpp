#pragma once

#include <vector>

#include <json.hpp>

#include "sos_cones/envelope.hpp"
#include "sos_cones/polybasis.hpp"

/// JSON documents for bases, envelope instances and result rows. Doubles are
/// written with round-trip precision, so a basis read back from JSON is
/// bit-identical to the one written.
namespace sos_cones {

using Json = nlohmann::json;

Json matrix_to_json(const MatrixXd& m);  // array of rows
MatrixXd matrix_from_json(const Json& j);
Json vector_to_json(const VectorXd& v);
VectorXd vector_from_json(const Json& j);

/// {n, d, points, P, weights: [{values, cols}], quad}
Json basis_to_json(const BasisContext& basis);
BasisContext basis_from_json(const Json& j);

/// {n, d_r, d, m, p, seed, zero_polys, basis, coeffs, values}
Json instance_to_json(const EnvelopeInstance& inst);
EnvelopeInstance instance_from_json(const Json& j);

/// {n, d_r, m, d, p, seed, formulation, st, iter, time, obj, dims, envelope,
/// detail}
Json result_to_json(const ResultRow& row);
Json results_to_json(const std::vector<ResultRow>& rows);

}  // namespace sos_cones
