#include "sos_cones/serialize.hpp"

#include "sos_cones/errors.hpp"

namespace sos_cones {

Json matrix_to_json(const MatrixXd& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ShapeMismatch("matrix JSON must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols) throw ShapeMismatch("ragged matrix JSON");
    for (Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Json vector_to_json(const VectorXd& v) {
  return Json(std::vector<double>(v.data(), v.data() + v.size()));
}

VectorXd vector_from_json(const Json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
}

Json basis_to_json(const BasisContext& basis) {
  Json weights = Json::array();
  for (const auto& w : basis.weights())
    weights.push_back({{"values", vector_to_json(w.values)}, {"cols", w.cols}});
  return {{"n", basis.n()},
          {"d", basis.d()},
          {"L", basis.L()},
          {"U", basis.U()},
          {"points", matrix_to_json(basis.points())},
          {"P", matrix_to_json(basis.p())},
          {"weights", std::move(weights)},
          {"quad", vector_to_json(basis.quad())}};
}

BasisContext basis_from_json(const Json& j) {
  try {
    std::vector<WeightRecord> weights;
    for (const auto& w : j.at("weights")) {
      WeightRecord rec;
      rec.values = vector_from_json(w.at("values"));
      rec.cols = w.at("cols").get<Index>();
      weights.push_back(std::move(rec));
    }
    return BasisContext::custom(j.at("n").get<int>(), j.at("d").get<int>(),
                                matrix_from_json(j.at("points")), matrix_from_json(j.at("P")),
                                std::move(weights), vector_from_json(j.at("quad")));
  } catch (const Json::exception& e) {
    throw ShapeMismatch(std::string("malformed basis JSON: ") + e.what());
  }
}

Json instance_to_json(const EnvelopeInstance& inst) {
  return {{"n", inst.n},
          {"d_r", inst.d_r},
          {"d", inst.d},
          {"m", inst.m},
          {"p", inst.p},
          {"seed", inst.seed},
          {"zero_polys", inst.zero_polys},
          {"basis", basis_to_json(*inst.basis)},
          {"coeffs", matrix_to_json(inst.polys.coeffs)},
          {"values", matrix_to_json(inst.polys.values)}};
}

EnvelopeInstance instance_from_json(const Json& j) {
  try {
    EnvelopeInstance inst;
    inst.n = j.at("n").get<int>();
    inst.d_r = j.at("d_r").get<int>();
    inst.d = j.at("d").get<int>();
    inst.m = j.at("m").get<Index>();
    inst.p = j.at("p").get<int>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.zero_polys = j.value("zero_polys", false);
    inst.basis = std::make_shared<const BasisContext>(basis_from_json(j.at("basis")));
    inst.polys.coeffs = matrix_from_json(j.at("coeffs"));
    inst.polys.values = matrix_from_json(j.at("values"));
    if (inst.polys.values.rows() != inst.U() || inst.polys.values.cols() != inst.m - 1)
      throw ShapeMismatch("instance JSON: values must be U x (m - 1)");
    return inst;
  } catch (const Json::exception& e) {
    throw ShapeMismatch(std::string("malformed instance JSON: ") + e.what());
  }
}

Json result_to_json(const ResultRow& row) {
  const auto& d = row.dims;
  return {{"n", row.n},
          {"d_r", row.d_r},
          {"m", row.m},
          {"d", row.d},
          {"p", row.p},
          {"seed", row.seed},
          {"formulation", row.formulation},
          {"st", row.st},
          {"iter", row.iter},
          {"time", row.time},
          {"obj", row.obj},
          {"dims",
           {{"cone_dim", d.cone_dim},
            {"num_cones", d.num_cones},
            {"equalities", d.equalities},
            {"aux_equalities", d.aux_equalities},
            {"aux_variables", d.aux_variables},
            {"nu", d.nu}}},
          {"envelope", vector_to_json(row.envelope)},
          {"detail", row.detail}};
}

Json results_to_json(const std::vector<ResultRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(result_to_json(r));
  return out;
}

}  // namespace sos_cones
