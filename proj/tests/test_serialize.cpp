#include <gtest/gtest.h>

#include "sos_cones/errors.hpp"
#include "sos_cones/serialize.hpp"

namespace {

using namespace sos_cones;

TEST(Serialize, MatrixAndVector) {
  MatrixXd m(2, 3);
  m << 1.0 / 3.0, -2.5e-300, 7, 0.1, 1e300, -0.0;
  const Json j = matrix_to_json(m);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), 2u);
  EXPECT_EQ(matrix_from_json(j), m);
  const VectorXd v = VectorXd::LinSpaced(7, -1.0 / 7.0, 3.0);
  EXPECT_EQ(vector_from_json(vector_to_json(v)), v);
  EXPECT_EQ(matrix_from_json(matrix_to_json(MatrixXd(0, 0))).size(), 0);
}

TEST(Serialize, BasisRoundTripIsBitIdentical) {
  const BasisContext b = BasisContext::build(2, 2, 5);
  const Json j = basis_to_json(b);
  const BasisContext r = basis_from_json(Json::parse(j.dump()));
  EXPECT_EQ(r.n(), b.n());
  EXPECT_EQ(r.d(), b.d());
  EXPECT_EQ(r.points(), b.points());
  EXPECT_EQ(r.p(), b.p());
  EXPECT_EQ(r.quad(), b.quad());
  ASSERT_EQ(r.weights().size(), b.weights().size());
  for (std::size_t k = 0; k < b.weights().size(); ++k) {
    EXPECT_EQ(r.weights()[k].values, b.weights()[k].values);
    EXPECT_EQ(r.weights()[k].cols, b.weights()[k].cols);
    EXPECT_EQ(r.weights()[k].p, b.weights()[k].p);
  }
  EXPECT_EQ(j.at("U").get<Index>(), b.U());
  EXPECT_EQ(j.at("L").get<Index>(), b.L());
}

TEST(Serialize, InstanceRoundTrip) {
  const EnvelopeInstance inst = make_instance(1, 2, 3, 2, 4, 9);
  const EnvelopeInstance r = instance_from_json(Json::parse(instance_to_json(inst).dump()));
  EXPECT_EQ(r.n, inst.n);
  EXPECT_EQ(r.d_r, inst.d_r);
  EXPECT_EQ(r.d, inst.d);
  EXPECT_EQ(r.m, inst.m);
  EXPECT_EQ(r.p, inst.p);
  EXPECT_EQ(r.seed, inst.seed);
  EXPECT_EQ(r.polys.coeffs, inst.polys.coeffs);
  EXPECT_EQ(r.polys.values, inst.polys.values);
  EXPECT_EQ(r.basis->p(), inst.basis->p());
}

TEST(Serialize, ResultRows) {
  ResultRow row;
  row.n = 1;
  row.d_r = 2;
  row.m = 3;
  row.d = 2;
  row.p = 2;
  row.seed = 4;
  row.formulation = "sosl2";
  row.st = "co";
  row.iter = 12;
  row.time = 0.25;
  row.obj = 1.5;
  row.envelope = VectorXd::Ones(3);
  const Json j = result_to_json(row);
  for (const char* key : {"n", "d_r", "m", "d", "p", "seed", "formulation", "st", "iter", "time",
                          "obj", "dims", "envelope"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j.at("st"), "co");
  EXPECT_EQ(j.at("iter"), 12);
  const Json arr = results_to_json({row, row});
  ASSERT_TRUE(arr.is_array());
  EXPECT_EQ(arr.size(), 2u);
}

TEST(Serialize, MalformedInputThrows) {
  Json j = basis_to_json(BasisContext::build(1, 1, 1));
  j.erase("P");
  EXPECT_ANY_THROW(basis_from_json(j));
  EXPECT_ANY_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")));
}

}  // namespace
