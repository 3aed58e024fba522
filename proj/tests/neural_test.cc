// Copyright 2026 The Lexnorm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "lexnorm/neural.h"

#include <cmath>
#include <gtest/gtest.h>

namespace lexnorm::nn {
namespace {

double Sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar LSTM with every weight and bias equal to `k`.
struct ScalarCell {
  double k;
  std::pair<double, double> Step(double x, double h, double c) const {
    const double pre = k * x + k * h + k;
    const double i = Sig(pre), f = Sig(pre), o = Sig(pre), g = std::tanh(pre);
    const double c2 = f * c + i * g;
    return {o * std::tanh(c2), c2};
  }
};

Lstm ConstantLstm(int d, int h, double value) {
  Lstm lstm("cell", d, h);
  lstm.w.value.setConstant(value);
  lstm.u.value.setConstant(value);
  lstm.b.value.setConstant(value);
  return lstm;
}

Vector Scalar(double x) { return Vector::Constant(1, x); }

TEST(LstmTest, HandEvaluatedStep) {
  const Lstm lstm = ConstantLstm(1, 1, 1.0);
  LstmStepCache cache;
  const LstmState out = lstm.Step(Scalar(1.0), lstm.ZeroState(), &cache);
  EXPECT_NEAR(cache.i(0), 0.880797, 1e-6);
  EXPECT_NEAR(cache.f(0), 0.880797, 1e-6);
  EXPECT_NEAR(cache.o(0), 0.880797, 1e-6);
  EXPECT_NEAR(cache.g(0), 0.964028, 1e-6);
  EXPECT_NEAR(out.c(0), 0.849112, 1e-6);
  EXPECT_NEAR(out.h(0), 0.608283, 1e-6);
  const auto [h, c] = ScalarCell{1.0}.Step(1.0, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(out.h(0), h);
  EXPECT_DOUBLE_EQ(out.c(0), c);
}

TEST(LstmTest, ZeroParametersGiveZeroState) {
  const Lstm lstm("cell", 3, 2);
  const LstmState out = lstm.Step(Vector::Constant(3, 0.7), lstm.ZeroState());
  EXPECT_TRUE(out.h.isZero());
  EXPECT_TRUE(out.c.isZero());
}

TEST(LstmTest, ShapeMismatchThrows) {
  const Lstm lstm("cell", 3, 2);
  EXPECT_THROW(lstm.Step(Vector::Zero(2), lstm.ZeroState()), std::invalid_argument);
  EXPECT_THROW(lstm.Step(Vector::Zero(3), {Vector::Zero(3), Vector::Zero(2)}),
               std::invalid_argument);
}

TEST(LstmTest, ForgetBiasSlice) {
  Lstm lstm("cell", 2, 3);
  lstm.SetForgetBias(1.0);
  for (int k = 0; k < 12; ++k) EXPECT_EQ(lstm.b.value(k, 0), (k >= 3 && k < 6) ? 1.0 : 0.0) << k;
}

TEST(LstmTest, HiddenStaysInUnitBox) {
  Rng rng(4);
  Lstm lstm("cell", 3, 4);
  UniformInit(lstm.Parameters(), rng, 3.0);
  std::vector<Vector> xs;
  for (int t = 0; t < 50; ++t) xs.push_back(Vector::Constant(3, rng.Uniform(-20, 20)));
  for (const Vector& h : lstm.Run(xs, false)) EXPECT_LE(h.cwiseAbs().maxCoeff(), 1.0);
}

TEST(BiLstmTest, LengthTwoMatchesScalarRecurrences) {
  BiLstm bi("bi", 1, 1);
  bi.fwd = ConstantLstm(1, 1, 1.0);
  bi.bwd = ConstantLstm(1, 1, 0.5);
  const std::vector<Vector> xs = {Scalar(1.0), Scalar(-2.0)};
  const BiLstmOutput out = bi.Encode(xs);

  const ScalarCell fwd{1.0}, bwd{0.5};
  const auto [f1h, f1c] = fwd.Step(1.0, 0, 0);
  const auto [f2h, f2c] = fwd.Step(-2.0, f1h, f1c);
  const auto [b2h, b2c] = bwd.Step(-2.0, 0, 0);
  const auto [b1h, b1c] = bwd.Step(1.0, b2h, b2c);
  (void)f2c;
  (void)b1c;
  ASSERT_EQ(out.states.size(), 2u);
  EXPECT_DOUBLE_EQ(out.states[0](0), f1h);
  EXPECT_DOUBLE_EQ(out.states[0](1), b1h);
  EXPECT_DOUBLE_EQ(out.states[1](0), f2h);
  EXPECT_DOUBLE_EQ(out.states[1](1), b2h);
  EXPECT_DOUBLE_EQ(out.final(0), f2h);
  EXPECT_DOUBLE_EQ(out.final(1), b1h);
}

TEST(BiLstmTest, SingleStepFinalEqualsState) {
  Rng rng(2);
  BiLstm bi("bi", 2, 3);
  UniformInit(bi.Parameters(), rng);
  const std::vector<Vector> xs = {Vector::Constant(2, 0.3)};
  const BiLstmOutput out = bi.Encode(xs);
  EXPECT_EQ(out.final, out.states[0]);
  EXPECT_EQ(out.final.size(), 6);
}

TEST(BiLstmTest, ZeroParamsAndEmptyInput) {
  const BiLstm bi("bi", 2, 3);
  const std::vector<Vector> xs = {Vector::Ones(2), Vector::Ones(2)};
  EXPECT_TRUE(bi.Encode(xs).final.isZero());
  EXPECT_THROW(bi.Encode({}), std::invalid_argument);
}

TEST(BiLstmTest, BackwardPassesGradCheck) {
  Rng rng(17);
  BiLstm bi("bi", 3, 2);
  UniformInit(bi.Parameters(), rng, 0.5);
  std::vector<Vector> xs;
  for (int t = 0; t < 4; ++t) xs.push_back(Vector::NullaryExpr(3, [&] { return rng.Uniform(-1, 1); }));
  const Vector probe = Vector::LinSpaced(4, -1.0, 1.0);
  const Vector state_probe = Vector::LinSpaced(4, 0.5, -0.5);
  const auto loss = [&] {
    BiLstmTrace trace;
    const BiLstmOutput out = bi.Encode(xs, &trace);
    double value = probe.dot(out.final);
    std::vector<Vector> d_states;
    for (const Vector& s : out.states) {
      value += state_probe.dot(s) * s.sum();
      d_states.push_back(state_probe * s.sum() + Vector::Constant(4, state_probe.dot(s)));
    }
    bi.Backward(trace, d_states, &probe);
    return value;
  };
  const ParameterList params = bi.Parameters();
  EXPECT_LT(GradCheck(loss, params).max_relative_error, 1e-6);
}

TEST(BiLstmTest, Deterministic) {
  Rng a(3), b(3);
  BiLstm x("bi", 2, 2), y("bi", 2, 2);
  UniformInit(x.Parameters(), a);
  UniformInit(y.Parameters(), b);
  const std::vector<Vector> xs = {Vector::Constant(2, 0.1), Vector::Constant(2, -0.4)};
  EXPECT_EQ(x.Encode(xs).final, y.Encode(xs).final);
}

TEST(CosineTest, Examples) {
  const Vector u = (Vector(3) << 1, 2, 3).finished();
  const Vector v = (Vector(3) << 4, 5, 6).finished();
  EXPECT_NEAR(Cosine(u, v), 32.0 / (std::sqrt(14.0) * std::sqrt(77.0)), 1e-15);
  EXPECT_NEAR(Cosine(u, v), 0.974632, 1e-6);
  EXPECT_EQ(Cosine(u, u), 1.0);
  EXPECT_EQ(Cosine(Vector::Unit(2, 0), Vector::Unit(2, 1)), 0.0);
  EXPECT_EQ(Cosine(Vector::Zero(3), u), 0.0);
  EXPECT_THROW(Cosine(u, Vector::Ones(2)), std::invalid_argument);
}

TEST(CosineTest, BoundedAndSymmetric) {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector u = Vector::NullaryExpr(5, [&] { return rng.Uniform(-3, 3); });
    const Vector v = Vector::NullaryExpr(5, [&] { return rng.Uniform(-3, 3); });
    const double c = Cosine(u, v);
    EXPECT_EQ(c, Cosine(v, u));
    EXPECT_LE(std::abs(c), 1.0);
  }
}

TEST(GradCheckTest, Quadratic) {
  Parameter theta("theta", 2, 1);
  theta.value << 1, 2;
  std::vector<Parameter*> params = {&theta};
  const auto report = GradCheck(
      [&] {
        theta.grad += 2 * theta.value;
        return theta.value.squaredNorm();
      },
      params);
  EXPECT_LT(report.max_relative_error, 1e-8);
  EXPECT_EQ(report.entries_checked, 2u);
}

TEST(GradCheckTest, ConstantLoss) {
  Parameter theta("theta", 3, 1);
  std::vector<Parameter*> params = {&theta};
  EXPECT_EQ(GradCheck([] { return 4.0; }, params).max_relative_error, 0.0);
}

TEST(GradCheckTest, DetectsWrongGradient) {
  Parameter theta("theta", 1, 1);
  theta.value(0, 0) = 1.5;
  std::vector<Parameter*> params = {&theta};
  const auto report = GradCheck(
      [&] {
        theta.grad(0, 0) += theta.value(0, 0);  // should be 2x
        return theta.value(0, 0) * theta.value(0, 0);
      },
      params);
  EXPECT_GT(report.max_relative_error, 0.4);
  EXPECT_EQ(report.worst_parameter, "theta");
}

TEST(AdamTest, TwoUnitGradientStepsMatchClosedForm) {
  Parameter theta("theta", 1, 1);
  theta.value(0, 0) = 0.5;
  Adam adam({&theta});
  const AdamOptions o = adam.options();
  double m = 0, v = 0, expected = 0.5;
  for (int t = 1; t <= 2; ++t) {
    theta.grad(0, 0) = 1.0;
    adam.Step();
    m = o.beta1 * m + (1 - o.beta1);
    v = o.beta2 * v + (1 - o.beta2);
    const double m_hat = m / (1 - std::pow(o.beta1, t));
    const double v_hat = v / (1 - std::pow(o.beta2, t));
    expected -= o.learning_rate * m_hat / (std::sqrt(v_hat) + o.epsilon);
  }
  EXPECT_NEAR(theta.value(0, 0), expected, 1e-12);
  EXPECT_NEAR(theta.value(0, 0), 0.5 - 2e-3, 1e-9);
  EXPECT_EQ(adam.step_count(), 2);
}

TEST(AdamTest, FirstStepMagnitudeIsLearningRate) {
  for (double g : {1e-3, -0.5, 40.0}) {
    Parameter theta("theta", 1, 1);
    Adam adam({&theta});
    theta.grad(0, 0) = g;
    adam.Step();
    EXPECT_NEAR(std::abs(theta.value(0, 0)), 1e-3, 1e-7) << g;
    EXPECT_EQ(theta.value(0, 0) < 0, g > 0);
  }
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  Parameter theta("theta", 2, 2);
  theta.value.setConstant(0.25);
  Adam adam({&theta});
  adam.Step();
  EXPECT_TRUE(theta.value.isApproxToConstant(0.25, 0));
  EXPECT_EQ(adam.step_count(), 1);
}

TEST(AdamTest, ShapeMismatchThrows) {
  Parameter theta("theta", 2, 2);
  Adam adam({&theta});
  theta.grad = Matrix::Zero(3, 1);
  EXPECT_THROW(adam.Step(), std::invalid_argument);
}

TEST(ClipGradNormTest, RescalesOnlyAboveThreshold) {
  Parameter a("a", 1, 2), b("b", 1, 1);
  a.grad << 3, 0;
  b.grad << 4;
  std::vector<Parameter*> params = {&a, &b};
  EXPECT_DOUBLE_EQ(ClipGradNorm(params, 10.0), 5.0);
  EXPECT_DOUBLE_EQ(a.grad(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(ClipGradNorm(params, 1.0), 5.0);
  EXPECT_NEAR(std::hypot(a.grad(0, 0), b.grad(0, 0)), 1.0, 1e-15);
}

TEST(UniformInitTest, RangeAndDeterminism) {
  Rng a(1), b(1);
  Parameter x("p", 10, 10), y("p", 10, 10);
  std::vector<Parameter*> px = {&x}, py = {&y};
  UniformInit(px, a);
  UniformInit(py, b);
  EXPECT_EQ(x.value, y.value);
  EXPECT_LE(x.value.cwiseAbs().maxCoeff(), 0.08);
  EXPECT_EQ(Fingerprint(px), Fingerprint(py));
  y.value(3, 3) += 1e-12;
  EXPECT_NE(Fingerprint(px), Fingerprint(py));
}

}  // namespace
}  // namespace lexnorm::nn
