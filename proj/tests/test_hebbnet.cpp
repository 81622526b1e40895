#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hebblsys/hebbnet.hpp"

using namespace hebblsys;

namespace {

constexpr double kEta = 0.0035;

SensorVector sensor_with(std::initializer_list<int> on) {
  SensorVector s{};
  for (int i : on) s[static_cast<std::size_t>(i)] = 1;
  return s;
}

std::vector<std::uint8_t> state_with(int n, std::initializer_list<int> on) {
  std::vector<std::uint8_t> v(static_cast<std::size_t>(n), 0);
  for (int i : on) v[static_cast<std::size_t>(i)] = 1;
  return v;
}

}  // namespace

TEST(Hebbnet, DeltaExamples) {
  EXPECT_DOUBLE_EQ(hebb_delta(0.0, 1, 1, kEta), 0.0035);
  EXPECT_DOUBLE_EQ(hebb_delta(0.7, 0, 1, kEta), 0.0);
  EXPECT_DOUBLE_EQ(hebb_delta(0.7, 1, 0, kEta), 0.0);
  EXPECT_DOUBLE_EQ(oja_delta(1.0, 1, 1, kEta), 0.0);
  EXPECT_DOUBLE_EQ(oja_delta(0.5, 1, 0, kEta), -0.00175);
  EXPECT_DOUBLE_EQ(oja_delta(0.5, 0, 1, kEta), 0.0);
}

TEST(Hebbnet, SingleHardConnectionFires) {
  Phenotype ph(32);
  ph.set(30, 3, ConnectionClass::Hard, 0.5);
  Network net = build_network(ph);
  EXPECT_EQ(net.fire(sensor_with({3})), (Register{0, 0, 0, 0, 1, 0}));
  EXPECT_EQ(net.fire(sensor_with({})), (Register{0, 0, 0, 0, 0, 0}));
}

TEST(Hebbnet, BelowThresholdStaysSilent) {
  Phenotype ph(32);
  ph.set(30, 3, ConnectionClass::Hard, 0.4);
  ph.set(30, 4, ConnectionClass::Hard, 0.4);
  Network net = build_network(ph);
  EXPECT_EQ(net.fire(sensor_with({3}))[4], 0);
  EXPECT_EQ(net.fire(sensor_with({3, 4}))[4], 1);
  ph.set(30, 5, ConnectionClass::Hard, -0.5);
  Network inhibited = build_network(ph);
  EXPECT_EQ(inhibited.fire(sensor_with({3, 4, 5}))[4], 0);
}

TEST(Hebbnet, HiddenNeuronsReadPreviousState) {
  // sensor 0 -> hidden 26 -> output 31: the output lags the sensor by a step.
  Phenotype ph(32);
  ph.set(26, 0, ConnectionClass::Hard, 1.0);
  ph.set(31, 26, ConnectionClass::Hard, 1.0);
  Network net = build_network(ph);
  EXPECT_EQ(net.fire(sensor_with({0}))[5], 0);
  EXPECT_EQ(net.state()[26], 1);
  EXPECT_EQ(net.fire(sensor_with({}))[5], 1);
  EXPECT_EQ(net.state()[26], 0);
  EXPECT_EQ(net.fire(sensor_with({}))[5], 0);
}

TEST(Hebbnet, SensorsAreClampedEachStep) {
  Phenotype ph(32);
  ph.set(2, 26, ConnectionClass::Hard, 1.0);  // connections into inputs have no effect
  ph.set(26, 26, ConnectionClass::Hard, 1.0);
  Network net = build_network(ph);
  net.fire(sensor_with({}));
  EXPECT_EQ(net.state()[2], 0);
  EXPECT_EQ(net.pre_state()[2], 0);
}

TEST(Hebbnet, LearnStepGating) {
  Phenotype ph(32);
  ph.set(27, 1, ConnectionClass::Soft, 0.0);
  ph.set(28, 1, ConnectionClass::AdultSoft, 0.0);
  ph.set(29, 1, ConnectionClass::Hard, 0.3);
  Network net = build_network(ph);
  const auto pre = state_with(32, {1});
  const auto post = state_with(32, {27, 28, 29});

  net.learn_step(pre, post, LifeStage::Adult);
  EXPECT_EQ(net.weight(27, 1), 0.0);
  EXPECT_DOUBLE_EQ(net.weight(28, 1), kEta);
  EXPECT_DOUBLE_EQ(net.weight(29, 1), 0.3);

  net.learn_step(pre, post, LifeStage::Infancy);
  EXPECT_DOUBLE_EQ(net.weight(27, 1), kEta);
  EXPECT_DOUBLE_EQ(net.weight(29, 1), 0.3);

  // Silent postsynaptic neuron: no change under either rule.
  net.learn_step(pre, state_with(32, {}), LifeStage::Infancy);
  EXPECT_DOUBLE_EQ(net.weight(27, 1), kEta);
}

TEST(Hebbnet, HardWeightsNeverChange) {
  Phenotype ph(64);
  for (int post = 26; post < 64; ++post)
    for (int pre = 0; pre < 64; pre += 3) ph.set(post, pre, ConnectionClass::Hard, (post - pre) % 7 / 10.0);
  Network net = build_network(ph);
  const auto before = net.weights();
  std::vector<std::uint8_t> on(64, 1);
  for (int i = 0; i < 100; ++i) {
    net.learn_step(on, on, LifeStage::Infancy);
    net.learn_step(on, on, LifeStage::Adult);
  }
  EXPECT_EQ(net.weights(), before);
}

TEST(Hebbnet, OjaConvergesToClosedForm) {
  Phenotype ph(32);
  ph.set(27, 0, ConnectionClass::Soft, 0.0);
  Network net = build_network(ph);
  const auto pre = state_with(32, {0});
  const auto post = state_with(32, {27});
  for (int t = 1; t <= 10000; ++t) {
    net.learn_step(pre, post, LifeStage::Infancy);
    const double closed = 1.0 - std::pow(1.0 - kEta, t);
    ASSERT_NEAR(net.weight(27, 0), closed, 1e-9) << "t=" << t;
  }
  EXPECT_NEAR(net.weight(27, 0), 1.0, 1e-3);
}

TEST(Hebbnet, HebbGrowthIsClamped) {
  Phenotype ph(32);
  ph.set(27, 0, ConnectionClass::AdultSoft, 0.0);
  Network net = build_network(ph, NetworkConfig{kEta, LearningRule::Hebb, 0.5});
  const auto pre = state_with(32, {0});
  const auto post = state_with(32, {27});
  for (int t = 0; t < 1000; ++t) net.learn_step(pre, post, LifeStage::Adult);
  EXPECT_DOUBLE_EQ(net.weight(27, 0), 1.0);
}

TEST(Hebbnet, LearnUsesTheStepJustFired) {
  // Soft 27 <- 0 plus a hard path that makes 27 fire whenever sensor 0 is on.
  Phenotype ph(32);
  ph.set(27, 0, ConnectionClass::Soft, 0.0);
  ph.set(27, 1, ConnectionClass::Hard, 1.0);
  Network net = build_network(ph);
  net.fire(sensor_with({0, 1}));
  net.learn(LifeStage::Infancy);
  EXPECT_DOUBLE_EQ(net.weight(27, 0), kEta);
  net.fire(sensor_with({1}));
  net.learn(LifeStage::Infancy);
  EXPECT_DOUBLE_EQ(net.weight(27, 0), kEta + oja_delta(kEta, 1, 0, kEta));
}

TEST(Hebbnet, RejectsTooFewNeuronsOrBadEta) {
  EXPECT_THROW(build_network(Phenotype(16)), std::invalid_argument);
  EXPECT_THROW(build_network(Phenotype(32), NetworkConfig{0.0, LearningRule::Oja, 0.5}), std::invalid_argument);
}

TEST(Hebbnet, PhenotypeEqualityIgnoresAbsentConnections) {
  Phenotype a(32), b(32);
  b.weight[b.index(5, 6)] = 0.9;
  EXPECT_EQ(a, b);
  a.set(5, 6, ConnectionClass::Soft, 0.7);
  EXPECT_NE(a, b);
  b.set(5, 6, ConnectionClass::Soft, 0.0);
  EXPECT_EQ(a, b);
}
