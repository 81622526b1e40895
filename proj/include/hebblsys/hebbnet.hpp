#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hebblsys {

enum class ConnectionClass : std::uint8_t { Hard, Soft, AdultSoft };
enum class LearningRule { Hebb, Oja };
enum class LifeStage { Infancy, Adult };

inline constexpr int kSensorBits = 26;
inline constexpr int kOutputBits = 6;
inline constexpr int kMinNeurons = kSensorBits + kOutputBits;

using SensorVector = std::array<std::uint8_t, kSensorBits>;
using Register = std::array<std::uint8_t, kOutputBits>;

/// Decoded network blueprint. Matrices are row-major with row = postsynaptic
/// neuron and column = presynaptic neuron. `weight` and `cls` are only
/// meaningful where `connect` is set.
struct Phenotype {
  int n = 0;
  std::vector<std::uint8_t> connect;
  std::vector<double> weight;
  std::vector<ConnectionClass> cls;

  explicit Phenotype(int neurons = 0)
      : n(neurons),
        connect(static_cast<std::size_t>(neurons) * static_cast<std::size_t>(neurons), 0),
        weight(connect.size(), 0.0),
        cls(connect.size(), ConnectionClass::Hard) {}

  std::size_t index(int post, int pre) const {
    return static_cast<std::size_t>(post) * static_cast<std::size_t>(n) + static_cast<std::size_t>(pre);
  }

  void set(int post, int pre, ConnectionClass c, double w) {
    const auto i = index(post, pre);
    connect[i] = 1;
    cls[i] = c;
    weight[i] = c == ConnectionClass::Hard ? w : 0.0;
  }

  std::size_t connection_count() const {
    return static_cast<std::size_t>(std::count(connect.begin(), connect.end(), std::uint8_t{1}));
  }

  // Weight and class of absent connections are ignored.
  friend bool operator==(const Phenotype& a, const Phenotype& b) {
    if (a.n != b.n || a.connect != b.connect) return false;
    for (std::size_t i = 0; i < a.connect.size(); ++i)
      if (a.connect[i] && (a.weight[i] != b.weight[i] || a.cls[i] != b.cls[i])) return false;
    return true;
  }
};

/// Plain Hebb: eta * V * E.
inline double hebb_delta(double /*w*/, int v, int e, double eta) { return eta * v * e; }

/// Oja: eta * V * (E - V * w).
inline double oja_delta(double w, int v, int e, double eta) { return eta * v * (e - v * w); }

struct NetworkConfig {
  double eta = 0.0035;
  LearningRule rule = LearningRule::Oja;
  double theta = 0.5;
};

/// Synchronous binary threshold network. Neurons 0..25 are input slots
/// clamped to the sensor vector; neurons n-6..n-1 form the output register.
class Network {
 public:
  Network(const Phenotype& phenotype, NetworkConfig config) : n_(phenotype.n), config_(config) {
    if (n_ < kMinNeurons) throw std::invalid_argument("network needs at least 32 neurons, got " + std::to_string(n_));
    if (!(config_.eta > 0.0)) throw std::invalid_argument("learning coefficient must be positive");

    // Synapses are grouped by presynaptic neuron so a step only touches the
    // fan-out of neurons that are on.
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int post = 0; post < n_; ++post)
      for (int pre = 0; pre < n_; ++pre)
        if (phenotype.connect[phenotype.index(post, pre)]) ++offsets_[static_cast<std::size_t>(pre) + 1];
    for (int pre = 0; pre < n_; ++pre) offsets_[pre + 1] += offsets_[pre];
    synapses_.resize(offsets_.back());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (int post = 0; post < n_; ++post) {
      for (int pre = 0; pre < n_; ++pre) {
        const auto i = phenotype.index(post, pre);
        if (!phenotype.connect[i]) continue;
        const ConnectionClass c = phenotype.cls[i];
        const double w = c == ConnectionClass::Hard ? std::clamp(phenotype.weight[i], -1.0, 1.0) : 0.0;
        const std::uint32_t slot = fill[pre]++;
        synapses_[slot] = Synapse{static_cast<std::uint16_t>(post), static_cast<std::uint16_t>(pre), c, w};
        if (c == ConnectionClass::AdultSoft) adult_soft_.push_back(slot);
        if (c == ConnectionClass::Soft) infant_soft_.push_back(slot);
      }
    }
    state_.assign(static_cast<std::size_t>(n_), 0);
    pre_state_ = state_;
    accumulator_.assign(static_cast<std::size_t>(n_), 0.0);
  }

  int neurons() const { return n_; }
  const NetworkConfig& config() const { return config_; }
  std::size_t synapse_count() const { return synapses_.size(); }

  /// Current output vector V.
  const std::vector<std::uint8_t>& state() const { return state_; }
  /// State the most recent step was computed from (sensor already clamped).
  const std::vector<std::uint8_t>& pre_state() const { return pre_state_; }

  /// One synchronous step: clamp inputs, then every other neuron fires iff
  /// its weighted input from the clamped pre-step state reaches theta.
  Register fire(const SensorVector& sensor) {
    std::copy(sensor.begin(), sensor.end(), state_.begin());
    pre_state_ = state_;
    std::fill(accumulator_.begin(), accumulator_.end(), 0.0);
    for (int pre = 0; pre < n_; ++pre) {
      if (!pre_state_[static_cast<std::size_t>(pre)]) continue;
      for (std::uint32_t s = offsets_[pre]; s < offsets_[pre + 1]; ++s) accumulator_[synapses_[s].post] += synapses_[s].weight;
    }
    for (int j = kSensorBits; j < n_; ++j)
      state_[static_cast<std::size_t>(j)] = accumulator_[static_cast<std::size_t>(j)] >= config_.theta ? 1 : 0;
    return output();
  }

  Register output() const {
    Register r{};
    for (int b = 0; b < kOutputBits; ++b) r[static_cast<std::size_t>(b)] = state_[static_cast<std::size_t>(n_ - kOutputBits + b)];
    return r;
  }

  /// Applies the learning rule to every learning connection allowed at
  /// `stage`, with V taken from `post` and E from `pre`. Hard connections
  /// never change; Soft connections learn only in infancy; AdultSoft always.
  void learn_step(std::span<const std::uint8_t> pre, std::span<const std::uint8_t> post, LifeStage stage) {
    if (stage == LifeStage::Infancy) update(infant_soft_, pre, post);
    update(adult_soft_, pre, post);
  }

  /// Learning for the step just taken by fire().
  void learn(LifeStage stage) { learn_step(pre_state_, state_, stage); }

  /// Weight of connection pre -> post, or 0 if absent.
  double weight(int post, int pre) const {
    for (std::uint32_t s = offsets_[pre]; s < offsets_[pre + 1]; ++s)
      if (synapses_[s].post == post) return synapses_[s].weight;
    return 0.0;
  }

  /// All weights in phenotype layout (absent connections read as 0).
  std::vector<double> weights() const {
    std::vector<double> out(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
    for (const Synapse& s : synapses_) out[static_cast<std::size_t>(s.post) * static_cast<std::size_t>(n_) + s.pre] = s.weight;
    return out;
  }

 private:
  struct Synapse {
    std::uint16_t post;
    std::uint16_t pre;
    ConnectionClass cls;
    double weight;
  };

  void update(const std::vector<std::uint32_t>& slots, std::span<const std::uint8_t> pre, std::span<const std::uint8_t> post) {
    for (std::uint32_t slot : slots) {
      Synapse& s = synapses_[slot];
      const int v = post[s.post];
      if (v == 0) continue;  // both rules vanish when the postsynaptic neuron is silent
      const int e = pre[s.pre];
      const double dw = config_.rule == LearningRule::Oja ? oja_delta(s.weight, v, e, config_.eta)
                                                           : hebb_delta(s.weight, v, e, config_.eta);
      s.weight = std::clamp(s.weight + dw, -1.0, 1.0);
    }
  }

  int n_;
  NetworkConfig config_;
  std::vector<std::uint32_t> offsets_;
  std::vector<Synapse> synapses_;
  std::vector<std::uint32_t> infant_soft_;
  std::vector<std::uint32_t> adult_soft_;
  std::vector<std::uint8_t> state_;
  std::vector<std::uint8_t> pre_state_;
  std::vector<double> accumulator_;
};

inline Network build_network(const Phenotype& phenotype, NetworkConfig config = {}) { return Network(phenotype, config); }

}  // namespace hebblsys
