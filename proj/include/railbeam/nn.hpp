#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "railbeam/common.hpp"

// Minimal feed-forward Q-network: dense layers with a smooth hidden
// nonlinearity, squared TD loss against a periodically synced target
// copy, and plain SGD. All math runs in double through the kernels
// layer.
namespace railbeam {

enum class Activation : std::uint8_t { Tanh = 0, Relu = 1 };

struct QNetworkParams {
  std::vector<std::size_t> layer_sizes; // input, hidden..., output
  Activation activation = Activation::Tanh;
  std::vector<std::vector<double>> weights; // row-major [out x in] per layer
  std::vector<std::vector<double>> biases;

  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t n_layers() const { return weights.size(); }

  /// Zero-initialized tensors for the given layout.
  static QNetworkParams zeros(std::vector<std::size_t> sizes, Activation act);

  /// Xavier-uniform weights, zero biases, reproducible from the seed.
  static QNetworkParams init(std::vector<std::size_t> sizes, Activation act,
                             std::uint64_t seed);
};

/// Deterministic forward pass. Throws ConfigError on a dimension mismatch.
std::vector<double> forward(const QNetworkParams& p, std::span<const double> in);

struct TdWorkspace;

/// Allocation-free variant for hot loops; the result stays valid until
/// the workspace is reused.
const std::vector<double>& forward_ws(const QNetworkParams& p,
                                      std::span<const double> in,
                                      TdWorkspace& ws);

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static Gradients zeros_like(const QNetworkParams& p);
  void reset();
};

/// One experience tuple. States are the scalar normalized position.
struct Transition {
  double state = 0.0;
  int action = 0; // 0-based output index
  double reward_db = 0.0;
  double next_state = 0.0;
  bool terminal = false;
};

/// Scratch buffers reused across td_loss calls.
struct TdWorkspace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> post;
  std::vector<double> delta;
  std::vector<double> delta_prev;
};

/// Mean squared TD error over the batch with target
/// y = r + discount * max_a' Qhat(s',a') (y = r on terminal transitions),
/// and its gradient with respect to the online parameters.
/// Returns the loss. Throws ConfigError on an empty batch.
double td_loss_grad(const QNetworkParams& p, const QNetworkParams& target,
                    std::span<const Transition> batch, double discount,
                    Gradients& grads, TdWorkspace& ws);

struct TdResult {
  double loss = 0.0;
  Gradients grads;
};

TdResult td_loss(const QNetworkParams& p, const QNetworkParams& target,
                 std::span<const Transition> batch, double discount);

/// w <- w - lr * g. Throws ConfigError on shape mismatch.
void sgd_step(QNetworkParams& p, const Gradients& g, double lr);

/// Deep copy; later updates to the source do not affect the copy.
QNetworkParams sync_target(const QNetworkParams& p);

/// Ring buffer of transitions; sampling draws uniformly with replacement
/// and is reproducible under a seeded generator.
class ReplayBuffer {
public:
  ReplayBuffer(std::size_t capacity, std::size_t batch_size);

  void push(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  /// True once at least one batch worth of samples is stored.
  bool ready() const { return size_ >= batch_size_; }

  template <class Rng>
  void sample(Rng& rng, std::vector<Transition>& out) {
    if (!ready()) throw DomainError("replay buffer has fewer samples than a batch");
    out.resize(batch_size_);
    for (std::size_t i = 0; i < batch_size_; ++i)
      out[i] = data_[uniform_index(rng, size_)];
  }

private:
  std::size_t capacity_;
  std::size_t batch_size_;
  std::size_t size_ = 0;
  std::size_t head_ = 0;
  std::vector<Transition> data_;
};

/// Versioned binary weight file (magic, activation, tag, layer dims,
/// row-major weights then biases per layer). Round-trips bit-exactly.
void save_network(const std::string& path, const QNetworkParams& p,
                  const std::string& tag);

struct LoadedNetwork {
  QNetworkParams params;
  std::string tag;
};

LoadedNetwork load_network(const std::string& path);

} // namespace railbeam
