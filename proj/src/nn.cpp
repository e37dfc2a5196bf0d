#include "railbeam/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "railbeam/kernels.hpp"

namespace railbeam {

namespace {

double activate(double z, Activation a) {
  return a == Activation::Tanh ? std::tanh(z) : std::max(z, 0.0);
}

// Derivative expressed through the post-activation value.
double activate_deriv(double post, double pre, Activation a) {
  return a == Activation::Tanh ? 1.0 - post * post : (pre > 0.0 ? 1.0 : 0.0);
}

void check_layout(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) throw ConfigError("network needs at least two layers");
  for (std::size_t s : sizes)
    if (s == 0) throw ConfigError("layer sizes must be positive");
}

// Forward pass recording pre/post activations per layer; returns the
// output layer values in ws.post.back().
void forward_cached(const QNetworkParams& p, std::span<const double> in,
                    TdWorkspace& ws) {
  const std::size_t nl = p.n_layers();
  ws.pre.resize(nl);
  ws.post.resize(nl);
  const double* src = in.data();
  std::size_t src_n = in.size();
  for (std::size_t l = 0; l < nl; ++l) {
    const std::size_t rows = p.layer_sizes[l + 1];
    ws.pre[l].resize(rows);
    ws.post[l].resize(rows);
    kernels::gemv(p.weights[l].data(), src, p.biases[l].data(),
                  ws.pre[l].data(), rows, src_n);
    if (l + 1 == nl) {
      ws.post[l] = ws.pre[l]; // linear output layer
    } else {
      for (std::size_t i = 0; i < rows; ++i)
        ws.post[l][i] = activate(ws.pre[l][i], p.activation);
    }
    src = ws.post[l].data();
    src_n = rows;
  }
}

} // namespace

QNetworkParams QNetworkParams::zeros(std::vector<std::size_t> sizes,
                                     Activation act) {
  check_layout(sizes);
  QNetworkParams p;
  p.layer_sizes = std::move(sizes);
  p.activation = act;
  for (std::size_t l = 0; l + 1 < p.layer_sizes.size(); ++l) {
    p.weights.emplace_back(p.layer_sizes[l + 1] * p.layer_sizes[l], 0.0);
    p.biases.emplace_back(p.layer_sizes[l + 1], 0.0);
  }
  return p;
}

QNetworkParams QNetworkParams::init(std::vector<std::size_t> sizes,
                                    Activation act, std::uint64_t seed) {
  QNetworkParams p = zeros(std::move(sizes), act);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < p.n_layers(); ++l) {
    const double fan_in = static_cast<double>(p.layer_sizes[l]);
    const double fan_out = static_cast<double>(p.layer_sizes[l + 1]);
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& w : p.weights[l]) w = (2.0 * uniform01(rng) - 1.0) * limit;
  }
  return p;
}

std::vector<double> forward(const QNetworkParams& p, std::span<const double> in) {
  TdWorkspace ws;
  return forward_ws(p, in, ws);
}

const std::vector<double>& forward_ws(const QNetworkParams& p,
                                      std::span<const double> in,
                                      TdWorkspace& ws) {
  if (in.size() != p.input_dim())
    throw ConfigError("forward: input dim " + std::to_string(in.size()) +
                      " != " + std::to_string(p.input_dim()));
  forward_cached(p, in, ws);
  return ws.post.back();
}

Gradients Gradients::zeros_like(const QNetworkParams& p) {
  Gradients g;
  for (std::size_t l = 0; l < p.n_layers(); ++l) {
    g.weights.emplace_back(p.weights[l].size(), 0.0);
    g.biases.emplace_back(p.biases[l].size(), 0.0);
  }
  return g;
}

void Gradients::reset() {
  for (auto& w : weights) std::fill(w.begin(), w.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

double td_loss_grad(const QNetworkParams& p, const QNetworkParams& target,
                    std::span<const Transition> batch, double discount,
                    Gradients& grads, TdWorkspace& ws) {
  if (batch.empty()) throw ConfigError("td_loss: empty batch");
  if (p.input_dim() != 1)
    throw ConfigError("td_loss expects scalar state features");
  if (grads.weights.size() != p.n_layers())
    throw ConfigError("td_loss: gradient layout mismatch");

  const std::size_t nl = p.n_layers();
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;

  for (const Transition& t : batch) {
    double y = t.reward_db;
    if (!t.terminal) {
      const double s_next[1] = {t.next_state};
      forward_cached(target, s_next, ws);
      const auto& q_next = ws.post.back();
      y += discount * *std::max_element(q_next.begin(), q_next.end());
    }

    const double s[1] = {t.state};
    forward_cached(p, s, ws);
    const double q_a = ws.post.back()[static_cast<std::size_t>(t.action)];
    const double err = q_a - y;
    loss += err * err * inv_m;

    // Output delta is one-hot at the taken action; push it back through
    // the layers accumulating into grads.
    const double g_out = 2.0 * err * inv_m;
    const std::size_t act = static_cast<std::size_t>(t.action);
    for (std::size_t l = nl; l-- > 0;) {
      const std::size_t rows = p.layer_sizes[l + 1];
      const std::size_t cols = p.layer_sizes[l];
      const double* below = l == 0 ? s : ws.post[l - 1].data();
      if (l + 1 == nl) {
        // dL/dW[a,:] = g_out * below, dL/db[a] = g_out
        kernels::axpy(g_out, below, grads.weights[l].data() + act * cols, cols);
        grads.biases[l][act] += g_out;
        if (l == 0) break;
        ws.delta_prev.resize(cols);
        const double* w_row = p.weights[l].data() + act * cols;
        for (std::size_t c = 0; c < cols; ++c)
          ws.delta_prev[c] = g_out * w_row[c] *
                             activate_deriv(ws.post[l - 1][c], ws.pre[l - 1][c],
                                            p.activation);
      } else {
        kernels::ger_acc(ws.delta.data(), below, grads.weights[l].data(), rows,
                         cols);
        kernels::axpy(1.0, ws.delta.data(), grads.biases[l].data(), rows);
        if (l == 0) break;
        ws.delta_prev.resize(cols);
        kernels::gemv_t(p.weights[l].data(), ws.delta.data(),
                        ws.delta_prev.data(), rows, cols);
        for (std::size_t c = 0; c < cols; ++c)
          ws.delta_prev[c] *= activate_deriv(ws.post[l - 1][c], ws.pre[l - 1][c],
                                             p.activation);
      }
      std::swap(ws.delta, ws.delta_prev);
    }
  }
  return loss;
}

TdResult td_loss(const QNetworkParams& p, const QNetworkParams& target,
                 std::span<const Transition> batch, double discount) {
  TdResult r;
  r.grads = Gradients::zeros_like(p);
  TdWorkspace ws;
  r.loss = td_loss_grad(p, target, batch, discount, r.grads, ws);
  return r;
}

void sgd_step(QNetworkParams& p, const Gradients& g, double lr) {
  if (g.weights.size() != p.n_layers())
    throw ConfigError("sgd_step: layer count mismatch");
  for (std::size_t l = 0; l < p.n_layers(); ++l) {
    if (g.weights[l].size() != p.weights[l].size() ||
        g.biases[l].size() != p.biases[l].size())
      throw ConfigError("sgd_step: tensor shape mismatch");
    kernels::axpy(-lr, g.weights[l].data(), p.weights[l].data(),
                  p.weights[l].size());
    kernels::axpy(-lr, g.biases[l].data(), p.biases[l].data(),
                  p.biases[l].size());
  }
}

QNetworkParams sync_target(const QNetworkParams& p) { return p; }

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::size_t batch_size)
    : capacity_(capacity), batch_size_(batch_size) {
  if (capacity == 0 || batch_size == 0 || batch_size > capacity)
    throw ConfigError("replay buffer needs capacity >= batch_size >= 1");
  data_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t) {
  data_[head_] = t;
  head_ = (head_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

namespace {

constexpr char kWeightMagic[8] = {'R', 'B', 'N', 'W', '0', '0', '0', '1'};

template <class T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_raw(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw IoError("weight file truncated");
}

} // namespace

void save_network(const std::string& path, const QNetworkParams& p,
                  const std::string& tag) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kWeightMagic, sizeof(kWeightMagic));
  write_raw(out, static_cast<std::uint8_t>(p.activation));
  const auto tag_len = static_cast<std::uint8_t>(tag.size());
  write_raw(out, tag_len);
  out.write(tag.data(), tag_len);
  const auto nl = static_cast<std::uint32_t>(p.layer_sizes.size());
  write_raw(out, nl);
  for (std::size_t s : p.layer_sizes) write_raw(out, static_cast<std::uint64_t>(s));
  for (std::size_t l = 0; l < p.n_layers(); ++l) {
    out.write(reinterpret_cast<const char*>(p.weights[l].data()),
              static_cast<std::streamsize>(p.weights[l].size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(p.biases[l].data()),
              static_cast<std::streamsize>(p.biases[l].size() * sizeof(double)));
  }
  if (!out) throw IoError("short write: " + path);
}

LoadedNetwork load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weight file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kWeightMagic, sizeof(magic)) != 0)
    throw ConfigError("weight file header/version mismatch: " + path);
  std::uint8_t act_byte = 0, tag_len = 0;
  read_raw(in, act_byte);
  if (act_byte > 1) throw ConfigError("unknown activation id in weight file");
  read_raw(in, tag_len);
  std::string tag(tag_len, '\0');
  in.read(tag.data(), tag_len);
  std::uint32_t nl = 0;
  read_raw(in, nl);
  if (nl < 2 || nl > 64) throw ConfigError("implausible layer count in weight file");
  std::vector<std::size_t> sizes(nl);
  for (auto& s : sizes) {
    std::uint64_t v = 0;
    read_raw(in, v);
    s = static_cast<std::size_t>(v);
  }
  LoadedNetwork ln;
  ln.tag = tag;
  ln.params = QNetworkParams::zeros(std::move(sizes), static_cast<Activation>(act_byte));
  for (std::size_t l = 0; l < ln.params.n_layers(); ++l) {
    in.read(reinterpret_cast<char*>(ln.params.weights[l].data()),
            static_cast<std::streamsize>(ln.params.weights[l].size() * sizeof(double)));
    in.read(reinterpret_cast<char*>(ln.params.biases[l].data()),
            static_cast<std::streamsize>(ln.params.biases[l].size() * sizeof(double)));
    if (!in) throw IoError("weight file truncated: " + path);
  }
  return ln;
}

} // namespace railbeam
