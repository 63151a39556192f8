#include "pegdream/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pegdream::nnet {

std::string activation_name(Activation a) {
  return a == Activation::Tanh ? "tanh" : "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation: " + name);
}

NetSpec NetSpec::mlp(std::vector<int> widths) {
  NetSpec spec;
  spec.widths = std::move(widths);
  if (spec.widths.size() >= 2) {
    spec.hidden_acts.assign(spec.widths.size() - 2, Activation::Tanh);
  }
  spec.validate();
  return spec;
}

std::size_t NetSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    n += static_cast<std::size_t>(widths[l]) * widths[l + 1] + widths[l + 1];
  }
  return n;
}

void NetSpec::validate() const {
  if (widths.size() < 3) throw std::invalid_argument("NetSpec: need at least one hidden layer");
  for (int w : widths) {
    if (w < 1) throw std::invalid_argument("NetSpec: widths must be >= 1");
  }
  if (hidden_acts.size() != widths.size() - 2) {
    throw std::invalid_argument("NetSpec: one activation tag per hidden layer required");
  }
}

ParamSet ParamSet::zeros(NetSpec spec) {
  spec.validate();
  std::size_t n = spec.param_count();
  return ParamSet{std::move(spec), std::vector<double>(n, 0.0)};
}

ParamSet ParamSet::random_init(NetSpec spec, Rng& rng) {
  ParamSet p = zeros(std::move(spec));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < p.spec.widths.size(); ++l) {
    const int fan_in = p.spec.widths[l];
    const int fan_out = p.spec.widths[l + 1];
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int i = 0; i < fan_out * fan_in; ++i) p.values[off + i] = scale * rng.normal();
    off += static_cast<std::size_t>(fan_out) * fan_in + fan_out;  // biases stay zero
  }
  return p;
}

void ParamSet::validate() const {
  spec.validate();
  if (values.size() != spec.param_count()) throw std::invalid_argument("ParamSet: length does not match spec");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("ParamSet: non-finite entry");
  }
}

namespace {

struct Trace {
  // post[l] = activations entering layer l (post[0] = input); pre = affine outputs.
  std::vector<std::vector<double>> post;
  std::vector<std::vector<double>> pre;
};

Activation layer_activation(const NetSpec& spec, std::size_t layer) {
  return layer + 2 == spec.widths.size() ? Activation::Identity : spec.hidden_acts[layer];
}

Trace run_forward(const ParamSet& params, const std::vector<double>& input) {
  const NetSpec& spec = params.spec;
  if (static_cast<int>(input.size()) != spec.input_dim()) {
    throw std::invalid_argument("forward: input dimension mismatch");
  }
  Trace tr;
  tr.post.push_back(input);
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < spec.widths.size(); ++l) {
    const int in_w = spec.widths[l];
    const int out_w = spec.widths[l + 1];
    const double* w = params.values.data() + off;
    const double* b = w + static_cast<std::size_t>(out_w) * in_w;
    const std::vector<double>& x = tr.post.back();
    std::vector<double> z(out_w);
    for (int i = 0; i < out_w; ++i) {
      double acc = b[i];
      const double* row = w + static_cast<std::size_t>(i) * in_w;
      for (int j = 0; j < in_w; ++j) acc += row[j] * x[j];
      z[i] = acc;
    }
    tr.pre.push_back(z);
    if (layer_activation(spec, l) == Activation::Tanh) {
      for (auto& v : z) v = std::tanh(v);
    }
    tr.post.push_back(std::move(z));
    off += static_cast<std::size_t>(out_w) * in_w + out_w;
  }
  return tr;
}

}  // namespace

std::vector<double> forward(const ParamSet& params, const std::vector<double>& input) {
  return run_forward(params, input).post.back();
}

Gradients backward(const ParamSet& params, const std::vector<double>& input,
                   const std::vector<double>& upstream) {
  const NetSpec& spec = params.spec;
  if (static_cast<int>(upstream.size()) != spec.output_dim()) {
    throw std::invalid_argument("backward: upstream dimension mismatch");
  }
  Trace tr = run_forward(params, input);

  Gradients g;
  g.params.assign(params.values.size(), 0.0);

  // Per-layer parameter offsets.
  std::vector<std::size_t> offsets(spec.layer_count());
  std::size_t off = 0;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    offsets[l] = off;
    off += static_cast<std::size_t>(spec.widths[l]) * spec.widths[l + 1] + spec.widths[l + 1];
  }

  std::vector<double> delta = upstream;  // dLoss/d post-activation of current layer
  for (std::size_t li = spec.layer_count(); li-- > 0;) {
    const int in_w = spec.widths[li];
    const int out_w = spec.widths[li + 1];
    if (layer_activation(spec, li) == Activation::Tanh) {
      for (int i = 0; i < out_w; ++i) {
        const double t = tr.post[li + 1][i];
        delta[i] *= 1.0 - t * t;
      }
    }
    const std::vector<double>& x = tr.post[li];
    double* wg = g.params.data() + offsets[li];
    double* bg = wg + static_cast<std::size_t>(out_w) * in_w;
    for (int i = 0; i < out_w; ++i) {
      const double d = delta[i];
      double* row = wg + static_cast<std::size_t>(i) * in_w;
      for (int j = 0; j < in_w; ++j) row[j] += d * x[j];
      bg[i] += d;
    }
    std::vector<double> prev(in_w, 0.0);
    const double* w = params.values.data() + offsets[li];
    for (int i = 0; i < out_w; ++i) {
      const double d = delta[i];
      const double* row = w + static_cast<std::size_t>(i) * in_w;
      for (int j = 0; j < in_w; ++j) prev[j] += d * row[j];
    }
    delta = std::move(prev);
  }
  g.input = std::move(delta);
  return g;
}

void adam_step(AdamState& state, ParamSet& params, const std::vector<double>& grad,
               double learning_rate, const AdamConfig& cfg) {
  if (grad.size() != params.values.size() || state.m.size() != grad.size() ||
      state.v.size() != grad.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  for (double gv : grad) {
    if (!std::isfinite(gv)) throw std::invalid_argument("adam_step: non-finite gradient");
  }
  state.step += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < grad.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params.values[i] -= learning_rate * mhat / (std::sqrt(vhat) + cfg.eps);
  }
}

double grad_check(const std::function<double(const ParamSet&)>& loss, const ParamSet& params,
                  const std::vector<double>& analytic_grad, double eps, std::size_t max_coords,
                  Rng& rng) {
  if (eps <= 0.0) throw std::invalid_argument("grad_check: eps must be > 0");
  if (analytic_grad.size() != params.values.size()) {
    throw std::invalid_argument("grad_check: gradient length mismatch");
  }
  std::vector<std::size_t> coords;
  const std::size_t n = params.values.size();
  if (max_coords == 0 || max_coords >= n) {
    coords.resize(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = i;
  } else {
    coords.reserve(max_coords);
    for (std::size_t i = 0; i < max_coords; ++i) coords.push_back(rng.uniform_int(n));
  }
  ParamSet probe = params;
  double worst = 0.0;
  for (std::size_t i : coords) {
    const double saved = probe.values[i];
    probe.values[i] = saved + eps;
    const double hi = loss(probe);
    probe.values[i] = saved - eps;
    const double lo = loss(probe);
    probe.values[i] = saved;
    const double fd = (hi - lo) / (2.0 * eps);
    const double rel = std::abs(analytic_grad[i] - fd) / std::max(1.0, std::abs(fd));
    worst = std::max(worst, rel);
  }
  return worst;
}

}  // namespace pegdream::nnet
