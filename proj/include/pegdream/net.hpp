#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pegdream/rng.hpp"

namespace pegdream::nnet {

enum class Activation { Tanh, Identity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Fully-connected network shape: widths = [in, h1, ..., hk, out], k >= 1.
// Hidden layers carry their own activation tag (tanh default); the output
// layer is always linear.
struct NetSpec {
  std::vector<int> widths;
  std::vector<Activation> hidden_acts;  // size widths.size() - 2

  static NetSpec mlp(std::vector<int> widths);

  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }
  std::size_t layer_count() const { return widths.size() - 1; }
  std::size_t param_count() const;
  void validate() const;  // throws std::invalid_argument

  bool operator==(const NetSpec&) const = default;
};

// Flat parameter vector shaped by a NetSpec. Layer l stores its weight
// matrix (row-major, out x in) followed by its bias vector.
struct ParamSet {
  NetSpec spec;
  std::vector<double> values;

  static ParamSet zeros(NetSpec spec);
  static ParamSet random_init(NetSpec spec, Rng& rng);  // N(0, 1/sqrt(fan_in)) weights, zero bias

  std::size_t size() const { return values.size(); }
  void validate() const;  // length matches spec, all finite
};

// Deterministic forward pass. Throws on input dimension mismatch.
std::vector<double> forward(const ParamSet& params, const std::vector<double>& input);

struct Gradients {
  std::vector<double> params;
  std::vector<double> input;
};

// Exact reverse-mode gradients of the forward map, contracted against
// `upstream` (dLoss/dOutput). Recomputes the forward pass internally.
Gradients backward(const ParamSet& params, const std::vector<double>& input,
                   const std::vector<double>& upstream);

// Adam state for one ParamSet.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int64_t step = 0;

  static AdamState init(std::size_t n) { return AdamState{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// One adaptive-moment update in place. Rejects non-finite gradients.
void adam_step(AdamState& state, ParamSet& params, const std::vector<double>& grad,
               double learning_rate, const AdamConfig& cfg = {});

// Max over sampled coordinates of |analytic - central difference| /
// max(1, |central difference|). `loss` must be a pure function of params.
// max_coords = 0 checks every coordinate. eps must be > 0.
double grad_check(const std::function<double(const ParamSet&)>& loss, const ParamSet& params,
                  const std::vector<double>& analytic_grad, double eps, std::size_t max_coords,
                  Rng& rng);

}  // namespace pegdream::nnet
