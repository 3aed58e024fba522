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

#ifndef LEXNORM_NEURAL_H_
#define LEXNORM_NEURAL_H_

// Small dense building blocks for the siamese encoders and the normalizer:
// LSTM cells with hand-written backpropagation, a cosine head, Adam and a
// finite-difference gradient checker. Everything is float64.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lexnorm/random.h"

namespace lexnorm::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A named trainable matrix with its gradient accumulator. Vectors are stored
// as n x 1 matrices.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(name)), value(Matrix::Zero(rows, cols)), grad(Matrix::Zero(rows, cols)) {}

  std::string name;
  Matrix value;
  Matrix grad;
};

using ParameterList = std::vector<Parameter*>;

// Uniform in [-scale, scale], drawn in list order.
void UniformInit(std::span<Parameter* const> params, Rng& rng, double scale = 0.08);
void ZeroGrads(std::span<Parameter* const> params);
void ScaleGrads(std::span<Parameter* const> params, double factor);
// Rescales gradients so their global L2 norm is at most max_norm. Returns the
// norm before clipping.
double ClipGradNorm(std::span<Parameter* const> params, double max_norm);

inline double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct LstmState {
  Vector h;
  Vector c;
};

// Activations of one step, kept for backpropagation.
struct LstmStepCache {
  Vector x, h_prev, c_prev;
  Vector i, f, o, g;
  Vector c, tanh_c;
};

// Single-layer LSTM. Gates are stacked in the order input, forget, output,
// candidate: w is 4H x D, u is 4H x H, b is 4H.
class Lstm {
 public:
  Lstm() = default;
  Lstm(const std::string& prefix, int input_dim, int hidden_dim);

  int input_dim() const { return static_cast<int>(w.value.cols()); }
  int hidden_dim() const { return static_cast<int>(u.value.cols()); }

  LstmState ZeroState() const;

  // One recurrence step. Throws std::invalid_argument on shape mismatch.
  LstmState Step(const Vector& x, const LstmState& prev, LstmStepCache* cache = nullptr) const;

  // Backward through one step given gradients w.r.t. the new h and c.
  // Accumulates parameter gradients and returns gradients w.r.t. x and the
  // previous state.
  void StepBackward(const LstmStepCache& cache, const Vector& dh, const Vector& dc, Vector* dx,
                    LstmState* dprev);

  // Runs from the zero state over xs, right to left when `reverse`. Returns
  // the hidden state at every input position (indexed by position, not by
  // step). `trace` receives the caches in step order.
  std::vector<Vector> Run(std::span<const Vector> xs, bool reverse,
                          std::vector<LstmStepCache>* trace = nullptr) const;

  // BPTT for Run. d_hidden is indexed by position; returns dx by position.
  std::vector<Vector> RunBackward(std::span<const LstmStepCache> trace,
                                  std::span<const Vector> d_hidden, bool reverse);

  // Sets the forget-gate slice of the bias.
  void SetForgetBias(double value);

  ParameterList Parameters() { return {&w, &u, &b}; }

  Parameter w;
  Parameter u;
  Parameter b;
};

struct BiLstmOutput {
  // states[t] = [h_fwd[t]; h_bwd[t]]
  std::vector<Vector> states;
  // [h_fwd[last]; h_bwd[first]], the two terminal hidden states.
  Vector final;
};

struct BiLstmTrace {
  std::vector<LstmStepCache> fwd;
  std::vector<LstmStepCache> bwd;
};

class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(const std::string& prefix, int input_dim, int hidden_dim);

  int input_dim() const { return fwd.input_dim(); }
  int hidden_dim() const { return fwd.hidden_dim(); }
  int output_dim() const { return 2 * hidden_dim(); }

  // Throws std::invalid_argument on an empty sequence.
  BiLstmOutput Encode(std::span<const Vector> xs, BiLstmTrace* trace = nullptr) const;

  // Gradients may be given for the per-position states, the final vector, or
  // both (pass an empty span / nullptr to skip). Returns dx by position.
  std::vector<Vector> Backward(const BiLstmTrace& trace, std::span<const Vector> d_states,
                               const Vector* d_final);

  void SetForgetBias(double value) {
    fwd.SetForgetBias(value);
    bwd.SetForgetBias(value);
  }

  ParameterList Parameters();

  Lstm fwd;
  Lstm bwd;
};

// Cosine similarity. Returns 0 when either norm is below 1e-12.
double Cosine(const Vector& u, const Vector& v);

// Cosine and its gradients w.r.t. both arguments (zero in the degenerate case).
double CosineWithGrad(const Vector& u, const Vector& v, Vector* du, Vector* dv);

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam with bias correction. Moments mirror the parameter shapes.
class Adam {
 public:
  explicit Adam(ParameterList params, AdamOptions options = {});

  // Applies one update from the current gradients. Throws
  // std::invalid_argument when a gradient's shape differs from its parameter.
  void Step();

  int64_t step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }

 private:
  ParameterList params_;
  AdamOptions options_;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
  int64_t step_ = 0;
};

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Eigen::Index worst_index = 0;
  size_t entries_checked = 0;
};

// Compares analytic gradients against central differences
// (f(x + eps) - f(x - eps)) / 2 eps for every parameter entry. `loss_fn`
// returns the loss and accumulates gradients into the parameters; grads are
// zeroed before each call. Relative error is |a - n| / max(|a|, |n|, floor);
// raising `floor` compares near-zero entries on an absolute scale instead.
GradCheckReport GradCheck(const std::function<double()>& loss_fn,
                          std::span<Parameter* const> params, double eps = 1e-5,
                          double floor = 1e-8);

// FNV-1a over names, shapes and raw value bytes.
uint64_t Fingerprint(std::span<Parameter* const> params);

}  // namespace lexnorm::nn

#endif  // LEXNORM_NEURAL_H_
