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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace lexnorm::nn {
namespace {

void RequireSize(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected size " + std::to_string(n) +
                                ", got " + std::to_string(v.size()));
  }
}

}  // namespace

void UniformInit(std::span<Parameter* const> params, Rng& rng, double scale) {
  for (Parameter* p : params) {
    // Column-major fill; the order is part of the seed contract.
    for (Eigen::Index k = 0; k < p->value.size(); ++k) {
      p->value.data()[k] = rng.Uniform(-scale, scale);
    }
  }
}

void ZeroGrads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->grad.setZero();
}

void ScaleGrads(std::span<Parameter* const> params, double factor) {
  for (Parameter* p : params) p->grad *= factor;
}

double ClipGradNorm(std::span<Parameter* const> params, double max_norm) {
  double sq = 0.0;
  for (Parameter* p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) ScaleGrads(params, max_norm / norm);
  return norm;
}

Lstm::Lstm(const std::string& prefix, int input_dim, int hidden_dim)
    : w(prefix + ".w", 4 * hidden_dim, input_dim),
      u(prefix + ".u", 4 * hidden_dim, hidden_dim),
      b(prefix + ".b", 4 * hidden_dim, 1) {
  if (input_dim <= 0 || hidden_dim <= 0) {
    throw std::invalid_argument("Lstm: dimensions must be positive");
  }
}

LstmState Lstm::ZeroState() const {
  return {Vector::Zero(hidden_dim()), Vector::Zero(hidden_dim())};
}

LstmState Lstm::Step(const Vector& x, const LstmState& prev, LstmStepCache* cache) const {
  const Eigen::Index h = hidden_dim();
  RequireSize(x, input_dim(), "Lstm::Step input");
  RequireSize(prev.h, h, "Lstm::Step hidden");
  RequireSize(prev.c, h, "Lstm::Step cell");

  const Vector z = w.value * x + u.value * prev.h + b.value.col(0);
  Vector i = z.segment(0, h).unaryExpr(&Sigmoid);
  Vector f = z.segment(h, h).unaryExpr(&Sigmoid);
  Vector o = z.segment(2 * h, h).unaryExpr(&Sigmoid);
  Vector g = z.segment(3 * h, h).array().tanh();
  Vector c = f.cwiseProduct(prev.c) + i.cwiseProduct(g);
  Vector tanh_c = c.array().tanh();
  LstmState next{o.cwiseProduct(tanh_c), c};
  if (cache != nullptr) {
    cache->x = x;
    cache->h_prev = prev.h;
    cache->c_prev = prev.c;
    cache->i = std::move(i);
    cache->f = std::move(f);
    cache->o = std::move(o);
    cache->g = std::move(g);
    cache->c = std::move(c);
    cache->tanh_c = std::move(tanh_c);
  }
  return next;
}

void Lstm::StepBackward(const LstmStepCache& cache, const Vector& dh, const Vector& dc_in,
                        Vector* dx, LstmState* dprev) {
  const Eigen::Index h = hidden_dim();
  const auto one = Vector::Ones(h).array();
  const Vector d_o = dh.cwiseProduct(cache.tanh_c);
  const Vector dc =
      dc_in + (dh.array() * cache.o.array() * (one - cache.tanh_c.array().square())).matrix();
  Vector dz(4 * h);
  dz.segment(0, h) = (dc.array() * cache.g.array() * cache.i.array() * (one - cache.i.array()));
  dz.segment(h, h) =
      (dc.array() * cache.c_prev.array() * cache.f.array() * (one - cache.f.array()));
  dz.segment(2 * h, h) = (d_o.array() * cache.o.array() * (one - cache.o.array()));
  dz.segment(3 * h, h) = (dc.array() * cache.i.array() * (one - cache.g.array().square()));

  w.grad.noalias() += dz * cache.x.transpose();
  u.grad.noalias() += dz * cache.h_prev.transpose();
  b.grad.col(0) += dz;
  if (dx != nullptr) *dx = w.value.transpose() * dz;
  if (dprev != nullptr) {
    dprev->h = u.value.transpose() * dz;
    dprev->c = dc.cwiseProduct(cache.f);
  }
}

std::vector<Vector> Lstm::Run(std::span<const Vector> xs, bool reverse,
                              std::vector<LstmStepCache>* trace) const {
  const size_t n = xs.size();
  std::vector<Vector> hidden(n);
  if (trace != nullptr) trace->assign(n, {});
  LstmState state = ZeroState();
  for (size_t k = 0; k < n; ++k) {
    const size_t pos = reverse ? n - 1 - k : k;
    state = Step(xs[pos], state, trace != nullptr ? &(*trace)[k] : nullptr);
    hidden[pos] = state.h;
  }
  return hidden;
}

std::vector<Vector> Lstm::RunBackward(std::span<const LstmStepCache> trace,
                                      std::span<const Vector> d_hidden, bool reverse) {
  const size_t n = trace.size();
  if (d_hidden.size() != n) throw std::invalid_argument("Lstm::RunBackward: length mismatch");
  std::vector<Vector> dxs(n);
  LstmState carry = ZeroState();
  for (size_t k = n; k-- > 0;) {
    const size_t pos = reverse ? n - 1 - k : k;
    const Vector dh = d_hidden[pos] + carry.h;
    LstmState dprev;
    StepBackward(trace[k], dh, carry.c, &dxs[pos], &dprev);
    carry = std::move(dprev);
  }
  return dxs;
}

void Lstm::SetForgetBias(double value) {
  const Eigen::Index h = hidden_dim();
  b.value.block(h, 0, h, 1).setConstant(value);
}

BiLstm::BiLstm(const std::string& prefix, int input_dim, int hidden_dim)
    : fwd(prefix + ".fwd", input_dim, hidden_dim), bwd(prefix + ".bwd", input_dim, hidden_dim) {}

BiLstmOutput BiLstm::Encode(std::span<const Vector> xs, BiLstmTrace* trace) const {
  if (xs.empty()) throw std::invalid_argument("BiLstm::Encode: empty sequence");
  const auto forward = fwd.Run(xs, false, trace != nullptr ? &trace->fwd : nullptr);
  const auto backward = bwd.Run(xs, true, trace != nullptr ? &trace->bwd : nullptr);
  const Eigen::Index h = hidden_dim();
  BiLstmOutput out;
  out.states.reserve(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) {
    Vector s(2 * h);
    s << forward[t], backward[t];
    out.states.push_back(std::move(s));
  }
  out.final.resize(2 * h);
  out.final << forward.back(), backward.front();
  return out;
}

std::vector<Vector> BiLstm::Backward(const BiLstmTrace& trace, std::span<const Vector> d_states,
                                     const Vector* d_final) {
  const size_t n = trace.fwd.size();
  const Eigen::Index h = hidden_dim();
  std::vector<Vector> d_fwd(n, Vector::Zero(h));
  std::vector<Vector> d_bwd(n, Vector::Zero(h));
  if (!d_states.empty()) {
    if (d_states.size() != n) throw std::invalid_argument("BiLstm::Backward: length mismatch");
    for (size_t t = 0; t < n; ++t) {
      d_fwd[t] += d_states[t].head(h);
      d_bwd[t] += d_states[t].tail(h);
    }
  }
  if (d_final != nullptr) {
    d_fwd[n - 1] += d_final->head(h);
    d_bwd[0] += d_final->tail(h);
  }
  auto dx = fwd.RunBackward(trace.fwd, d_fwd, false);
  const auto dx_bwd = bwd.RunBackward(trace.bwd, d_bwd, true);
  for (size_t t = 0; t < n; ++t) dx[t] += dx_bwd[t];
  return dx;
}

ParameterList BiLstm::Parameters() {
  ParameterList out = fwd.Parameters();
  for (Parameter* p : bwd.Parameters()) out.push_back(p);
  return out;
}

namespace {
constexpr double kMinNorm = 1e-12;
}  // namespace

double Cosine(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw std::invalid_argument("Cosine: dimension mismatch");
  if (u.size() == 0) throw std::invalid_argument("Cosine: empty vectors");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu < kMinNorm || nv < kMinNorm) return 0.0;
  if (u == v) return 1.0;
  return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

double CosineWithGrad(const Vector& u, const Vector& v, Vector* du, Vector* dv) {
  if (u.size() != v.size()) throw std::invalid_argument("Cosine: dimension mismatch");
  if (u.size() == 0) throw std::invalid_argument("Cosine: empty vectors");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu < kMinNorm || nv < kMinNorm) {
    if (du != nullptr) *du = Vector::Zero(u.size());
    if (dv != nullptr) *dv = Vector::Zero(v.size());
    return 0.0;
  }
  // Unclamped on purpose: the gradient has to match this exact expression.
  const double cos = u.dot(v) / (nu * nv);
  if (du != nullptr) *du = v / (nu * nv) - cos * u / (nu * nu);
  if (dv != nullptr) *dv = u / (nu * nv) - cos * v / (nv * nv);
  return cos;
}

Adam::Adam(ParameterList params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const Parameter* p : params_) {
    first_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    second_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::Step() {
  for (size_t k = 0; k < params_.size(); ++k) {
    const Parameter& p = *params_[k];
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols() ||
        first_moment_[k].rows() != p.value.rows() || first_moment_[k].cols() != p.value.cols()) {
      throw std::invalid_argument("Adam: shape mismatch for " + p.name);
    }
  }
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    Matrix& m = first_moment_[k];
    Matrix& v = second_moment_[k];
    m = b1 * m + (1.0 - b1) * p.grad;
    v = b2 * v + (1.0 - b2) * p.grad.cwiseProduct(p.grad);
    const auto m_hat = m.array() / correction1;
    const auto v_hat = v.array() / correction2;
    p.value.array() -= options_.learning_rate * m_hat / (v_hat.sqrt() + options_.epsilon);
  }
}

GradCheckReport GradCheck(const std::function<double()>& loss_fn,
                          std::span<Parameter* const> params, double eps,
                          double floor) {
  ZeroGrads(params);
  loss_fn();
  std::vector<Matrix> analytic;
  for (const Parameter* p : params) analytic.push_back(p->grad);

  GradCheckReport report;
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    for (Eigen::Index e = 0; e < p.value.size(); ++e) {
      double& entry = p.value.data()[e];
      const double saved = entry;
      entry = saved + eps;
      ZeroGrads(params);
      const double plus = loss_fn();
      entry = saved - eps;
      ZeroGrads(params);
      const double minus = loss_fn();
      entry = saved;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[k].data()[e];
      const double rel =
          std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      ++report.entries_checked;
      if (rel > report.max_relative_error) {
        report.max_relative_error = rel;
        report.worst_parameter = p.name;
        report.worst_index = e;
      }
    }
  }
  ZeroGrads(params);
  return report;
}

uint64_t Fingerprint(std::span<Parameter* const> params) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](const void* data, size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < size; ++i) {
      hash ^= bytes[i];
      hash *= 0x100000001b3ULL;
    }
  };
  for (const Parameter* p : params) {
    mix(p->name.data(), p->name.size());
    const int64_t shape[2] = {p->value.rows(), p->value.cols()};
    mix(shape, sizeof(shape));
    mix(p->value.data(), sizeof(double) * static_cast<size_t>(p->value.size()));
  }
  return hash;
}

}  // namespace lexnorm::nn
