/*
 * Copyright 2026 The ldseg authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "ldseg/nn.hpp"

#include <cmath>

#include "ldseg/errors.hpp"

namespace ldseg::nn {

Var ParamStore::create(const std::string& name, int rows, int cols, float init_std, Rng& rng) {
  if (contains(name)) throw ValueError("duplicate parameter name: " + name);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = init_std > 0.0f ? static_cast<float>(rng.normal(0.0, init_std)) : 0.0f;
  Var v = ag::param(std::move(m));
  items_.emplace_back(name, v);
  return v;
}

Var ParamStore::create_const(const std::string& name, int rows, int cols, float value) {
  if (contains(name)) throw ValueError("duplicate parameter name: " + name);
  Var v = ag::param(Mat::Constant(rows, cols, value));
  items_.emplace_back(name, v);
  return v;
}

Var ParamStore::find(const std::string& name) const {
  for (const auto& [n, v] : items_)
    if (n == name) return v;
  throw ValueError("unknown parameter: " + name);
}

bool ParamStore::contains(const std::string& name) const {
  for (const auto& [n, v] : items_)
    if (n == name) return true;
  return false;
}

void ParamStore::zero_grads() {
  for (auto& [n, v] : items_) v->grad.resize(0, 0);
}

std::size_t ParamStore::parameter_count() const {
  std::size_t total = 0;
  for (const auto& [n, v] : items_) total += static_cast<std::size_t>(v->val.size());
  return total;
}

void ParamStore::set_trainable(const std::function<bool(const std::string&)>& predicate) {
  for (auto& [n, v] : items_) v->requires_grad = predicate(n);
}

Linear::Linear(ParamStore& store, const std::string& prefix, int in_dim, int out_dim, Rng& rng,
               const LoraSpec& lora) {
  w = store.create(prefix + ".w", in_dim, out_dim, 0.02f, rng);
  b = store.create_const(prefix + ".b", 1, out_dim, 0.0f);
  if (lora.enabled) {
    if (lora.rank < 1) throw ValueError("lora rank must be >= 1");
    lora_a = store.create(prefix + ".lora_a", in_dim, lora.rank, 0.02f, rng);
    lora_b = store.create_const(prefix + ".lora_b", lora.rank, out_dim, 0.0f);
    lora_scale = lora.alpha / static_cast<float>(lora.rank);
  }
}

Var Linear::operator()(Var x) const {
  Var y = ag::add_rowvec(ag::matmul(x, w), b);
  if (lora_a) {
    Var delta = ag::scale(ag::matmul(ag::matmul(x, lora_a), lora_b), lora_scale);
    y = ag::add(y, delta);
  }
  return y;
}

LayerNorm::LayerNorm(ParamStore& store, const std::string& prefix, int dim) {
  gamma = store.create_const(prefix + ".gamma", 1, dim, 1.0f);
  beta = store.create_const(prefix + ".beta", 1, dim, 0.0f);
}

Var LayerNorm::operator()(Var x) const { return ag::layer_norm(x, gamma, beta, eps); }

Mlp2::Mlp2(ParamStore& store, const std::string& prefix, int in_dim, int hidden_dim, int out_dim, Rng& rng) {
  fc1 = Linear(store, prefix + ".fc1", in_dim, hidden_dim, rng);
  fc2 = Linear(store, prefix + ".fc2", hidden_dim, out_dim, rng);
}

Var Mlp2::operator()(Var x) const { return fc2(ag::gelu(fc1(x))); }

MultiHeadAttention::MultiHeadAttention(ParamStore& store, const std::string& prefix, int dim_, int heads_,
                                       Rng& rng, const LoraSpec& lora)
    : heads(heads_), dim(dim_) {
  if (dim % heads != 0) throw ValueError("attention dim must be divisible by head count");
  wq = Linear(store, prefix + ".q", dim, dim, rng, lora);
  wk = Linear(store, prefix + ".k", dim, dim, rng, lora);
  wv = Linear(store, prefix + ".v", dim, dim, rng, lora);
  wo = Linear(store, prefix + ".o", dim, dim, rng, lora);
}

Var MultiHeadAttention::operator()(Var q_in, Var kv_in, const Mat* attn_bias) const {
  const int dh = dim / heads;
  const float scl = 1.0f / std::sqrt(static_cast<float>(dh));
  Var q = wq(q_in);
  Var k = wk(kv_in);
  Var v = wv(kv_in);

  std::vector<Var> head_outputs;
  head_outputs.reserve(static_cast<std::size_t>(heads));
  for (int h = 0; h < heads; ++h) {
    Var qh = ag::cols(q, h * dh, dh);
    Var kh = ag::cols(k, h * dh, dh);
    Var vh = ag::cols(v, h * dh, dh);
    Var scores = ag::scale(ag::matmul(qh, ag::transpose(kh)), scl);
    if (attn_bias) scores = ag::add(scores, ag::constant(*attn_bias));
    head_outputs.push_back(ag::matmul(ag::softmax_rows(scores), vh));
  }
  return wo(ag::hcat(head_outputs));
}

TransformerBlock::TransformerBlock(ParamStore& store, const std::string& prefix, int dim, int heads, Rng& rng,
                                   const LoraSpec& attn_lora) {
  ln1 = LayerNorm(store, prefix + ".ln1", dim);
  attn = MultiHeadAttention(store, prefix + ".attn", dim, heads, rng, attn_lora);
  ln2 = LayerNorm(store, prefix + ".ln2", dim);
  fc1 = Linear(store, prefix + ".fc1", dim, 4 * dim, rng);
  fc2 = Linear(store, prefix + ".fc2", 4 * dim, dim, rng);
}

Var TransformerBlock::operator()(Var x, const Mat* attn_bias) const {
  Var h = ln1(x);
  x = ag::add(x, attn(h, h, attn_bias));
  x = ag::add(x, fc2(ag::gelu(fc1(ln2(x)))));
  return x;
}

Mat causal_bias(int length) {
  Mat bias = Mat::Zero(length, length);
  for (int i = 0; i < length; ++i)
    for (int j = i + 1; j < length; ++j) bias(i, j) = -1e9f;
  return bias;
}

} // namespace ldseg::nn
