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
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ldseg/autograd.hpp"
#include "ldseg/rng.hpp"

namespace ldseg::nn {

using ag::Mat;
using ag::Var;

/// Named parameter registry; creation order fixes RNG consumption and the
/// checkpoint array order.
class ParamStore {
public:
  Var create(const std::string& name, int rows, int cols, float init_std, Rng& rng);
  Var create_const(const std::string& name, int rows, int cols, float value);

  const std::vector<std::pair<std::string, Var>>& items() const { return items_; }
  Var find(const std::string& name) const;
  bool contains(const std::string& name) const;

  void zero_grads();
  std::size_t parameter_count() const;

  /// Flips requires_grad per parameter name; frozen parameters keep their
  /// values but collect no gradient.
  void set_trainable(const std::function<bool(const std::string&)>& predicate);

private:
  std::vector<std::pair<std::string, Var>> items_;
};

struct LoraSpec {
  bool enabled = false;
  int rank = 4;
  float alpha = 8.0f;
};

/// Dense layer; optionally carries a low-rank adapter pair so the base
/// weight can stay frozen while (x A) B * (alpha / rank) learns the update.
struct Linear {
  Linear() = default;
  Linear(ParamStore& store, const std::string& prefix, int in_dim, int out_dim, Rng& rng,
         const LoraSpec& lora = {});

  Var operator()(Var x) const;

  Var w, b;
  Var lora_a, lora_b; // null when the adapter is absent
  float lora_scale = 0.0f;
};

struct LayerNorm {
  LayerNorm() = default;
  LayerNorm(ParamStore& store, const std::string& prefix, int dim);

  Var operator()(Var x) const;

  Var gamma, beta;
  float eps = 1e-5f;
};

/// Two-layer perceptron with GELU between the layers.
struct Mlp2 {
  Mlp2() = default;
  Mlp2(ParamStore& store, const std::string& prefix, int in_dim, int hidden_dim, int out_dim, Rng& rng);

  Var operator()(Var x) const;

  Linear fc1, fc2;
};

struct MultiHeadAttention {
  MultiHeadAttention() = default;
  MultiHeadAttention(ParamStore& store, const std::string& prefix, int dim, int heads, Rng& rng,
                     const LoraSpec& lora = {});

  /// q_in: Lq x C, kv_in: Lk x C; attn_bias (optional) is added to the raw
  /// scores (use -1e9 entries to forbid attention).
  Var operator()(Var q_in, Var kv_in, const Mat* attn_bias = nullptr) const;

  Linear wq, wk, wv, wo;
  int heads = 1;
  int dim = 0;
};

/// Pre-norm transformer block: x += attn(ln1(x)); x += mlp(ln2(x)).
struct TransformerBlock {
  TransformerBlock() = default;
  TransformerBlock(ParamStore& store, const std::string& prefix, int dim, int heads, Rng& rng,
                   const LoraSpec& attn_lora = {});

  Var operator()(Var x, const Mat* attn_bias = nullptr) const;

  LayerNorm ln1, ln2;
  MultiHeadAttention attn;
  Linear fc1, fc2;
};

/// Strictly lower-triangular-allowed causal bias (0 on/below diagonal,
/// -1e9 above).
Mat causal_bias(int length);

} // namespace ldseg::nn
