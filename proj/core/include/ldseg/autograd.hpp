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

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ldseg::ag {

// Reverse-mode autodiff over dense float matrices. The tape is the DAG of
// shared_ptr<Node>; backward() walks it once in reverse topological order.
// Everything here is single-threaded by design: training holds the single
// writer lock over the weights anyway.

using Mat = Eigen::MatrixXf;

class Node;
using Var = std::shared_ptr<Node>;

class Node {
public:
  Mat val;
  Mat grad; // empty until first accumulation
  bool requires_grad = false;
  std::vector<Var> parents;
  std::function<void(Node&)> backward_fn;
  std::uint64_t seq = 0;

  void ensure_grad() {
    if (grad.size() == 0) grad = Mat::Zero(val.rows(), val.cols());
  }
};

/// While a guard is alive, new ops record no tape (values only).
class NoGradGuard {
public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
  bool prev_;
};

bool grad_enabled();

Var constant(Mat v);
Var param(Mat v); // leaf with requires_grad

// -- elementwise / broadcast ------------------------------------------------
Var add(Var a, Var b);          // same shape
Var add_rowvec(Var a, Var b);   // b is 1 x C, broadcast over rows of a
Var add_scalar(Var a, Var s);   // s is 1 x 1, broadcast everywhere
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var div(Var a, Var b);          // same shape
Var scale(Var a, float s);
Var shift(Var a, float s);      // a + s (constant)
Var gelu(Var a);                // exact erf form
Var sigmoid(Var a);
Var log_op(Var a);
Var clamp(Var a, float lo, float hi);

// -- linear algebra -----------------------------------------------------------
Var matmul(Var a, Var b);
Var transpose(Var a);
Var fixed_linear(std::shared_ptr<const Mat> m, Var a); // m * a, m is not learned

// -- structure ---------------------------------------------------------------
Var gather_rows(Var a, std::vector<int> idx);
Var slice_rows(Var a, int start, int n);
Var cols(Var a, int start, int n);
Var hcat(const std::vector<Var>& parts);
Var vcat(const std::vector<Var>& parts);

// -- normalization / attention pieces -----------------------------------------
Var softmax_rows(Var a);
Var layer_norm(Var a, Var gamma, Var beta, float eps = 1e-5f);

// -- reductions ----------------------------------------------------------------
Var sum_all(Var a);  // 1 x 1
Var mean_all(Var a); // 1 x 1

/// Mean next-token negative log-likelihood over rows where loss_mask is 1.
/// logits: L x V, targets/loss_mask: length L.
Var cross_entropy_rows(Var logits, std::vector<int> targets, std::vector<std::uint8_t> loss_mask);

/// Backpropagates from a 1x1 root. Gradients accumulate into every
/// reachable node with requires_grad.
void backward(const Var& root);

} // namespace ldseg::ag
