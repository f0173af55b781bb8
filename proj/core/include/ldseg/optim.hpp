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

#include <vector>

#include "ldseg/autograd.hpp"

namespace ldseg {

/// lr0 * (1 - step/total_steps)^power. Throws ValueError when step is
/// outside [0, total_steps].
double poly_lr(long step, long total_steps, double lr0, double power);

class Adam {
public:
  explicit Adam(std::vector<ag::Var> params, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  /// Applies one update using the gradients currently stored on the
  /// parameters; parameters without a gradient are skipped.
  void step(double lr);
  void zero_grad();

  const std::vector<ag::Var>& params() const { return params_; }

private:
  std::vector<ag::Var> params_;
  std::vector<ag::Mat> m_, v_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
};

} // namespace ldseg
