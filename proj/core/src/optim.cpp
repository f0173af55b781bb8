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
#include "ldseg/optim.hpp"

#include <cmath>

#include "ldseg/errors.hpp"

namespace ldseg {

double poly_lr(long step, long total_steps, double lr0, double power) {
  if (total_steps <= 0) throw ValueError("poly_lr: total_steps must be positive");
  if (lr0 <= 0.0) throw ValueError("poly_lr: lr0 must be positive");
  if (power <= 0.0) throw ValueError("poly_lr: power must be positive");
  if (step < 0 || step > total_steps) throw ValueError("poly_lr: step outside [0, total_steps]");
  return lr0 * std::pow(1.0 - static_cast<double>(step) / static_cast<double>(total_steps), power);
}

Adam::Adam(std::vector<ag::Var> params, double beta1, double beta2, double eps)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.push_back(ag::Mat::Zero(p->val.rows(), p->val.cols()));
    v_.push_back(ag::Mat::Zero(p->val.rows(), p->val.cols()));
  }
}

void Adam::step(double lr) {
  ++t_;
  const float c1 = static_cast<float>(1.0 - std::pow(beta1_, t_));
  const float c2 = static_cast<float>(1.0 - std::pow(beta2_, t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    if (p->grad.size() == 0) continue;
    m_[i] = static_cast<float>(beta1_) * m_[i] + static_cast<float>(1.0 - beta1_) * p->grad;
    v_[i] = (static_cast<float>(beta2_) * v_[i].array() +
             static_cast<float>(1.0 - beta2_) * p->grad.array().square())
                .matrix();
    const auto m_hat = m_[i].array() / c1;
    const auto v_hat = v_[i].array() / c2;
    p->val.array() -= static_cast<float>(lr) * m_hat / (v_hat.sqrt() + static_cast<float>(eps_));
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p->grad.resize(0, 0);
}

} // namespace ldseg
