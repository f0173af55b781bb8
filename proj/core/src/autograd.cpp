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
#include "ldseg/autograd.hpp"

#include <cmath>
#include <unordered_set>

#include "ldseg/errors.hpp"

namespace ldseg::ag {
namespace {

thread_local bool g_grad_enabled = true;
thread_local std::uint64_t g_seq = 0;

Var make_node(Mat val, std::vector<Var> parents, std::function<void(Node&)> backward_fn) {
  auto node = std::make_shared<Node>();
  node->val = std::move(val);
  node->seq = ++g_seq;
  bool need = false;
  if (g_grad_enabled) {
    for (const auto& p : parents) need = need || p->requires_grad;
  }
  if (need) {
    node->requires_grad = true;
    node->parents = std::move(parents);
    node->backward_fn = std::move(backward_fn);
  }
  return node;
}

void check_same_shape(const Var& a, const Var& b, const char* op) {
  if (a->val.rows() != b->val.rows() || a->val.cols() != b->val.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a->val.rows()) + "x" +
                         std::to_string(a->val.cols()) + " vs " + std::to_string(b->val.rows()) + "x" +
                         std::to_string(b->val.cols()));
}

} // namespace

NoGradGuard::NoGradGuard() : prev_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = prev_; }

bool grad_enabled() { return g_grad_enabled; }

Var constant(Mat v) {
  auto node = std::make_shared<Node>();
  node->val = std::move(v);
  node->seq = ++g_seq;
  return node;
}

Var param(Mat v) {
  auto node = std::make_shared<Node>();
  node->val = std::move(v);
  node->requires_grad = true;
  node->seq = ++g_seq;
  return node;
}

Var add(Var a, Var b) {
  check_same_shape(a, b, "add");
  return make_node(a->val + b->val, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad;
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad += n.grad;
    }
  });
}

Var add_rowvec(Var a, Var b) {
  if (b->val.rows() != 1 || b->val.cols() != a->val.cols())
    throw DimensionError("add_rowvec: expected 1x" + std::to_string(a->val.cols()) + " bias");
  return make_node(a->val.rowwise() + b->val.row(0), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad;
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad += n.grad.colwise().sum();
    }
  });
}

Var add_scalar(Var a, Var s) {
  if (s->val.size() != 1) throw DimensionError("add_scalar: scalar operand must be 1x1");
  return make_node(a->val.array() + s->val(0, 0), {a, s}, [a, s](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad;
    }
    if (s->requires_grad) {
      s->ensure_grad();
      s->grad(0, 0) += n.grad.sum();
    }
  });
}

Var sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  return make_node(a->val - b->val, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad;
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad -= n.grad;
    }
  });
}

Var hadamard(Var a, Var b) {
  check_same_shape(a, b, "hadamard");
  return make_node(a->val.cwiseProduct(b->val), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad.cwiseProduct(b->val);
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad += n.grad.cwiseProduct(a->val);
    }
  });
}

Var div(Var a, Var b) {
  check_same_shape(a, b, "div");
  return make_node(a->val.cwiseQuotient(b->val), {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad.cwiseQuotient(b->val);
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad -= n.grad.cwiseProduct(a->val).cwiseQuotient(b->val.cwiseProduct(b->val));
    }
  });
}

Var scale(Var a, float s) {
  return make_node(a->val * s, {a}, [a, s](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad * s;
    }
  });
}

Var shift(Var a, float s) {
  return make_node(a->val.array() + s, {a}, [a](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad;
    }
  });
}

Var gelu(Var a) {
  constexpr float kInvSqrt2 = 0.70710678118654752440f;
  constexpr float kInvSqrt2Pi = 0.39894228040143267794f;
  Mat phi = ((a->val.array() * kInvSqrt2).erf() * 0.5f + 0.5f).matrix();
  Mat out = a->val.cwiseProduct(phi);
  return make_node(std::move(out), {a}, [a, phi = std::move(phi)](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    Mat dens = ((-0.5f * a->val.array().square()).exp() * kInvSqrt2Pi).matrix();
    a->grad += n.grad.cwiseProduct((phi.array() + a->val.array() * dens.array()).matrix());
  });
}

Var sigmoid(Var a) {
  Mat y(a->val.rows(), a->val.cols());
  for (Eigen::Index i = 0; i < a->val.size(); ++i) {
    const float x = a->val(i);
    y(i) = x >= 0.0f ? 1.0f / (1.0f + std::exp(-x)) : std::exp(x) / (1.0f + std::exp(x));
  }
  return make_node(y, {a}, [a, y](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad += n.grad.cwiseProduct((y.array() * (1.0f - y.array())).matrix());
  });
}

Var log_op(Var a) {
  return make_node(a->val.array().log().matrix(), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad += n.grad.cwiseQuotient(a->val);
  });
}

Var clamp(Var a, float lo, float hi) {
  return make_node(a->val.array().min(hi).max(lo).matrix(), {a}, [a, lo, hi](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad +=
        n.grad.cwiseProduct(((a->val.array() >= lo) && (a->val.array() <= hi)).cast<float>().matrix());
  });
}

Var matmul(Var a, Var b) {
  if (a->val.cols() != b->val.rows())
    throw DimensionError("matmul: " + std::to_string(a->val.rows()) + "x" + std::to_string(a->val.cols()) +
                         " times " + std::to_string(b->val.rows()) + "x" + std::to_string(b->val.cols()));
  return make_node(a->val * b->val, {a, b}, [a, b](Node& n) {
    if (a->requires_grad) {
      a->ensure_grad();
      a->grad += n.grad * b->val.transpose();
    }
    if (b->requires_grad) {
      b->ensure_grad();
      b->grad += a->val.transpose() * n.grad;
    }
  });
}

Var transpose(Var a) {
  return make_node(a->val.transpose(), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad += n.grad.transpose();
  });
}

Var fixed_linear(std::shared_ptr<const Mat> m, Var a) {
  if (m->cols() != a->val.rows()) throw DimensionError("fixed_linear: inner dimension mismatch");
  return make_node(*m * a->val, {a}, [a, m](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad += m->transpose() * n.grad;
  });
}

Var gather_rows(Var a, std::vector<int> idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), a->val.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= a->val.rows()) throw DimensionError("gather_rows: index out of range");
    out.row(static_cast<Eigen::Index>(i)) = a->val.row(idx[i]);
  }
  return make_node(std::move(out), {a}, [a, idx = std::move(idx)](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < idx.size(); ++i) a->grad.row(idx[i]) += n.grad.row(static_cast<Eigen::Index>(i));
  });
}

Var slice_rows(Var a, int start, int n_rows) {
  if (start < 0 || n_rows < 0 || start + n_rows > a->val.rows())
    throw DimensionError("slice_rows: range out of bounds");
  return make_node(a->val.middleRows(start, n_rows), {a}, [a, start, n_rows](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad.middleRows(start, n_rows) += n.grad;
  });
}

Var cols(Var a, int start, int n_cols) {
  if (start < 0 || n_cols < 0 || start + n_cols > a->val.cols())
    throw DimensionError("cols: range out of bounds");
  return make_node(a->val.middleCols(start, n_cols), {a}, [a, start, n_cols](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad.middleCols(start, n_cols) += n.grad;
  });
}

Var hcat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ValueError("hcat: no operands");
  Eigen::Index rows = parts[0]->val.rows();
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    if (p->val.rows() != rows) throw DimensionError("hcat: row count mismatch");
    total += p->val.cols();
  }
  Mat out(rows, total);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.middleCols(off, p->val.cols()) = p->val;
    off += p->val.cols();
  }
  return make_node(std::move(out), parts, [parts](Node& n) {
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      if (p->requires_grad) {
        p->ensure_grad();
        p->grad += n.grad.middleCols(off, p->val.cols());
      }
      off += p->val.cols();
    }
  });
}

Var vcat(const std::vector<Var>& parts) {
  if (parts.empty()) throw ValueError("vcat: no operands");
  Eigen::Index cols_n = parts[0]->val.cols();
  Eigen::Index total = 0;
  for (const auto& p : parts) {
    if (p->val.cols() != cols_n) throw DimensionError("vcat: column count mismatch");
    total += p->val.rows();
  }
  Mat out(total, cols_n);
  Eigen::Index off = 0;
  for (const auto& p : parts) {
    out.middleRows(off, p->val.rows()) = p->val;
    off += p->val.rows();
  }
  return make_node(std::move(out), parts, [parts](Node& n) {
    Eigen::Index off = 0;
    for (const auto& p : parts) {
      if (p->requires_grad) {
        p->ensure_grad();
        p->grad += n.grad.middleRows(off, p->val.rows());
      }
      off += p->val.rows();
    }
  });
}

Var softmax_rows(Var a) {
  Mat s(a->val.rows(), a->val.cols());
  for (Eigen::Index r = 0; r < a->val.rows(); ++r) {
    const float mx = a->val.row(r).maxCoeff();
    Eigen::ArrayXf e = (a->val.row(r).array() - mx).exp();
    s.row(r) = (e / e.sum()).matrix();
  }
  return make_node(s, {a}, [a, s](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      const float dot = n.grad.row(r).cwiseProduct(s.row(r)).sum();
      a->grad.row(r) += (n.grad.row(r).array() - dot).matrix().cwiseProduct(s.row(r));
    }
  });
}

Var layer_norm(Var a, Var gamma, Var beta, float eps) {
  const Eigen::Index c = a->val.cols();
  if (gamma->val.rows() != 1 || gamma->val.cols() != c || beta->val.rows() != 1 || beta->val.cols() != c)
    throw DimensionError("layer_norm: gamma/beta must be 1 x C");
  Mat xhat(a->val.rows(), c);
  Eigen::VectorXf inv_std(a->val.rows());
  for (Eigen::Index r = 0; r < a->val.rows(); ++r) {
    const float mu = a->val.row(r).mean();
    const float var = (a->val.row(r).array() - mu).square().mean();
    const float is = 1.0f / std::sqrt(var + eps);
    inv_std(r) = is;
    xhat.row(r) = ((a->val.row(r).array() - mu) * is).matrix();
  }
  Mat out = (xhat.array().rowwise() * gamma->val.row(0).array()).rowwise() + beta->val.row(0).array();
  return make_node(std::move(out), {a, gamma, beta}, [a, gamma, beta, xhat, inv_std](Node& n) {
    if (gamma->requires_grad) {
      gamma->ensure_grad();
      gamma->grad += n.grad.cwiseProduct(xhat).colwise().sum();
    }
    if (beta->requires_grad) {
      beta->ensure_grad();
      beta->grad += n.grad.colwise().sum();
    }
    if (a->requires_grad) {
      a->ensure_grad();
      using RowArr = Eigen::Array<float, 1, Eigen::Dynamic>;
      for (Eigen::Index r = 0; r < a->val.rows(); ++r) {
        RowArr dxhat = n.grad.row(r).array() * gamma->val.row(0).array();
        const float m1 = dxhat.mean();
        const float m2 = (dxhat * xhat.row(r).array()).mean();
        a->grad.row(r) += (inv_std(r) * (dxhat - m1 - xhat.row(r).array() * m2)).matrix();
      }
    }
  });
}

Var sum_all(Var a) {
  Mat out(1, 1);
  out(0, 0) = a->val.sum();
  return make_node(std::move(out), {a}, [a](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad.array() += n.grad(0, 0);
  });
}

Var mean_all(Var a) {
  Mat out(1, 1);
  out(0, 0) = a->val.mean();
  const float inv = 1.0f / static_cast<float>(a->val.size());
  return make_node(std::move(out), {a}, [a, inv](Node& n) {
    if (!a->requires_grad) return;
    a->ensure_grad();
    a->grad.array() += n.grad(0, 0) * inv;
  });
}

Var cross_entropy_rows(Var logits, std::vector<int> targets, std::vector<std::uint8_t> loss_mask) {
  const Eigen::Index rows = logits->val.rows();
  if (static_cast<Eigen::Index>(targets.size()) != rows || targets.size() != loss_mask.size())
    throw DimensionError("cross_entropy_rows: targets/mask length must equal logit rows");
  int active = 0;
  for (std::uint8_t m : loss_mask) active += m ? 1 : 0;
  if (active == 0) throw ValueError("cross_entropy_rows: no unmasked positions");

  Mat probs(rows, logits->val.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const float mx = logits->val.row(r).maxCoeff();
    Eigen::ArrayXf e = (logits->val.row(r).array() - mx).exp();
    const float z = e.sum();
    probs.row(r) = (e / z).matrix();
    if (loss_mask[static_cast<std::size_t>(r)]) {
      const int t = targets[static_cast<std::size_t>(r)];
      if (t < 0 || t >= logits->val.cols()) throw ValueError("cross_entropy_rows: target id out of range");
      loss += -(static_cast<double>(logits->val(r, t)) - mx - std::log(z));
    }
  }
  Mat out(1, 1);
  out(0, 0) = static_cast<float>(loss / active);
  return make_node(std::move(out), {logits},
                   [logits, probs = std::move(probs), targets = std::move(targets),
                    loss_mask = std::move(loss_mask), active](Node& n) {
                     if (!logits->requires_grad) return;
                     logits->ensure_grad();
                     const float g = n.grad(0, 0) / static_cast<float>(active);
                     for (Eigen::Index r = 0; r < probs.rows(); ++r) {
                       if (!loss_mask[static_cast<std::size_t>(r)]) continue;
                       logits->grad.row(r) += g * probs.row(r);
                       logits->grad(r, targets[static_cast<std::size_t>(r)]) -= g;
                     }
                   });
}

void backward(const Var& root) {
  if (root->val.size() != 1) throw ValueError("backward: root must be scalar (1x1)");
  root->ensure_grad();
  root->grad(0, 0) = 1.0f;

  // Iterative DFS to get reverse topological order.
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(root.get(), 0);
  visited.insert(root.get());
  while (!stack.empty()) {
    auto& [node, child] = stack.back();
    if (child < node->parents.size()) {
      Node* next = node->parents[child].get();
      ++child;
      if (next->requires_grad && visited.insert(next).second) stack.emplace_back(next, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* node = *it;
    if (node->backward_fn && node->grad.size() != 0) node->backward_fn(*node);
  }
}

} // namespace ldseg::ag
