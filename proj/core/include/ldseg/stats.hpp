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

namespace ldseg {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;           // two-sided
  bool degenerate = false;  // zero-variance differences with nonzero mean
};

/// Two-sided paired t-test on a - b with sample standard deviation and
/// n - 1 degrees of freedom. Requires equal lengths >= 2. Zero-variance
/// differences: t = 0, p = 1 for zero mean; p = 0 with the degenerate flag
/// for nonzero mean.
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

/// Two-sided p-value of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, int df);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

} // namespace ldseg
