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

#include <map>
#include <string>
#include <vector>

#include "ldseg/stats.hpp"

namespace ldseg {

enum class PromptMode { kText, kNone, kPoint, kTightBox, kLooseBox };

std::string to_string(PromptMode mode);
PromptMode prompt_mode_from_string(const std::string& s);

/// One prediction-vs-ground-truth measurement.
struct EvalRecord {
  std::string task;
  std::string sample_id;
  double dsc = 0.0;
  PromptMode prompt_mode = PromptMode::kText;
};

struct MethodSummary {
  std::map<std::string, double> per_task_mean;
  double overall = 0.0; // unweighted mean of per-task means
};

struct MethodDelta {
  std::string method_a;
  std::string method_b;
  double delta = 0.0; // overall_a - overall_b
  TTestResult ttest;  // paired over per-task means
};

struct TaskReport {
  std::vector<std::string> methods; // sorted
  std::map<std::string, MethodSummary> by_method;
  std::vector<MethodDelta> deltas; // each unordered pair once, a < b
};

/// Per-task unweighted means, overall mean of per-task means, pairwise
/// deltas and significance over per-task means. Every method must cover the
/// same task set; throws ValueError otherwise.
TaskReport aggregate_report(const std::map<std::string, std::vector<EvalRecord>>& methods);

// CSV persistence. Records: columns task,sample_id,dsc,prompt_mode.
void write_records_csv(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> read_records_csv(const std::string& path);

/// Method fixture: columns task,method,dsc; one record per row.
std::map<std::string, std::vector<EvalRecord>> read_method_fixture_csv(const std::string& path);

void write_report_csv(const std::string& path, const TaskReport& report);

/// Plain-text table: one row per task, one column per method, plus the
/// Average row and the delta/significance block.
std::string format_report_table(const TaskReport& report);

} // namespace ldseg
