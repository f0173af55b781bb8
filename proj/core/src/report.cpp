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
#include "ldseg/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ldseg/errors.hpp"

namespace ldseg {

std::string to_string(PromptMode mode) {
  switch (mode) {
    case PromptMode::kText: return "text";
    case PromptMode::kNone: return "none";
    case PromptMode::kPoint: return "point";
    case PromptMode::kTightBox: return "tight_box";
    case PromptMode::kLooseBox: return "loose_box";
  }
  throw ValueError("unknown prompt mode");
}

PromptMode prompt_mode_from_string(const std::string& s) {
  if (s == "text") return PromptMode::kText;
  if (s == "none") return PromptMode::kNone;
  if (s == "point") return PromptMode::kPoint;
  if (s == "tight_box") return PromptMode::kTightBox;
  if (s == "loose_box") return PromptMode::kLooseBox;
  throw ValueError("unknown prompt mode: " + s);
}

namespace {

// Minimal CSV with double-quote escaping; cell whitespace is significant.
std::vector<std::string> parse_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\r') {
      // tolerate CRLF
    } else {
      cell += ch;
    }
  }
  if (quoted) throw FormatError("unterminated quote on CSV line " + std::to_string(lineno));
  cells.push_back(std::move(cell));
  return cells;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

double parse_double(const std::string& s, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad numeric cell '" + s + "' on CSV line " + std::to_string(lineno));
  }
}

} // namespace

TaskReport aggregate_report(const std::map<std::string, std::vector<EvalRecord>>& methods) {
  if (methods.empty()) throw ValueError("aggregate_report: no methods");

  TaskReport report;
  std::set<std::string> reference_tasks;
  bool first = true;
  for (const auto& [method, records] : methods) {
    if (records.empty()) throw ValueError("aggregate_report: method '" + method + "' has no records");
    report.methods.push_back(method);

    std::map<std::string, std::pair<double, long>> acc;
    std::set<std::string> tasks;
    for (const auto& r : records) {
      acc[r.task].first += r.dsc;
      acc[r.task].second += 1;
      tasks.insert(r.task);
    }
    if (first) {
      reference_tasks = tasks;
      first = false;
    } else if (tasks != reference_tasks) {
      throw ValueError("aggregate_report: task coverage mismatch for method '" + method + "'");
    }

    MethodSummary summary;
    double total = 0.0;
    for (const auto& [task, sums] : acc) {
      const double mean = sums.first / static_cast<double>(sums.second);
      summary.per_task_mean[task] = mean;
      total += mean;
    }
    summary.overall = total / static_cast<double>(acc.size());
    report.by_method[method] = std::move(summary);
  }

  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    for (std::size_t j = i + 1; j < report.methods.size(); ++j) {
      const auto& ma = report.by_method.at(report.methods[i]);
      const auto& mb = report.by_method.at(report.methods[j]);
      std::vector<double> a, b;
      for (const auto& [task, mean] : ma.per_task_mean) {
        a.push_back(mean);
        b.push_back(mb.per_task_mean.at(task));
      }
      MethodDelta d;
      d.method_a = report.methods[i];
      d.method_b = report.methods[j];
      d.delta = ma.overall - mb.overall;
      d.ttest = paired_ttest(a, b);
      report.deltas.push_back(std::move(d));
    }
  }
  return report;
}

void write_records_csv(const std::string& path, const std::vector<EvalRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "task,sample_id,dsc,prompt_mode\n";
  char num[40];
  for (const auto& r : records) {
    std::snprintf(num, sizeof(num), "%.10g", r.dsc);
    out << csv_escape(r.task) << "," << csv_escape(r.sample_id) << "," << num << ","
        << to_string(r.prompt_mode) << "\n";
  }
}

std::vector<EvalRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<EvalRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("task,", 0) == 0) continue; // header
    auto cells = parse_csv_line(line, lineno);
    if (cells.size() != 4) throw FormatError("expected 4 cells on line " + std::to_string(lineno));
    EvalRecord r;
    r.task = cells[0];
    r.sample_id = cells[1];
    r.dsc = parse_double(cells[2], lineno);
    r.prompt_mode = prompt_mode_from_string(cells[3]);
    out.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, std::vector<EvalRecord>> read_method_fixture_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::map<std::string, std::vector<EvalRecord>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("task,", 0) == 0) continue;
    auto cells = parse_csv_line(line, lineno);
    if (cells.size() != 3) throw FormatError("expected 3 cells on line " + std::to_string(lineno));
    EvalRecord r;
    r.task = cells[0];
    r.sample_id = cells[0];
    r.dsc = parse_double(cells[2], lineno);
    out[cells[1]].push_back(std::move(r));
  }
  if (out.empty()) throw FormatError("fixture holds no records: " + path);
  return out;
}

void write_report_csv(const std::string& path, const TaskReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "section,task,";
  for (const auto& m : report.methods) out << csv_escape(m) << (m == report.methods.back() ? "" : ",");
  out << "\n";
  char num[40];
  const auto& tasks = report.by_method.at(report.methods.front()).per_task_mean;
  for (const auto& [task, _] : tasks) {
    out << "task," << csv_escape(task);
    for (const auto& m : report.methods) {
      std::snprintf(num, sizeof(num), "%.4f", report.by_method.at(m).per_task_mean.at(task));
      out << "," << num;
    }
    out << "\n";
  }
  out << "overall,Average";
  for (const auto& m : report.methods) {
    std::snprintf(num, sizeof(num), "%.4f", report.by_method.at(m).overall);
    out << "," << num;
  }
  out << "\n";
  for (const auto& d : report.deltas) {
    std::snprintf(num, sizeof(num), "%.4f", d.delta);
    out << "delta," << csv_escape(d.method_a + " - " + d.method_b) << "," << num << ",";
    std::snprintf(num, sizeof(num), "%.6g", d.ttest.t);
    out << num << ",";
    std::snprintf(num, sizeof(num), "%.6g", d.ttest.p);
    out << num << (d.ttest.degenerate ? ",degenerate" : "") << "\n";
  }
}

std::string format_report_table(const TaskReport& report) {
  std::ostringstream os;
  std::size_t task_width = 8;
  const auto& tasks = report.by_method.at(report.methods.front()).per_task_mean;
  for (const auto& [task, _] : tasks) task_width = std::max(task_width, task.size());

  os << std::string(task_width, ' ').replace(0, 4, "Task");
  for (const auto& m : report.methods) {
    os << "  ";
    os.width(12);
    os << m;
  }
  os << "\n";
  char num[32];
  for (const auto& [task, _] : tasks) {
    os << task << std::string(task_width - task.size(), ' ');
    for (const auto& m : report.methods) {
      std::snprintf(num, sizeof(num), "%12.2f", report.by_method.at(m).per_task_mean.at(task));
      os << "  " << num;
    }
    os << "\n";
  }
  os << "Average" << std::string(task_width - 7, ' ');
  for (const auto& m : report.methods) {
    std::snprintf(num, sizeof(num), "%12.2f", report.by_method.at(m).overall);
    os << "  " << num;
  }
  os << "\n";
  for (const auto& d : report.deltas) {
    std::snprintf(num, sizeof(num), "%.2f", d.delta);
    os << d.method_a << " - " << d.method_b << ": delta " << num;
    std::snprintf(num, sizeof(num), "%.4g", d.ttest.t);
    os << " (t " << num;
    std::snprintf(num, sizeof(num), "%.4g", d.ttest.p);
    os << ", p " << num << (d.ttest.degenerate ? ", degenerate variance)" : ")") << "\n";
  }
  return os.str();
}

} // namespace ldseg
