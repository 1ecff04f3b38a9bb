// Copyright 2026  The snrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "snrbench/score_file.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "snrbench/error.h"

namespace snrbench {
namespace {

constexpr std::string_view kFourClassNames[] = {"real_clean", "real_noisy", "spoof_clean",
                                                "spoof_noisy"};

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

std::optional<double> ParseDouble(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view ToString(Task task) {
  switch (task) {
    case Task::kBinarySpoof: return "binary_spoof";
    case Task::kBinaryNoise: return "binary_noise";
    case Task::kFourClass: return "four_class";
  }
  return "binary_spoof";
}

std::optional<Task> ParseTask(std::string_view s) {
  if (s == "binary_spoof") return Task::kBinarySpoof;
  if (s == "binary_noise") return Task::kBinaryNoise;
  if (s == "four_class") return Task::kFourClass;
  return std::nullopt;
}

int ScoreColumns(Task task) { return task == Task::kFourClass ? 4 : 1; }
int ClassCount(Task task) { return task == Task::kFourClass ? 4 : 2; }

std::string_view ClassName(Task task, int cls) {
  switch (task) {
    case Task::kBinarySpoof: return cls == 1 ? "bonafide" : "spoof";
    case Task::kBinaryNoise: return cls == 1 ? "clean" : "noisy";
    case Task::kFourClass: return kFourClassNames[cls];
  }
  return "";
}

std::optional<int> ParseClass(Task task, std::string_view s) {
  for (int c = 0; c < ClassCount(task); ++c) {
    if (s == ClassName(task, c)) return c;
  }
  if (task == Task::kFourClass && s.size() == 1 && s[0] >= '0' && s[0] <= '3') return s[0] - '0';
  return std::nullopt;
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string Condition::ToString() const { return clean ? "clean" : FormatDouble(snr_db); }

std::optional<Condition> Condition::Parse(std::string_view s) {
  if (s == "clean") return Clean();
  const auto v = ParseDouble(s);
  if (!v || !std::isfinite(*v)) return std::nullopt;
  return AtSnr(*v);
}

bool ConditionBefore(const Condition& a, const Condition& b) {
  if (a.clean != b.clean) return a.clean;
  return !a.clean && a.snr_db > b.snr_db;
}

std::string SerializeScoreFile(const ScoreFile& file) {
  std::string out;
  if (!file.config_digest.empty()) out += "# config_digest=" + file.config_digest + "\n";
  out += "utt_id\ttask\tcondition\ttruth";
  if (file.task == Task::kFourClass) {
    for (auto name : kFourClassNames) out += "\tscore_" + std::string(name);
  } else {
    out += "\tscore";
  }
  out += "\n";
  for (const auto& r : file.rows) {
    out += r.utt_id + "\t" + std::string(ToString(file.task)) + "\t" + r.condition.ToString() +
           "\t" + std::string(ClassName(file.task, r.truth));
    for (double s : r.scores) out += "\t" + FormatDouble(s);
    out += "\n";
  }
  return out;
}

void WriteScoreFile(const ScoreFile& file, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << SerializeScoreFile(file);
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

ScoreFile ParseScoreFile(std::string_view text, const std::string& source) {
  ScoreFile file;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  std::optional<Task> task;
  std::set<std::string, std::less<>> seen;
  auto fail = [&](std::size_t line_no, const std::string& what) {
    throw Error(ErrorCode::kSchemaViolation,
                source + ":" + std::to_string(line_no) + ": " + what);
  };

  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view kKey = "# config_digest=";
      if (line.starts_with(kKey)) file.config_digest = line.substr(kKey.size());
      continue;
    }
    const auto cols = SplitTabs(line);
    if (header.empty()) {
      header = cols;
      if (header.size() < 5 || header[0] != "utt_id" || header[1] != "task" ||
          header[2] != "condition" || header[3] != "truth") {
        fail(line_no, "header must start with utt_id, task, condition, truth");
      }
      for (std::size_t c = 4; c < header.size(); ++c) {
        if (!header[c].starts_with("score")) fail(line_no, "unexpected column '" + header[c] + "'");
      }
      continue;
    }
    if (cols.size() != header.size()) {
      fail(line_no, std::to_string(cols.size()) + " columns, header has " +
                        std::to_string(header.size()));
    }
    const auto row_task = ParseTask(cols[1]);
    if (!row_task) fail(line_no, "unknown task '" + cols[1] + "'");
    if (!task) {
      task = row_task;
      if (static_cast<std::size_t>(ScoreColumns(*task)) != header.size() - 4) {
        fail(line_no, "task " + cols[1] + " needs " + std::to_string(ScoreColumns(*task)) +
                          " score columns");
      }
    } else if (*row_task != *task) {
      fail(line_no, "mixed tasks in one score file");
    }
    ScoreRow row;
    row.utt_id = cols[0];
    if (row.utt_id.empty()) fail(line_no, "empty utt_id");
    if (!seen.insert(row.utt_id).second) fail(line_no, "duplicate utt_id '" + row.utt_id + "'");
    const auto cond = Condition::Parse(cols[2]);
    if (!cond) fail(line_no, "bad condition '" + cols[2] + "'");
    row.condition = *cond;
    const auto truth = ParseClass(*task, cols[3]);
    if (!truth) fail(line_no, "bad truth label '" + cols[3] + "'");
    row.truth = *truth;
    for (std::size_t c = 4; c < cols.size(); ++c) {
      const auto v = ParseDouble(cols[c]);
      if (!v || std::isnan(*v)) fail(line_no, "bad score '" + cols[c] + "'");
      row.scores.push_back(*v);
    }
    file.rows.push_back(std::move(row));
  }
  if (header.empty()) fail(1, "missing header row");
  file.task = task.value_or(Task::kBinarySpoof);
  if (!task && header.size() == 8) file.task = Task::kFourClass;
  return file;
}

ScoreFile ReadScoreFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open score file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScoreFile(buf.str(), path.string());
}

}  // namespace snrbench
