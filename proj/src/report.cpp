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

#include "snrbench/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snrbench/error.h"

namespace snrbench {
namespace {

using Json = nlohmann::ordered_json;

struct Slice {
  std::vector<const ScoreRow*> rows;
};

struct ConditionKeyLess {
  bool operator()(const Condition& a, const Condition& b) const { return ConditionBefore(a, b); }
};

void ComputeRanking(const Slice& slice, ConditionMetrics* out, std::vector<std::string>* warnings) {
  std::vector<double> scores;
  std::vector<int> truth;
  for (const ScoreRow* r : slice.rows) {
    scores.push_back(r->scores[0]);
    truth.push_back(r->truth);
  }
  try {
    out->roc_auc = RocAuc(scores, truth);
    EerResult eer = ComputeEer(scores, truth);
    out->eer = eer.eer;
    out->eer_threshold = eer.threshold;
    out->sweep = std::move(eer.sweep);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleClass) throw;
    warnings->push_back("condition " + out->name + ": single class, AUC and EER are null");
  }
}

void ComputeBinaryAccuracy(const Slice& slice, double threshold, ConditionMetrics* out) {
  std::vector<double> scores;
  std::vector<int> truth;
  for (const ScoreRow* r : slice.rows) {
    scores.push_back(r->scores[0]);
    truth.push_back(r->truth);
  }
  out->accuracy_threshold = threshold;
  out->accuracy = BinaryAccuracy(scores, truth, threshold);
  out->confusion = BinaryConfusion(scores, truth, threshold);
}

void ComputeFourClass(const Slice& slice, ConditionMetrics* out,
                      std::vector<std::string>* warnings) {
  std::vector<std::vector<double>> scores;
  std::vector<int> truth;
  for (const ScoreRow* r : slice.rows) {
    scores.push_back(r->scores);
    truth.push_back(r->truth);
  }
  out->confusion = MulticlassConfusion(scores, truth, 4);
  out->accuracy = AccuracyFromConfusion(out->confusion);
  const MacroF1Result f1 = MacroF1(out->confusion);
  out->macro_f1 = f1.macro_f1;
  out->absent_classes = f1.absent_classes;
  if (!f1.absent_classes.empty()) {
    std::string names;
    for (int c : f1.absent_classes) {
      if (!names.empty()) names += ",";
      names += std::string(ClassName(Task::kFourClass, c));
    }
    warnings->push_back("condition " + out->name + ": classes absent from truth (" + names +
                        ") count as F1 = 0");
  }
}

Json OptionalJson(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> OptionalFromJson(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json ThresholdJson(double t) {
  if (std::isinf(t)) return t > 0 ? Json("inf") : Json("-inf");
  return Json(t);
}

double ThresholdFromJson(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::kSchemaViolation, "bad threshold '" + s + "'");
  }
  return j.get<double>();
}

Json MetricsToJson(const ConditionMetrics& m, const char* kind) {
  Json j;
  j["kind"] = kind;
  j["condition"] = m.name;
  j["n_trials"] = m.n_trials;
  j["accuracy"] = OptionalJson(m.accuracy);
  j["accuracy_threshold"] = OptionalJson(m.accuracy_threshold);
  j["roc_auc"] = OptionalJson(m.roc_auc);
  j["eer"] = OptionalJson(m.eer);
  j["eer_threshold"] = OptionalJson(m.eer_threshold);
  j["macro_f1"] = OptionalJson(m.macro_f1);
  j["absent_classes"] = m.absent_classes;
  j["confusion"] = m.confusion;
  Json sweep = Json::array();
  for (const auto& p : m.sweep) sweep.push_back(Json::array({ThresholdJson(p.threshold), p.far, p.frr}));
  j["sweep"] = std::move(sweep);
  return j;
}

ConditionMetrics MetricsFromJson(const Json& j) {
  ConditionMetrics m;
  m.name = j.at("condition").get<std::string>();
  if (m.name != "pooled") {
    const auto c = Condition::Parse(m.name);
    if (!c) throw Error(ErrorCode::kSchemaViolation, "bad condition '" + m.name + "'");
    m.condition = *c;
  }
  m.n_trials = j.at("n_trials").get<std::size_t>();
  m.accuracy = OptionalFromJson(j.at("accuracy"));
  m.accuracy_threshold = OptionalFromJson(j.at("accuracy_threshold"));
  m.roc_auc = OptionalFromJson(j.at("roc_auc"));
  m.eer = OptionalFromJson(j.at("eer"));
  m.eer_threshold = OptionalFromJson(j.at("eer_threshold"));
  m.macro_f1 = OptionalFromJson(j.at("macro_f1"));
  m.absent_classes = j.at("absent_classes").get<std::vector<int>>();
  m.confusion = j.at("confusion").get<ConfusionMatrix>();
  for (const auto& p : j.at("sweep")) {
    m.sweep.push_back({ThresholdFromJson(p.at(0)), p.at(1).get<double>(), p.at(2).get<double>()});
  }
  return m;
}

std::string Cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

std::string CsvValue(const std::optional<double>& v) { return v ? FormatDouble(*v) : ""; }

}  // namespace

MetricReport PerConditionCurves(const std::vector<ScoreFile>& files,
                                std::optional<double> threshold) {
  if (files.empty()) throw Error(ErrorCode::kInvalidArgument, "no score files to evaluate");
  if (threshold && std::isnan(*threshold)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be a number");
  }
  MetricReport report;
  report.task = files.front().task;
  if (threshold) {
    report.threshold_policy = "fixed";
    report.fixed_threshold = threshold;
  }

  std::set<std::string, std::less<>> seen;
  std::map<Condition, Slice, ConditionKeyLess> groups;
  Slice all;
  for (const ScoreFile& f : files) {
    if (f.task != report.task) {
      throw Error(ErrorCode::kSchemaViolation, "score files mix tasks " +
                                                   std::string(ToString(report.task)) + " and " +
                                                   std::string(ToString(f.task)));
    }
    if (!f.config_digest.empty() &&
        std::find(report.config_digests.begin(), report.config_digests.end(), f.config_digest) ==
            report.config_digests.end()) {
      report.config_digests.push_back(f.config_digest);
    }
    for (const ScoreRow& r : f.rows) {
      if (static_cast<int>(r.scores.size()) != ScoreColumns(report.task)) {
        throw Error(ErrorCode::kDimMismatch, "row " + r.utt_id + " has " +
                                                 std::to_string(r.scores.size()) + " scores");
      }
      if (!seen.insert(r.utt_id).second) {
        throw Error(ErrorCode::kDuplicateUttId, "utt_id " + r.utt_id + " appears twice");
      }
      groups[r.condition].rows.push_back(&r);
      all.rows.push_back(&r);
    }
  }

  std::vector<std::pair<Condition, Slice>> slices;
  const bool pair_with_clean = report.task == Task::kBinaryNoise;
  const auto clean_it = groups.find(Condition::Clean());
  for (const auto& [cond, slice] : groups) {
    Slice s = slice;
    if (pair_with_clean && !cond.clean && clean_it != groups.end()) {
      s.rows.insert(s.rows.begin(), clean_it->second.rows.begin(), clean_it->second.rows.end());
    }
    slices.emplace_back(cond, std::move(s));
  }

  if (report.task == Task::kFourClass) {
    for (const auto& [cond, slice] : slices) {
      ConditionMetrics m;
      m.name = cond.ToString();
      m.condition = cond;
      m.n_trials = slice.rows.size();
      ComputeFourClass(slice, &m, &report.warnings);
      report.conditions.push_back(std::move(m));
    }
    report.pooled.name = "pooled";
    report.pooled.n_trials = all.rows.size();
    if (!all.rows.empty()) ComputeFourClass(all, &report.pooled, &report.warnings);
    return report;
  }

  report.pooled.name = "pooled";
  report.pooled.n_trials = all.rows.size();
  if (!all.rows.empty()) ComputeRanking(all, &report.pooled, &report.warnings);
  const std::optional<double> pooled_threshold = threshold ? threshold : report.pooled.eer_threshold;

  for (const auto& [cond, slice] : slices) {
    ConditionMetrics m;
    m.name = cond.ToString();
    m.condition = cond;
    m.n_trials = slice.rows.size();
    ComputeRanking(slice, &m, &report.warnings);
    const std::optional<double> t = threshold ? threshold : (m.eer_threshold ? m.eer_threshold
                                                                             : pooled_threshold);
    if (t) {
      ComputeBinaryAccuracy(slice, *t, &m);
    } else {
      report.warnings.push_back("condition " + m.name + ": no threshold available, accuracy is null");
    }
    report.conditions.push_back(std::move(m));
  }
  if (pooled_threshold && !all.rows.empty()) {
    ComputeBinaryAccuracy(all, *pooled_threshold, &report.pooled);
  }
  return report;
}

std::string FormatReportTable(const MetricReport& report) {
  std::ostringstream out;
  out << "task: " << ToString(report.task) << "\n";
  out << "accuracy threshold: "
      << (report.fixed_threshold ? "fixed " + FormatDouble(*report.fixed_threshold)
                                 : std::string("EER threshold per condition"))
      << "\n";
  if (!report.config_digest.empty()) out << "config digest: " << report.config_digest << "\n";
  for (const auto& d : report.config_digests) out << "score file digest: " << d << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %8s %9s %9s %9s %9s\n", "condition", "n", "accuracy",
                "roc_auc", "eer", "macro_f1");
  out << line;
  auto emit = [&](const ConditionMetrics& m) {
    std::snprintf(line, sizeof(line), "%-10s %8zu %9s %9s %9s %9s\n", m.name.c_str(), m.n_trials,
                  Cell(m.accuracy).c_str(), Cell(m.roc_auc).c_str(), Cell(m.eer).c_str(),
                  Cell(m.macro_f1).c_str());
    out << line;
  };
  for (const auto& m : report.conditions) emit(m);
  emit(report.pooled);
  for (const auto& w : report.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::string SerializeReportJsonl(const MetricReport& report) {
  Json header;
  header["kind"] = "report_header";
  header["task"] = std::string(ToString(report.task));
  header["threshold_policy"] = report.threshold_policy;
  header["fixed_threshold"] = OptionalJson(report.fixed_threshold);
  header["config_digest"] = report.config_digest;
  header["config_digests"] = report.config_digests;
  header["n_conditions"] = report.conditions.size();
  header["warnings"] = report.warnings;
  std::string out = header.dump() + "\n";
  for (const auto& m : report.conditions) out += MetricsToJson(m, "condition").dump() + "\n";
  out += MetricsToJson(report.pooled, "pooled").dump() + "\n";
  return out;
}

std::string SerializeReportCsv(const MetricReport& report) {
  std::string out;
  if (!report.config_digest.empty()) out += "# config_digest=" + report.config_digest + "\n";
  out += "condition,metric,value\n";
  auto emit = [&](const ConditionMetrics& m) {
    out += m.name + ",n_trials," + std::to_string(m.n_trials) + "\n";
    out += m.name + ",accuracy," + CsvValue(m.accuracy) + "\n";
    out += m.name + ",roc_auc," + CsvValue(m.roc_auc) + "\n";
    out += m.name + ",eer," + CsvValue(m.eer) + "\n";
    out += m.name + ",eer_threshold," + CsvValue(m.eer_threshold) + "\n";
    out += m.name + ",macro_f1," + CsvValue(m.macro_f1) + "\n";
  };
  for (const auto& m : report.conditions) emit(m);
  emit(report.pooled);
  return out;
}

MetricReport ParseReportJsonl(std::string_view text, const std::string& source) {
  MetricReport report;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false, have_pooled = false;
  std::size_t expected = 0;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (!have_header) {
        if (kind != "report_header") throw Error(ErrorCode::kSchemaViolation, "missing report_header");
        const auto task = ParseTask(j.at("task").get<std::string>());
        if (!task) throw Error(ErrorCode::kSchemaViolation, "unknown task");
        report.task = *task;
        report.threshold_policy = j.at("threshold_policy").get<std::string>();
        report.fixed_threshold = OptionalFromJson(j.at("fixed_threshold"));
        report.config_digest = j.at("config_digest").get<std::string>();
        report.config_digests = j.at("config_digests").get<std::vector<std::string>>();
        report.warnings = j.at("warnings").get<std::vector<std::string>>();
        expected = j.at("n_conditions").get<std::size_t>();
        have_header = true;
      } else if (kind == "condition") {
        report.conditions.push_back(MetricsFromJson(j));
      } else if (kind == "pooled") {
        report.pooled = MetricsFromJson(j);
        have_pooled = true;
      } else {
        throw Error(ErrorCode::kSchemaViolation, "unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kSchemaViolation,
                  source + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation,
                  source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header || !have_pooled || report.conditions.size() != expected) {
    throw Error(ErrorCode::kSchemaViolation, source + ": incomplete report");
  }
  return report;
}

MetricReport ReadReportJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open report " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseReportJsonl(buf.str(), path.string());
}

std::string SerializeSweepCsv(const std::vector<SweepEntry>& entries,
                              const std::string& condition_name,
                              const std::string& config_digest) {
  std::string out;
  if (!config_digest.empty()) out += "# config_digest=" + config_digest + "\n";
  out += "p_noisy,condition,n_trials,eer,roc_auc,accuracy,macro_f1\n";
  for (const auto& e : entries) {
    const ConditionMetrics* m = nullptr;
    if (condition_name == "pooled") {
      m = &e.report.pooled;
    } else {
      const auto want = Condition::Parse(condition_name);
      if (!want) throw Error(ErrorCode::kInvalidArgument, "bad condition '" + condition_name + "'");
      for (const auto& c : e.report.conditions) {
        if (c.condition && *c.condition == *want) m = &c;
      }
    }
    if (m == nullptr) {
      throw Error(ErrorCode::kSchemaViolation, "report for p_noisy=" + FormatDouble(e.p_noisy) +
                                                   " has no condition " + condition_name);
    }
    out += FormatDouble(e.p_noisy) + "," + m->name + "," + std::to_string(m->n_trials) + "," +
           CsvValue(m->eer) + "," + CsvValue(m->roc_auc) + "," + CsvValue(m->accuracy) + "," +
           CsvValue(m->macro_f1) + "\n";
  }
  return out;
}

}  // namespace snrbench
