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

#include "snrbench/manifest.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snrbench/digest.h"
#include "snrbench/error.h"
#include "snrbench/parallel.h"
#include "snrbench/wav_io.h"

namespace snrbench {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> cols;
  for (std::string tok; in >> tok;) cols.push_back(tok);
  return cols;
}

int ResolveColumn(int col, std::size_t n_cols) {
  return col < 0 ? static_cast<int>(n_cols) + col : col;
}

bool IsWav(const fs::path& p) { return Lower(p.extension().string()) == ".wav"; }

double AudioDuration(const fs::path& path) { return DecodeWav(path).duration_s(); }

[[noreturn]] void SchemaError(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T Field(const Json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) SchemaError(line, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    SchemaError(line, std::string("field '") + key + "' has the wrong type");
  }
}

Json TrialToJson(const TrialRecord& t, const Manifest& m) {
  Json j;
  j["kind"] = "trial";
  j["utt_id"] = t.utt_id;
  j["audio_path"] = t.audio_path.generic_string();
  j["authenticity"] = ToString(t.authenticity);
  j["split"] = ToString(t.split);
  j["duration_s"] = t.duration_s;
  auto d = m.source_digests.find(t.audio_path.generic_string());
  j["sha256"] = d == m.source_digests.end() ? Json(nullptr) : Json(d->second);
  return j;
}

Json NoiseToJson(const NoiseClip& n, const Manifest& m) {
  Json j;
  j["kind"] = "noise";
  j["clip_id"] = n.clip_id;
  j["audio_path"] = n.audio_path.generic_string();
  j["category"] = n.category.ToString();
  j["duration_s"] = n.duration_s;
  auto d = m.source_digests.find(n.audio_path.generic_string());
  j["sha256"] = d == m.source_digests.end() ? Json(nullptr) : Json(d->second);
  return j;
}

void ReadDigest(const Json& obj, const std::string& path, std::size_t line,
                Manifest* m) {
  auto it = obj.find("sha256");
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_string()) SchemaError(line, "field 'sha256' has the wrong type");
  m->source_digests[path] = it->get<std::string>();
}

}  // namespace

std::string_view ToString(Authenticity a) {
  return a == Authenticity::kBonafide ? "bonafide" : "spoof";
}

std::string_view ToString(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Authenticity> ParseAuthenticity(std::string_view s) {
  if (s == "bonafide") return Authenticity::kBonafide;
  if (s == "spoof") return Authenticity::kSpoof;
  return std::nullopt;
}

std::optional<Split> ParseSplit(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "dev") return Split::kDev;
  if (s == "test") return Split::kTest;
  return std::nullopt;
}

std::string NoiseCategory::ToString() const {
  switch (kind) {
    case NoiseCategoryKind::kDomestic: return "domestic";
    case NoiseCategoryKind::kOffice: return "office";
    case NoiseCategoryKind::kOutdoor: return "outdoor";
    case NoiseCategoryKind::kTransport: return "transport";
    case NoiseCategoryKind::kOther: return "other:" + other_name;
  }
  return "other:" + other_name;
}

NoiseCategory NoiseCategory::Parse(std::string_view s) {
  if (s == "domestic") return {NoiseCategoryKind::kDomestic, ""};
  if (s == "office") return {NoiseCategoryKind::kOffice, ""};
  if (s == "outdoor") return {NoiseCategoryKind::kOutdoor, ""};
  if (s == "transport") return {NoiseCategoryKind::kTransport, ""};
  if (s.starts_with("other:")) {
    return {NoiseCategoryKind::kOther, std::string(s.substr(6))};
  }
  throw Error(ErrorCode::kSchemaViolation, "unknown noise category '" + std::string(s) + "'");
}

std::vector<const TrialRecord*> Manifest::TrialsInSplit(Split split) const {
  std::vector<const TrialRecord*> out;
  for (const auto& t : trials) {
    if (t.split == split) out.push_back(&t);
  }
  return out;
}

std::vector<TrialRecord> ParseProtocol(const fs::path& path, Split split,
                                       const ProtocolLayout& layout) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open protocol " + path.string());

  std::vector<TrialRecord> records;
  std::set<std::string, std::less<>> seen;
  std::size_t expected_cols = 0;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    const auto cols = SplitWhitespace(line);
    if (cols.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (expected_cols == 0) expected_cols = cols.size();
    const int key = ResolveColumn(layout.key_col, cols.size());
    const int label = ResolveColumn(layout.label_col, cols.size());
    if (cols.size() != expected_cols || key < 0 || label < 0 ||
        key >= static_cast<int>(cols.size()) || label >= static_cast<int>(cols.size())) {
      throw Error(ErrorCode::kMalformedLine,
                  where + ": " + std::to_string(cols.size()) + " columns, expected " +
                      std::to_string(expected_cols) + " covering key column " +
                      std::to_string(layout.key_col) + " and label column " +
                      std::to_string(layout.label_col));
    }
    const auto authenticity = ParseAuthenticity(cols[static_cast<std::size_t>(label)]);
    if (!authenticity) {
      throw Error(ErrorCode::kUnknownLabel,
                  where + ": label '" + cols[static_cast<std::size_t>(label)] + "'");
    }
    const std::string& utt = cols[static_cast<std::size_t>(key)];
    if (!seen.insert(utt).second) {
      throw Error(ErrorCode::kDuplicateUttId, where + ": '" + utt + "'");
    }
    TrialRecord r;
    r.utt_id = utt;
    r.audio_path = (layout.audio_root / (utt + layout.audio_ext)).lexically_normal();
    r.authenticity = *authenticity;
    r.split = split;
    records.push_back(std::move(r));
  }
  return records;
}

CategoryAliases DefaultCategoryAliases() {
  using K = NoiseCategoryKind;
  return {
      {"domestic", K::kDomestic},   {"home", K::kDomestic},
      {"kitchen", K::kDomestic},    {"livingroom", K::kDomestic},
      {"appliance", K::kDomestic},  {"vacuumcleaner", K::kDomestic},
      {"washer", K::kDomestic},     {"office", K::kOffice},
      {"typing", K::kOffice},       {"copymachine", K::kOffice},
      {"airconditioner", K::kOffice}, {"babble", K::kOffice},
      {"outdoor", K::kOutdoor},     {"park", K::kOutdoor},
      {"street", K::kOutdoor},      {"square", K::kOutdoor},
      {"neighbor", K::kOutdoor},    {"transport", K::kTransport},
      {"traffic", K::kTransport},   {"car", K::kTransport},
      {"bus", K::kTransport},       {"metro", K::kTransport},
      {"train", K::kTransport},     {"station", K::kTransport},
      {"airport", K::kTransport},   {"aircraft", K::kTransport},
  };
}

std::vector<NoiseClip> ScanNoiseCatalog(const fs::path& root,
                                        const CategoryAliases& aliases, int jobs) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kIoFailure, "noise root " + root.string() + " is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && IsWav(entry.path())) files.push_back(entry.path());
  }
  if (files.empty()) {
    throw Error(ErrorCode::kEmptyCatalog, "no .wav files under " + root.string());
  }
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(root).generic_string() <
           b.lexically_relative(root).generic_string();
  });

  std::vector<NoiseClip> clips(files.size());
  ParallelFor(files.size(), jobs, [&](std::size_t i) {
    const fs::path rel = files[i].lexically_relative(root);
    NoiseClip& c = clips[i];
    c.clip_id = (rel.parent_path() / rel.stem()).generic_string();
    c.audio_path = files[i].lexically_normal();
    if (rel.has_parent_path() && !rel.parent_path().empty()) {
      const std::string dir = rel.parent_path().filename().string();
      auto it = aliases.find(Lower(dir));
      c.category = it != aliases.end() ? NoiseCategory{it->second, ""}
                                       : NoiseCategory{NoiseCategoryKind::kOther, dir};
    } else {
      c.category = {NoiseCategoryKind::kOther, "uncategorized"};
    }
    c.duration_s = AudioDuration(files[i]);
  });
  return clips;
}

std::vector<TrialRecord> ScanSpeech(const std::vector<ProtocolSource>& protocols,
                                    const ProtocolLayout& layout, int jobs) {
  std::vector<TrialRecord> trials;
  std::set<std::string, std::less<>> seen;
  for (const auto& src : protocols) {
    for (auto& r : ParseProtocol(src.path, src.split, layout)) {
      if (!seen.insert(r.utt_id).second) {
        throw Error(ErrorCode::kDuplicateUttId,
                    "'" + r.utt_id + "' appears in more than one protocol (again in " +
                        src.path.string() + ")");
      }
      trials.push_back(std::move(r));
    }
  }
  ParallelFor(trials.size(), jobs,
              [&](std::size_t i) { trials[i].duration_s = AudioDuration(trials[i].audio_path); });
  return trials;
}

void ComputeDigests(Manifest* manifest, int jobs) {
  std::vector<std::string> paths;
  for (const auto& t : manifest->trials) paths.push_back(t.audio_path.generic_string());
  for (const auto& n : manifest->noises) paths.push_back(n.audio_path.generic_string());
  std::vector<std::string> digests(paths.size());
  ParallelFor(paths.size(), jobs, [&](std::size_t i) { digests[i] = Sha256FileHex(paths[i]); });
  for (std::size_t i = 0; i < paths.size(); ++i) {
    manifest->source_digests[paths[i]] = digests[i];
  }
}

std::vector<std::string> VerifyDigests(const Manifest& manifest, int jobs) {
  std::vector<std::pair<std::string, std::string>> entries(manifest.source_digests.begin(),
                                                           manifest.source_digests.end());
  std::vector<char> bad(entries.size(), 0);
  ParallelFor(entries.size(), jobs, [&](std::size_t i) {
    try {
      bad[i] = Sha256FileHex(entries[i].first) != entries[i].second;
    } catch (const Error&) {
      bad[i] = 1;
    }
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (bad[i]) out.push_back(entries[i].first);
  }
  return out;
}

std::string ReproducibleTimestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string SerializeManifest(const Manifest& manifest) {
  std::string out;
  Json header;
  header["format_version"] = manifest.header.format_version;
  header["created_utc"] = manifest.header.created_utc;
  header["canonical_rate_hz"] = manifest.header.canonical_rate_hz;
  out += header.dump() + "\n";
  for (const auto& t : manifest.trials) out += TrialToJson(t, manifest).dump() + "\n";
  for (const auto& n : manifest.noises) out += NoiseToJson(n, manifest).dump() + "\n";
  return out;
}

void WriteManifest(const Manifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << SerializeManifest(manifest);
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

Manifest ParseManifest(std::string_view text) {
  Manifest m;
  std::set<std::string, std::less<>> utts, clips;
  std::istringstream in{std::string(text)};
  std::string line;
  bool have_header = false;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    Json obj;
    try {
      obj = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      SchemaError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) SchemaError(line_no, "record is not an object");

    if (!have_header) {
      m.header.format_version = Field<int>(obj, "format_version", line_no);
      m.header.created_utc = Field<std::string>(obj, "created_utc", line_no);
      m.header.canonical_rate_hz = Field<int>(obj, "canonical_rate_hz", line_no);
      if (m.header.format_version != 1) {
        SchemaError(line_no, "unsupported format_version " +
                                 std::to_string(m.header.format_version));
      }
      if (m.header.canonical_rate_hz <= 0) SchemaError(line_no, "canonical_rate_hz must be > 0");
      have_header = true;
      continue;
    }

    const auto kind = Field<std::string>(obj, "kind", line_no);
    if (kind == "trial") {
      TrialRecord t;
      t.utt_id = Field<std::string>(obj, "utt_id", line_no);
      t.audio_path = Field<std::string>(obj, "audio_path", line_no);
      const auto auth = ParseAuthenticity(Field<std::string>(obj, "authenticity", line_no));
      if (!auth) SchemaError(line_no, "authenticity must be 'bonafide' or 'spoof'");
      t.authenticity = *auth;
      const auto split = ParseSplit(Field<std::string>(obj, "split", line_no));
      if (!split) SchemaError(line_no, "split must be train, dev or test");
      t.split = *split;
      t.duration_s = Field<double>(obj, "duration_s", line_no);
      if (t.utt_id.empty()) SchemaError(line_no, "empty utt_id");
      if (!utts.insert(t.utt_id).second) {
        throw Error(ErrorCode::kDuplicateUttId,
                    "line " + std::to_string(line_no) + ": '" + t.utt_id + "'");
      }
      ReadDigest(obj, t.audio_path.generic_string(), line_no, &m);
      m.trials.push_back(std::move(t));
    } else if (kind == "noise") {
      NoiseClip n;
      n.clip_id = Field<std::string>(obj, "clip_id", line_no);
      n.audio_path = Field<std::string>(obj, "audio_path", line_no);
      try {
        n.category = NoiseCategory::Parse(Field<std::string>(obj, "category", line_no));
      } catch (const Error& e) {
        SchemaError(line_no, e.what());
      }
      n.duration_s = Field<double>(obj, "duration_s", line_no);
      if (!(n.duration_s > 0.0)) SchemaError(line_no, "noise duration_s must be > 0");
      if (!clips.insert(n.clip_id).second) {
        SchemaError(line_no, "duplicate clip_id '" + n.clip_id + "'");
      }
      ReadDigest(obj, n.audio_path.generic_string(), line_no, &m);
      m.noises.push_back(std::move(n));
    } else {
      SchemaError(line_no, "unknown record kind '" + kind + "'");
    }
  }
  if (!have_header) SchemaError(1, "missing header line");
  return m;
}

Manifest ReadManifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseManifest(buf.str());
}

std::string CanonicalManifestDigest(const Manifest& manifest) {
  std::vector<std::string> lines;
  for (const auto& t : manifest.trials) lines.push_back(TrialToJson(t, manifest).dump());
  for (const auto& n : manifest.noises) lines.push_back(NoiseToJson(n, manifest).dump());
  std::sort(lines.begin(), lines.end());
  std::string joined = "rate=" + std::to_string(manifest.header.canonical_rate_hz) + "\n";
  for (const auto& l : lines) joined += l + "\n";
  return Sha256Hex(joined);
}

}  // namespace snrbench
