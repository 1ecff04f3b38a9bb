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

#ifndef SNRBENCH_MANIFEST_H_
#define SNRBENCH_MANIFEST_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snrbench {

enum class Authenticity { kBonafide, kSpoof };
enum class Split { kTrain, kDev, kTest };

std::string_view ToString(Authenticity a);
std::string_view ToString(Split s);
std::optional<Authenticity> ParseAuthenticity(std::string_view s);
std::optional<Split> ParseSplit(std::string_view s);

struct TrialRecord {
  std::string utt_id;
  std::filesystem::path audio_path;
  Authenticity authenticity = Authenticity::kBonafide;
  Split split = Split::kTrain;
  // Filled from the audio file at scan time; needed to place segments.
  double duration_s = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

enum class NoiseCategoryKind { kDomestic, kOffice, kOutdoor, kTransport, kOther };

/// One of the four named ambient classes, or a verbatim directory name.
struct NoiseCategory {
  NoiseCategoryKind kind = NoiseCategoryKind::kOther;
  std::string other_name;

  /// "domestic", "office", "outdoor", "transport", or "other:<name>".
  std::string ToString() const;
  static NoiseCategory Parse(std::string_view s);

  friend bool operator==(const NoiseCategory&, const NoiseCategory&) = default;
};

struct NoiseClip {
  std::string clip_id;
  std::filesystem::path audio_path;
  NoiseCategory category;
  double duration_s = 0.0;

  friend bool operator==(const NoiseClip&, const NoiseClip&) = default;
};

struct ManifestHeader {
  int format_version = 1;
  std::string created_utc = "1970-01-01T00:00:00Z";
  int canonical_rate_hz = 16000;

  friend bool operator==(const ManifestHeader&, const ManifestHeader&) = default;
};

struct Manifest {
  ManifestHeader header;
  std::vector<TrialRecord> trials;
  std::vector<NoiseClip> noises;
  // audio path (as stored in the records) -> SHA-256 of the file at scan time
  std::map<std::string, std::string> source_digests;

  std::vector<const TrialRecord*> TrialsInSplit(Split split) const;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Where the utterance key and the label sit in a whitespace-separated
/// protocol line. Negative indices count from the end (-1 = last column).
struct ProtocolLayout {
  int key_col = 1;
  int label_col = -1;
  std::filesystem::path audio_root;
  std::string audio_ext = ".wav";
};

/// One TrialRecord per non-empty line, in file order. Every line must have
/// the column count of the first one. audio_path is audio_root/<key><ext>;
/// duration_s is left at 0 (see ScanSpeech).
std::vector<TrialRecord> ParseProtocol(const std::filesystem::path& path,
                                       Split split, const ProtocolLayout& layout);

/// Lowercase directory name -> named class.
using CategoryAliases = std::map<std::string, NoiseCategoryKind, std::less<>>;
CategoryAliases DefaultCategoryAliases();

/// Lists *.wav files under root (recursively), sorted by relative path.
/// Category is taken from the immediate parent directory, case-folded and
/// looked up in `aliases`; unmatched names are kept verbatim as other(name).
/// Files directly under root get other("uncategorized"). Durations are read
/// from the files.
std::vector<NoiseClip> ScanNoiseCatalog(const std::filesystem::path& root,
                                        const CategoryAliases& aliases,
                                        int jobs = 1);

struct ProtocolSource {
  std::filesystem::path path;
  Split split = Split::kTrain;
};

/// Parses all protocols and fills in durations. Utterance ids repeated
/// across files are rejected.
std::vector<TrialRecord> ScanSpeech(const std::vector<ProtocolSource>& protocols,
                                    const ProtocolLayout& layout, int jobs = 1);

/// Hashes every referenced audio file into manifest->source_digests.
void ComputeDigests(Manifest* manifest, int jobs = 1);

/// Paths whose current content no longer matches the recorded digest
/// (missing files included).
std::vector<std::string> VerifyDigests(const Manifest& manifest, int jobs = 1);

/// Header creation time: SOURCE_DATE_EPOCH when set, else the Unix epoch,
/// so that repeated scans are byte-identical.
std::string ReproducibleTimestamp();

/// JSON lines: a header object, then one object per trial and per noise clip
/// with a "kind" discriminator.
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);
std::string SerializeManifest(const Manifest& manifest);
Manifest ReadManifest(const std::filesystem::path& path);
Manifest ParseManifest(std::string_view text);

/// Digest of the manifest content independent of record order and of the
/// header timestamp.
std::string CanonicalManifestDigest(const Manifest& manifest);

}  // namespace snrbench

#endif  // SNRBENCH_MANIFEST_H_
