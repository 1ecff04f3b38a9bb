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

#include "snrbench/wav_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "snrbench/error.h"

namespace snrbench {
namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T ReadLe(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void AppendLe(std::vector<std::uint8_t>* out, T v) {
  std::uint8_t bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  out->insert(out->end(), bytes, bytes + sizeof(T));
}

void AppendTag(std::vector<std::uint8_t>* out, const char (&tag)[5]) {
  out->insert(out->end(), tag, tag + 4);
}

std::vector<std::uint8_t> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

AudioBuffer DecodeWav(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = ReadAll(path);
  const std::string where = " in " + path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedContainer, "missing RIFF/WAVE header" + where);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadLe<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) {
        throw Error(ErrorCode::kMalformedContainer, "truncated fmt chunk" + where);
      }
      format = ReadLe<std::uint16_t>(chunk + 8);
      channels = ReadLe<std::uint16_t>(chunk + 10);
      rate = ReadLe<std::uint32_t>(chunk + 12);
      bits = ReadLe<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) {
          throw Error(ErrorCode::kMalformedContainer,
                      "truncated WAVE_FORMAT_EXTENSIBLE fmt chunk" + where);
        }
        // First two bytes of the subformat GUID carry the format code.
        format = ReadLe<std::uint16_t>(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Streaming writers sometimes leave the size field oversized.
      data_size = std::min<std::size_t>(size, bytes.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }

  if (!have_fmt) {
    throw Error(ErrorCode::kMalformedContainer, "no fmt chunk" + where);
  }
  if (data == nullptr) {
    throw Error(ErrorCode::kMalformedContainer, "no data chunk" + where);
  }
  if (channels == 0 || rate == 0) {
    throw Error(ErrorCode::kMalformedContainer,
                "zero channels or sample rate" + where);
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "format code " + std::to_string(format) + " with " +
                    std::to_string(bits) + " bits per sample" + where);
  }

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * bits / 8;
  const std::size_t frames = data_size / frame_bytes;
  if (frames == 0) {
    throw Error(ErrorCode::kEmptyPayload, "data chunk holds no frames" + where);
  }

  std::vector<double> samples(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::uint8_t* frame = data + f * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      if (pcm16) {
        sum += ReadLe<std::int16_t>(frame + 2 * c) / 32768.0;
      } else {
        sum += ReadLe<float>(frame + 4 * c);
      }
    }
    samples[f] = channels == 1 ? sum : sum / channels;
    if (!std::isfinite(samples[f])) {
      throw Error(ErrorCode::kMalformedContainer,
                  "non-finite sample at frame " + std::to_string(f) + where);
    }
  }
  return AudioBuffer(std::move(samples), static_cast<int>(rate));
}

void EncodeWav(const AudioBuffer& buffer, const std::filesystem::path& path,
               WavBitDepth bit_depth) {
  const bool pcm16 = bit_depth == WavBitDepth::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(buffer.size() * block_align);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  AppendTag(&out, "RIFF");
  AppendLe<std::uint32_t>(&out, 36 + data_size);
  AppendTag(&out, "WAVE");
  AppendTag(&out, "fmt ");
  AppendLe<std::uint32_t>(&out, 16);
  AppendLe<std::uint16_t>(&out, pcm16 ? kFormatPcm : kFormatFloat);
  AppendLe<std::uint16_t>(&out, 1);
  AppendLe<std::uint32_t>(&out, static_cast<std::uint32_t>(buffer.sample_rate()));
  AppendLe<std::uint32_t>(&out, static_cast<std::uint32_t>(buffer.sample_rate()) *
                                    block_align);
  AppendLe<std::uint16_t>(&out, block_align);
  AppendLe<std::uint16_t>(&out, bits);
  AppendTag(&out, "data");
  AppendLe<std::uint32_t>(&out, data_size);

  const auto samples = buffer.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double s = samples[i];
    if (pcm16) {
      if (std::abs(s) > 1.0) {
        throw Error(ErrorCode::kClippingDetected,
                    "sample " + std::to_string(i) + " = " + std::to_string(s) +
                        " exceeds 16-bit range; normalize before encoding");
      }
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      AppendLe<std::int16_t>(&out, static_cast<std::int16_t>(scaled));
    } else {
      AppendLe<float>(&out, static_cast<float>(s));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  }
  file.write(reinterpret_cast<const char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
  if (!file) {
    throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
  }
}

}  // namespace snrbench
