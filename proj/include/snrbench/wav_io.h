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

#ifndef SNRBENCH_WAV_IO_H_
#define SNRBENCH_WAV_IO_H_

#include <filesystem>

#include "snrbench/audio_buffer.h"

namespace snrbench {

enum class WavBitDepth { kPcm16, kFloat32 };

/// Reads a little-endian RIFF/WAVE file with a 16-bit PCM (format 1) or
/// 32-bit IEEE float (format 3) payload. Multi-channel input is downmixed by
/// the arithmetic mean of the channels; 16-bit samples are scaled by 1/32768.
/// Unknown chunks are skipped. WAVE_FORMAT_EXTENSIBLE is accepted when its
/// subformat is PCM or float.
AudioBuffer DecodeWav(const std::filesystem::path& path);

/// Writes a mono file. 16-bit output rejects any |sample| > 1 with
/// ClippingDetected; a sample of exactly 1.0 is stored as 32767.
void EncodeWav(const AudioBuffer& buffer, const std::filesystem::path& path,
               WavBitDepth bit_depth);

}  // namespace snrbench

#endif  // SNRBENCH_WAV_IO_H_
