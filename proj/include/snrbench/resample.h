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

#ifndef SNRBENCH_RESAMPLE_H_
#define SNRBENCH_RESAMPLE_H_

#include "snrbench/audio_buffer.h"

namespace snrbench {

/// Band-limited sample-rate conversion with a Kaiser-windowed sinc kernel.
/// The kernel is designed for at least 80 dB stopband attenuation with the
/// passband edge at 90% of the lower Nyquist frequency. Output length is
/// round(input_length * target_rate / input_rate). Converting to the input
/// rate returns an exact copy.
AudioBuffer Resample(const AudioBuffer& input, int target_rate);

}  // namespace snrbench

#endif  // SNRBENCH_RESAMPLE_H_
