/*
 * Copyright 2026 The advmask Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>

#include "advmask/audio.hpp"

namespace advmask {

/// Reads a PCM 16-bit mono little-endian WAV at 8000, 16000 or 48000 Hz.
/// Samples are scaled by 1/32768. Throws IoError for a missing file and
/// FormatError naming the offending header field otherwise.
AudioClip read_wav(const std::filesystem::path& path);

/// Writes PCM 16-bit mono. Samples are rounded to the nearest code and
/// saturated to [-32768, 32767].
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

bool is_supported_wav_rate(int rate) noexcept;

}  // namespace advmask
