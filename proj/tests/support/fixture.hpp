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

#include "advmask/acoustic_model.hpp"

namespace advmask::testing {

/// Directory holding the trained fixture model (model.json, benign/).
///
/// Uses ADVMASK_FIXTURE_DIR when it contains a model; otherwise trains one
/// with the default train-asr configuration into a cache directory under the
/// system temp path.
std::filesystem::path fixture_dir();

/// The fixture model, loaded once per process.
const AcousticModel& fixture_model();

/// Fresh empty directory under the system temp path.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace advmask::testing
