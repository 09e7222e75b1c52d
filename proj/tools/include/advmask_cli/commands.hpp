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
#include <iosfwd>
#include <string>
#include <vector>

#include "advmask/error.hpp"
#include "advmask_cli/config.hpp"

namespace advmask::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitTraining = 3,
  kExitPrecondition = 4,
};

/// Training ran but the model missed the configured accuracy floor.
class TrainingFailure : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kResolvedConfigName = "resolved.ini";
inline constexpr const char* kArtifactHashesName = "artifacts.sha256";

/// Runs one subcommand against a resolved configuration, writing artifacts,
/// the resolved-config sidecar and the artifact hash list into
/// paths.out_dir. Throws on failure.
void run_command(const ExperimentConfig& cfg, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace advmask::cli
