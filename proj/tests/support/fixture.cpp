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

#include "fixture.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>

#include "advmask/error.hpp"
#include "advmask/train.hpp"
#include "advmask_cli/commands.hpp"

namespace advmask::testing {
namespace fs = std::filesystem;

fs::path fixture_dir() {
  static const fs::path dir = [] {
    if (const char* env = std::getenv("ADVMASK_FIXTURE_DIR"); env && fs::exists(fs::path(env) / "model.json"))
      return fs::path(env);
    const fs::path cache = fs::temp_directory_path() / "advmask-test-fixture";
    if (!fs::exists(cache / "model.json")) {
      std::cerr << "[fixture] training model into " << cache << "\n";
      std::ostringstream out, err;
      const int code = cli::run_cli({"train-asr", "-o", cache.string()}, out, err);
      if (code != 0) throw Error("fixture training failed: " + err.str());
    }
    return cache;
  }();
  return dir;
}

const AcousticModel& fixture_model() {
  static const AcousticModel model = load_model(fixture_dir() / "model.json");
  return model;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("advmask-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace advmask::testing
