// Copyright 2026 The hamrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace hamrec {

/// Derives an independent stream seed from a root seed and a tag.
/// Streams with distinct tags are statistically independent, so shot
/// synthesis can fan out per (state, qubit) without order-dependent output.
uint64_t derive_stream_seed(uint64_t root_seed, const std::string& tag);

/// Deterministic Gaussian stream. mt19937_64 is bit-exact across platforms;
/// Box-Muller is implemented here because std::normal_distribution is not.
class GaussianStream {
 public:
  explicit GaussianStream(uint64_t seed) : engine_(seed) {}

  double next();

  /// Uniform in [0, 1).
  double next_uniform();

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace hamrec
