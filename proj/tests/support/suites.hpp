// Copyright 2026 The secxml Authors
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

// Randomised cross-checks shared by the property tests and the acceptance
// gate. Each suite draws every sample from one seed and reports the first
// mismatch with enough context to replay it.

#include <cstddef>
#include <cstdint>
#include <string>

namespace secxml::testing {

struct SuiteResult {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  /// Samples whose expected outcome was non-trivial (some node permitted,
  /// selected or hidden), so the check could have caught a difference.
  std::size_t positive = 0;
  std::string first_failure;
  double seconds = 0;

  bool ok() const { return mismatches == 0; }
  std::string summary() const;
};

/// Compiled updatability and prohibition predicates against the ancestor
/// walks, at every node of each sampled (spec, tree, update type).
SuiteResult updatability_suite(std::uint64_t seed, std::size_t samples);

/// Rewritten targets select exactly the permitted part of the original.
SuiteResult rewrite_soundness_suite(std::uint64_t seed, std::size_t samples);

/// Adding Y annotations never shrinks what a rewritten target selects.
SuiteResult monotonicity_suite(std::uint64_t seed, std::size_t samples);

/// Accessibility predicate, view extraction and view schema against the
/// access walk.
SuiteResult accessibility_suite(std::uint64_t seed, std::size_t samples);

/// Queries on the materialised view against rewritten queries on the
/// document.
SuiteResult view_query_suite(std::uint64_t seed, std::size_t samples);

/// The secure pipeline selects what the update policy permits on the view,
/// and reduces to plain rewriting when everything is readable.
SuiteResult secure_pipeline_suite(std::uint64_t seed, std::size_t samples);

/// Updates that end in a dynamic error or a schema rejection leave the
/// document unchanged. Draws until `samples` such updates were seen.
SuiteResult atomicity_suite(std::uint64_t seed, std::size_t samples);

}  // namespace secxml::testing
