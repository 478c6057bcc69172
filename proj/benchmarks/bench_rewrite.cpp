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

#include <benchmark/benchmark.h>

#include "secxml/policy.hpp"
#include "secxml/rewriter.hpp"
#include "secxml/security_view.hpp"
#include "secxml/xml_io.hpp"
#include "workload.hpp"

namespace {

using namespace secxml;

void BM_RewriteDelete(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  UpdateSpec spec = testing::chain_policy(n);
  UpdateOp op = testing::chain_delete();
  std::size_t size = 0;
  for (auto _ : state) {
    RewrittenOp r = rewrite_update(spec, op);
    size = node_count(r.guard);
    benchmark::DoNotOptimize(r);
  }
  state.counters["annotations"] = static_cast<double>(n);
  state.counters["guard_nodes"] = static_cast<double>(size);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RewriteDelete)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);

void BM_BuildUpdatability(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  auto dtd = testing::chain_dtd(n);
  UpdateSpec spec(dtd);
  UpdateType ut{UpdateKind::InsertInto, testing::chain_type(0), {}};
  for (std::size_t i = 0; i < n; ++i) {
    spec.add(testing::chain_type(i), ut, i % 2 ? AnnotationValue::deny_closed() : AnnotationValue::allow());
  }
  for (auto _ : state) benchmark::DoNotOptimize(build_updatability(spec, ut));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildUpdatability)->RangeMultiplier(10)->Range(10, 10000)->Complexity(benchmark::oN);

// Evaluation of a rewritten delete over a chain document of depth d.
void BM_EvaluateRewritten(benchmark::State& state) {
  auto depth = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t kTypes = 10;
  UpdateSpec spec = testing::chain_policy(kTypes);
  XmlTree tree("r");
  NodeId at = tree.root();
  for (std::size_t i = 0; i < depth; ++i) at = tree.append_element(at, testing::chain_type(i % kTypes));
  RewrittenOp r = rewrite_update(spec, testing::chain_delete());
  for (auto _ : state) benchmark::DoNotOptimize(eval(r.op.target, tree, tree.root()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvaluateRewritten)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();
