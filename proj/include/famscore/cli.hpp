/*
 * Copyright 2026 The famscore Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "famscore/core.hpp"
#include "famscore/methods.hpp"
#include "famscore/simulator.hpp"

namespace famscore::cli {

inline constexpr std::string_view kVersion = "0.1.0";

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kNumericalError = 3;

/// Runs one command line (without the program name). Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// --- bench ---------------------------------------------------------------

inline constexpr Index kDeskSnps = 5000;
inline constexpr Index kFullScaleSnps = 20000;

struct BenchOptions {
    std::vector<Index> sizes = {500, 1000, 2000};
    std::vector<sim::Design> designs = {sim::Design::Balanced, sim::Design::Unbalanced};
    std::vector<double> props = {0.2, 0.5, 0.8};
    std::vector<methods::Method> methods;
    int replicates = 3;
    std::uint64_t seed = 0;
    sim::SimConfig base;  // snps, fst, family size, ...; individuals/prop/design/seed are set per cell
    Index components = 5;
    unsigned threads = 1;
};

struct BenchRow {
    sim::Design design = sim::Design::Balanced;
    Index n = 0;
    double prop = 0.0;  // after rounding to whole families
    methods::Method method = methods::Method::Naive;
    int replicate = 0;  // 1-based
    double swiss = 0.0;  // NaN when the method failed numerically
    double rse = 0.0;
};

/// Seed of one grid cell replicate, derived from the run seed so cells can be
/// computed in any order.
std::uint64_t cell_seed(std::uint64_t seed, sim::Design design, Index n, double prop, int replicate);

/// Rows ordered by design, n, prop, replicate, then method. Warnings about
/// numerical failures are appended to `warnings` when given.
std::vector<BenchRow> run_bench(const BenchOptions& options, std::vector<std::string>* warnings = nullptr);

/// design,n,prop,method,replicate,swiss,rse
std::string format_bench_csv(const std::vector<BenchRow>& rows);
/// design,n,prop,method,replicates,swiss,rse with means over replicates.
std::string format_bench_means_csv(const std::vector<BenchRow>& rows);

}  // namespace famscore::cli
