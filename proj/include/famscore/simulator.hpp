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
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"

namespace famscore::sim {

using Rng = std::mt19937_64;

enum class Design { Balanced, Unbalanced };

/// Simulation settings. Every dataset is a function of these fields alone.
///
/// Draw order of the single RNG stream (seeded with `seed`):
///   1. ancestral MAFs, one uniform per SNP;
///   2. Balding-Nichols frequencies, K beta draws per SNP;
///   3. founder latent values and genotypes, in chunks of whole LD blocks
///      (per block: its sign, then each founder's AR chain, then rank ties);
///   4. parent selection, one shuffle per stratum;
///   5. per family in plan order: haplotype phasing of both parents, then
///      maternal and paternal meioses for each child.
struct SimConfig {
    Index snps = 20000;
    Index block = 20;
    double rho = 0.2;
    Index individuals = 500;
    int strata = 5;
    double fst = 0.01;  // continental-scale differentiation
    double maf_a = 0.38;
    double maf_b = 0.50;
    double prop = 0.2;
    std::size_t family_size = 3;
    Design design = Design::Balanced;
    double mean_recombinations = 30.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct FamilySpec {
    int stratum;  // 1-based
    std::size_t size;
};

/// Who gets simulated: unrelated individuals per stratum and the sibships.
struct DesignPlan {
    std::vector<std::size_t> singletons_per_stratum;
    std::vector<FamilySpec> families;

    std::size_t total() const;
};

/// Nearest prop for which individuals * prop is a multiple of family_size.
double nearest_feasible_prop(Index individuals, double prop, std::size_t family_size);

/// Throws InfeasibleDesign (with the nearest feasible prop) when
/// individuals * prop is not a whole number of families.
DesignPlan plan_design(const SimConfig& cfg);

struct SimOutput {
    GenotypeMatrix genotypes;
    std::vector<int> strata;  // 1..K per individual
    FamilyStructure pedigree;
    Eigen::MatrixXd freqs;  // SNPs x K
};

SimOutput simulate_dataset(const SimConfig& cfg);
SimOutput simulate_design(const SimConfig& cfg, const DesignPlan& plan);

// --- building blocks -----------------------------------------------------

/// Inverse CDF of the increasing triangular density on [a, b].
double half_triangular_quantile(double u, double a, double b);

std::vector<double> draw_ancestral_mafs(Index count, double a, double b, Rng& rng);

/// K Beta(q (1 - F) / F, (1 - q)(1 - F) / F) draws.
std::vector<double> balding_nichols_freqs(double q, int strata, double fst, Rng& rng);

struct LatentBlocks {
    Eigen::MatrixXd z;            // individuals x SNPs, marginally N(0, 1)
    std::vector<int> block_signs;  // +1 / -1 per block, shared by all individuals
};

/// AR(1) chains restarted at every block boundary; a short final block is
/// used when block does not divide the SNP count.
LatentBlocks simulate_latent_blocks(Index individuals, Index snps, double rho, Index block, Rng& rng);

/// Per SNP and stratum, ranks the latent values and cuts them at the HWE
/// proportions of that stratum's frequency. strata are 1-based.
GenotypeValues latent_to_genotypes(const Eigen::MatrixXd& z, const std::vector<int>& strata,
                                   const Eigen::MatrixXd& freqs, Rng& rng);

struct Founder {
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> genotypes;
    int stratum;
};

struct Sibship {
    GenotypeValues children;     // SNPs x n_f
    std::vector<int> crossovers;  // per meiosis, maternal then paternal for each child
};

Sibship simulate_sibship(const Founder& mother, const Founder& father, std::size_t family_size,
                         double mean_recombinations, Rng& rng);

std::string to_string(Design d);
Design parse_design(const std::string& s);

}  // namespace famscore::sim
