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

#include "famscore/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "famscore/error.hpp"

namespace famscore::sim {

namespace {

void invalid(const std::string& message) { throw Error(ErrorCode::InvalidArgument, message); }

using Haplotypes = std::array<std::vector<std::int8_t>, 2>;

// Splits heterozygous sites between the two grandparental haplotypes.
Haplotypes phase(const Founder& parent, Rng& rng) {
    const auto p = static_cast<std::size_t>(parent.genotypes.size());
    Haplotypes h{std::vector<std::int8_t>(p), std::vector<std::int8_t>(p)};
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < p; ++i) {
        const auto g = parent.genotypes(static_cast<Index>(i));
        if (g == 1) {
            const std::int8_t first = coin(rng) ? 1 : 0;
            h[0][i] = first;
            h[1][i] = static_cast<std::int8_t>(1 - first);
        } else {
            h[0][i] = h[1][i] = static_cast<std::int8_t>(g / 2);
        }
    }
    return h;
}

// One meiosis: crossovers between consecutive SNPs occur independently with
// probability rate, generated as geometric gaps.
std::vector<std::int8_t> meiosis(const Haplotypes& h, double rate, Rng& rng, int& crossovers) {
    const std::size_t p = h[0].size();
    std::vector<std::int8_t> out(p);
    std::bernoulli_distribution coin(0.5);
    int current = coin(rng) ? 1 : 0;
    crossovers = 0;
    std::size_t pos = 0;
    if (rate > 0.0) {
        std::geometric_distribution<long long> gap(rate);
        while (pos < p) {
            // crossover falls between SNP `last` and `last + 1`
            const auto last = pos + static_cast<std::size_t>(gap(rng));
            if (last + 1 >= p) break;
            std::copy(h[current].begin() + static_cast<std::ptrdiff_t>(pos),
                      h[current].begin() + static_cast<std::ptrdiff_t>(last + 1),
                      out.begin() + static_cast<std::ptrdiff_t>(pos));
            current = 1 - current;
            ++crossovers;
            pos = last + 1;
        }
    }
    std::copy(h[current].begin() + static_cast<std::ptrdiff_t>(pos), h[current].end(),
              out.begin() + static_cast<std::ptrdiff_t>(pos));
    return out;
}

}  // namespace

void SimConfig::validate() const {
    if (snps < 2) invalid("snps must be at least 2");
    if (block < 1) invalid("block must be positive");
    if (!(rho > 0.0 && rho < 1.0)) invalid("rho must lie in (0, 1)");
    if (individuals < 2) invalid("individuals must be at least 2");
    if (strata < 1) invalid("strata must be positive");
    if (!(fst > 0.0 && fst < 1.0)) invalid("fst must lie in (0, 1)");
    if (!(maf_a >= 0.0 && maf_a < maf_b && maf_b <= 0.5)) invalid("need 0 <= maf_a < maf_b <= 0.5");
    if (!(prop >= 0.0 && prop < 1.0)) invalid("prop must lie in [0, 1)");
    if (family_size < 2) invalid("family_size must be at least 2");
    if (!(mean_recombinations >= 0.0 && mean_recombinations <= static_cast<double>(snps - 1))) {
        invalid("mean_recombinations must lie in [0, snps - 1]");
    }
}

std::size_t DesignPlan::total() const {
    std::size_t n = std::accumulate(singletons_per_stratum.begin(), singletons_per_stratum.end(), std::size_t{0});
    for (const auto& f : families) n += f.size;
    return n;
}

double nearest_feasible_prop(Index individuals, double prop, std::size_t family_size) {
    const double target = static_cast<double>(individuals) * prop / static_cast<double>(family_size);
    const double families = std::round(target);
    return families * static_cast<double>(family_size) / static_cast<double>(individuals);
}

DesignPlan plan_design(const SimConfig& cfg) {
    cfg.validate();
    const double target = static_cast<double>(cfg.individuals) * cfg.prop;
    const double members = std::round(target);
    const auto nf = cfg.family_size;
    if (std::abs(target - members) > 1e-6 || static_cast<std::size_t>(members) % nf != 0) {
        const double suggestion = nearest_feasible_prop(cfg.individuals, cfg.prop, nf);
        const auto feasible_members = static_cast<long long>(std::llround(suggestion * static_cast<double>(cfg.individuals)));
        std::ostringstream msg;
        msg.precision(10);
        msg << "individuals * prop = " << target << " is not a whole number of families of size " << nf
            << "; nearest feasible: " << feasible_members << " members, "
            << feasible_members / static_cast<long long>(nf) << " families, prop = " << suggestion;
        throw Error(ErrorCode::InfeasibleDesign, msg.str());
    }
    const auto n = static_cast<std::size_t>(cfg.individuals);
    const auto k = static_cast<std::size_t>(cfg.strata);
    const std::size_t family_count = static_cast<std::size_t>(members) / nf;

    DesignPlan plan;
    plan.singletons_per_stratum.assign(k, 0);
    if (cfg.design == Design::Balanced) {
        if (n % k != 0) {
            throw Error(ErrorCode::InfeasibleDesign,
                        "balanced design needs individuals divisible by strata (" + std::to_string(n) + " / " +
                            std::to_string(k) + ")");
        }
        const std::size_t per = n / k;
        for (std::size_t s = 0; s < k; ++s) {
            const std::size_t fams = family_count / k + (s < family_count % k ? 1 : 0);
            if (fams * nf > per) throw Error(ErrorCode::InfeasibleDesign, "stratum too small for its families");
            plan.singletons_per_stratum[s] = per - fams * nf;
        }
        for (std::size_t f = 0; f < family_count; ++f) {
            plan.families.push_back({static_cast<int>(f % k) + 1, nf});
        }
    } else {
        const std::size_t singles = n - static_cast<std::size_t>(members);
        for (std::size_t s = 0; s < k; ++s) plan.singletons_per_stratum[s] = singles / k + (s < singles % k ? 1 : 0);
        for (std::size_t f = 0; f < family_count; ++f) plan.families.push_back({1, nf});
    }
    return plan;
}

double half_triangular_quantile(double u, double a, double b) { return a + (b - a) * std::sqrt(u); }

std::vector<double> draw_ancestral_mafs(Index count, double a, double b, Rng& rng) {
    if (!(a < b)) invalid("half-triangular support needs a < b");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& v : out) v = half_triangular_quantile(unif(rng), a, b);
    return out;
}

std::vector<double> balding_nichols_freqs(double q, int strata, double fst, Rng& rng) {
    if (!(q > 0.0 && q < 1.0)) invalid("ancestral frequency must lie in (0, 1)");
    if (!(fst > 0.0 && fst < 1.0)) invalid("fst must lie in (0, 1)");
    const double scale = (1.0 - fst) / fst;
    std::gamma_distribution<double> ga(q * scale, 1.0);
    std::gamma_distribution<double> gb((1.0 - q) * scale, 1.0);
    std::vector<double> out(static_cast<std::size_t>(strata));
    for (auto& v : out) {
        const double x = ga(rng);
        const double y = gb(rng);
        v = std::clamp(x / (x + y), 1e-12, 1.0 - 1e-12);
    }
    return out;
}

LatentBlocks simulate_latent_blocks(Index individuals, Index snps, double rho, Index block, Rng& rng) {
    if (!(rho >= 0.0 && rho < 1.0)) invalid("rho must lie in [0, 1)");
    if (block < 1) invalid("block must be positive");
    LatentBlocks out;
    out.z.resize(individuals, snps);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution flip(0.5);
    const double innovation_sd = std::sqrt(1.0 - rho * rho);
    for (Index start = 0; start < snps; start += block) {
        const Index end = std::min(snps, start + block);
        const int sign = flip(rng) ? -1 : 1;
        out.block_signs.push_back(sign);
        const double r = sign * rho;
        for (Index j = 0; j < individuals; ++j) {
            double prev = normal(rng);
            out.z(j, start) = prev;
            for (Index i = start + 1; i < end; ++i) {
                prev = r * prev + innovation_sd * normal(rng);
                out.z(j, i) = prev;
            }
        }
    }
    return out;
}

GenotypeValues latent_to_genotypes(const Eigen::MatrixXd& z, const std::vector<int>& strata,
                                   const Eigen::MatrixXd& freqs, Rng& rng) {
    const Index n = z.rows();
    const Index p = z.cols();
    if (static_cast<Index>(strata.size()) != n) throw Error(ErrorCode::DimensionMismatch, "one stratum per individual");
    if (freqs.rows() != p) throw Error(ErrorCode::DimensionMismatch, "one frequency row per SNP");
    const Index k = freqs.cols();
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(k));
    for (Index j = 0; j < n; ++j) {
        const int s = strata[static_cast<std::size_t>(j)];
        if (s < 1 || s > k) throw Error(ErrorCode::InvalidArgument, "stratum label out of range", {static_cast<std::size_t>(j)});
        groups[static_cast<std::size_t>(s - 1)].push_back(j);
    }

    GenotypeValues out(p, n);
    std::vector<Index> order;
    std::vector<Index> tie_rank;
    for (Index i = 0; i < p; ++i) {
        bool tie_rank_drawn = false;
        for (Index s = 0; s < k; ++s) {
            const auto& members = groups[static_cast<std::size_t>(s)];
            if (members.empty()) continue;
            order = members;
            auto by_value = [&](Index a, Index b) { return z(a, i) < z(b, i); };
            std::sort(order.begin(), order.end(), by_value);
            const bool ties = std::adjacent_find(order.begin(), order.end(), [&](Index a, Index b) {
                                  return z(a, i) == z(b, i);
                              }) != order.end();
            if (ties) {
                if (!tie_rank_drawn) {
                    tie_rank.resize(static_cast<std::size_t>(n));
                    std::iota(tie_rank.begin(), tie_rank.end(), Index{0});
                    std::shuffle(tie_rank.begin(), tie_rank.end(), rng);
                    tie_rank_drawn = true;
                }
                std::sort(order.begin(), order.end(), [&](Index a, Index b) {
                    if (z(a, i) != z(b, i)) return z(a, i) < z(b, i);
                    return tie_rank[static_cast<std::size_t>(a)] < tie_rank[static_cast<std::size_t>(b)];
                });
            }
            const double q = freqs(i, s);
            const auto m = static_cast<double>(members.size());
            const auto cut0 = static_cast<std::size_t>(std::llround(m * (1.0 - q) * (1.0 - q)));
            const auto cut1 = std::max(cut0, static_cast<std::size_t>(std::llround(m * (1.0 - q * q))));
            for (std::size_t r = 0; r < order.size(); ++r) {
                out(i, order[r]) = static_cast<std::int8_t>(r < cut0 ? 0 : (r < cut1 ? 1 : 2));
            }
        }
    }
    return out;
}

Sibship simulate_sibship(const Founder& mother, const Founder& father, std::size_t family_size,
                         double mean_recombinations, Rng& rng) {
    if (mother.stratum != father.stratum) {
        throw Error(ErrorCode::StratumMismatch, "parents from strata " + std::to_string(mother.stratum) + " and " +
                                                    std::to_string(father.stratum));
    }
    const Index p = mother.genotypes.size();
    if (father.genotypes.size() != p) throw Error(ErrorCode::DimensionMismatch, "parents differ in SNP count");
    if (p < 2) throw Error(ErrorCode::DimensionMismatch, "need at least 2 SNPs");
    const double rate = mean_recombinations / static_cast<double>(p - 1);
    if (!(rate >= 0.0 && rate <= 1.0)) invalid("mean_recombinations must lie in [0, snps - 1]");

    const Haplotypes maternal = phase(mother, rng);
    const Haplotypes paternal = phase(father, rng);
    Sibship out;
    out.children.resize(p, static_cast<Index>(family_size));
    for (std::size_t c = 0; c < family_size; ++c) {
        int cm = 0;
        int cp = 0;
        const auto from_mother = meiosis(maternal, rate, rng, cm);
        const auto from_father = meiosis(paternal, rate, rng, cp);
        out.crossovers.push_back(cm);
        out.crossovers.push_back(cp);
        for (Index i = 0; i < p; ++i) {
            out.children(i, static_cast<Index>(c)) =
                static_cast<std::int8_t>(from_mother[static_cast<std::size_t>(i)] + from_father[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

SimOutput simulate_design(const SimConfig& cfg, const DesignPlan& plan) {
    cfg.validate();
    const auto k = static_cast<std::size_t>(cfg.strata);
    if (plan.singletons_per_stratum.size() != k) {
        throw Error(ErrorCode::DimensionMismatch, "plan must list singletons for every stratum");
    }
    std::vector<std::size_t> families_in(k, 0);
    for (const auto& f : plan.families) {
        if (f.stratum < 1 || static_cast<std::size_t>(f.stratum) > k || f.size < 2) {
            throw Error(ErrorCode::InvalidArgument, "bad family spec in plan");
        }
        ++families_in[static_cast<std::size_t>(f.stratum - 1)];
    }
    if (plan.total() < 2) throw Error(ErrorCode::InfeasibleDesign, "plan has fewer than 2 individuals");

    Rng rng(cfg.seed);
    const Index p = cfg.snps;

    const auto mafs = draw_ancestral_mafs(p, cfg.maf_a, cfg.maf_b, rng);
    Eigen::MatrixXd freqs(p, cfg.strata);
    for (Index i = 0; i < p; ++i) {
        const auto row = balding_nichols_freqs(mafs[static_cast<std::size_t>(i)], cfg.strata, cfg.fst, rng);
        for (std::size_t s = 0; s < k; ++s) freqs(i, static_cast<Index>(s)) = row[s];
    }

    // founders ordered by stratum
    std::vector<int> founder_strata;
    std::vector<std::vector<Index>> founders_of(k);
    for (std::size_t s = 0; s < k; ++s) {
        const std::size_t count = plan.singletons_per_stratum[s] + 2 * families_in[s];
        for (std::size_t c = 0; c < count; ++c) {
            founders_of[s].push_back(static_cast<Index>(founder_strata.size()));
            founder_strata.push_back(static_cast<int>(s) + 1);
        }
    }
    const auto n_founders = static_cast<Index>(founder_strata.size());
    GenotypeValues founders(p, n_founders);
    const Index chunk = std::max<Index>(1, 1000 / cfg.block) * cfg.block;
    for (Index start = 0; start < p; start += chunk) {
        const Index len = std::min(chunk, p - start);
        const auto latent = simulate_latent_blocks(n_founders, len, cfg.rho, cfg.block, rng);
        founders.middleRows(start, len) =
            latent_to_genotypes(latent.z, founder_strata, freqs.middleRows(start, len), rng);
    }

    std::vector<IndexList> parents_of(k);
    std::vector<IndexList> singles_of(k);
    for (std::size_t s = 0; s < k; ++s) {
        auto pool = founders_of[s];
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t parents = 2 * families_in[s];
        for (std::size_t c = 0; c < pool.size(); ++c) {
            (c < parents ? parents_of[s] : singles_of[s]).push_back(static_cast<std::size_t>(pool[c]));
        }
        std::sort(singles_of[s].begin(), singles_of[s].end());
    }

    auto founder = [&](std::size_t idx, int stratum) {
        return Founder{founders.col(static_cast<Index>(idx)), stratum};
    };
    std::vector<GenotypeValues> sibships;
    std::vector<std::size_t> next_pair(k, 0);
    for (const auto& f : plan.families) {
        const auto s = static_cast<std::size_t>(f.stratum - 1);
        const auto pair = next_pair[s]++;
        const auto mother = founder(parents_of[s][2 * pair], f.stratum);
        const auto father = founder(parents_of[s][2 * pair + 1], f.stratum);
        sibships.push_back(simulate_sibship(mother, father, f.size, cfg.mean_recombinations, rng).children);
    }

    const auto n = static_cast<Index>(plan.total());
    GenotypeValues genotypes(p, n);
    std::vector<int> strata;
    std::vector<IndexList> families;
    std::vector<std::string> family_ids;
    Index col = 0;
    for (std::size_t s = 0; s < k; ++s) {
        for (const auto idx : singles_of[s]) {
            genotypes.col(col++) = founders.col(static_cast<Index>(idx));
            strata.push_back(static_cast<int>(s) + 1);
        }
        for (std::size_t f = 0; f < plan.families.size(); ++f) {
            if (static_cast<std::size_t>(plan.families[f].stratum - 1) != s) continue;
            IndexList members;
            for (Index c = 0; c < sibships[f].cols(); ++c) {
                members.push_back(static_cast<std::size_t>(col));
                genotypes.col(col++) = sibships[f].col(c);
                strata.push_back(static_cast<int>(s) + 1);
            }
            families.push_back(std::move(members));
            family_ids.push_back("fam" + std::to_string(f + 1));
        }
    }
    return SimOutput{GenotypeMatrix::with_default_ids(std::move(genotypes)), std::move(strata),
                     FamilyStructure(static_cast<std::size_t>(n), std::move(families), std::move(family_ids)),
                     std::move(freqs)};
}

SimOutput simulate_dataset(const SimConfig& cfg) { return simulate_design(cfg, plan_design(cfg)); }

std::string to_string(Design d) { return d == Design::Balanced ? "balanced" : "unbalanced"; }

Design parse_design(const std::string& s) {
    if (s == "balanced") return Design::Balanced;
    if (s == "unbalanced") return Design::Unbalanced;
    throw Error(ErrorCode::ParseError, "unknown design '" + s + "'");
}

}  // namespace famscore::sim
