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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "famscore/core.hpp"
#include "famscore/methods.hpp"
#include "famscore/relatedness.hpp"
#include "famscore/simulator.hpp"

namespace famscore::io {

// --- plain files ---------------------------------------------------------

std::string read_text(const std::string& path);

/// Writes to a sibling temporary file and renames it over path.
void write_atomic(const std::string& path, std::string_view content);

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double v);

// --- delimited tables ----------------------------------------------------

/// Header plus rows of fields. Blank lines and lines starting with '#' are
/// skipped. Every row must have as many fields as the header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Position of a header field; ParseError when absent.
    std::size_t column(std::string_view name) const;
};

Table parse_table(std::string_view text, char delimiter);

double parse_double(std::string_view field, std::size_t line);
long long parse_integer(std::string_view field, std::size_t line);

// --- genotypes -----------------------------------------------------------
//
// Tab separated. The first row holds a corner label followed by the
// individual ids; every other row is a SNP id followed by 0, 1, 2 or NA.

GenotypeMatrix parse_genotypes_tsv(std::string_view text);
std::string format_genotypes_tsv(const GenotypeMatrix& g);

/// Same layout as genotypes, with real-valued cells.
ScaledMatrix parse_matrix_tsv(std::string_view text, ScaleKind kind);
std::string format_matrix_tsv(const ScaledMatrix& x);

// --- families ------------------------------------------------------------
//
// Two whitespace separated columns: individual_id family_id. A family id of
// "." marks a singleton; individuals that are not listed are singletons too.
// An optional "individual_id family_id" header line is skipped.

FamilyStructure parse_families(std::string_view text, const std::vector<std::string>& individual_ids);
std::string format_families(const FamilyStructure& fam, const std::vector<std::string>& individual_ids);

// --- CSV outputs ---------------------------------------------------------

/// individual_id,stratum for every individual.
std::vector<int> parse_strata_csv(std::string_view text, const std::vector<std::string>& individual_ids);
std::string format_strata_csv(const std::vector<int>& strata, const std::vector<std::string>& individual_ids);

struct ScoreTable {
    std::vector<std::string> individual_ids;
    Eigen::MatrixXd scores;  // n x k
};

/// individual_id,score_1,...,score_k
ScoreTable parse_scores_csv(std::string_view text);
std::string format_scores_csv(const Eigen::MatrixXd& scores, const std::vector<std::string>& individual_ids);

/// individual_id followed by any number of numeric columns.
ScoreTable parse_matrix_csv(std::string_view text);

/// component,kind,value,singular_value
std::string format_values_csv(const methods::AncestryResult& result);
/// The singular_value column.
Eigen::VectorXd parse_values_csv(std::string_view text);

/// j1,j2,corr with 1-based individual positions.
std::string format_edges_csv(const relatedness::RelatednessGraph& graph);

/// individual_id,<prefix>1,...,<prefix>k
std::string format_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& row_ids,
                              std::string_view column_prefix);

// --- configuration -------------------------------------------------------

/// key = value lines; '#' starts a comment. Repeated keys are an error.
std::map<std::string, std::string> parse_config(std::string_view text);

/// Applies known SimConfig keys; unknown keys raise ParseError.
sim::SimConfig sim_config_from(const std::map<std::string, std::string>& entries);
std::string format_sim_config(const sim::SimConfig& cfg);

// --- run manifests -------------------------------------------------------

std::uint64_t fnv1a(std::string_view bytes);

/// Everything needed to replay a CLI invocation. Contains no timestamps.
struct RunManifest {
    std::string tool_version;
    std::string subcommand;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string config_hash;  // 16 hex digits of fnv1a over the canonical config text
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> arguments;  // argv after the program name
};

std::string format_manifest(const RunManifest& m);
RunManifest parse_manifest(std::string_view text);

std::string hex64(std::uint64_t v);

}  // namespace famscore::io
