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

#include "famscore/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "famscore/error.hpp"

namespace famscore::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const auto start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

// Calls fn(line_number, line) for every line that is not blank or a comment.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const auto t = trim(line);
        if (!t.empty() && t.front() != '#') fn(line_no, line);
        start = end + 1;
    }
}

[[noreturn]] void parse_fail(const std::string& what, std::size_t line) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what, {line});
}

std::unordered_map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids) {
    std::unordered_map<std::string, std::size_t> out;
    for (std::size_t j = 0; j < ids.size(); ++j) out.emplace(ids[j], j);
    return out;
}

void check_id(const std::string& id) {
    if (id.empty() || id.find_first_of(" \t\r\n,") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "identifier '" + id + "' is empty or contains a separator");
    }
}

}  // namespace

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string format_double(double v) {
    if (v == 0.0) return "0";
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view field, std::size_t line) {
    const std::string s(field);
    if (s.empty()) parse_fail("empty number", line);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    // ERANGE on underflow still yields the nearest subnormal (or zero); only overflow is an error
    const bool overflow = errno == ERANGE && std::abs(v) == HUGE_VAL;
    if (end != s.c_str() + s.size() || overflow || !std::isfinite(v)) parse_fail("bad number '" + s + "'", line);
    return v;
}

long long parse_integer(std::string_view field, std::size_t line) {
    long long v = 0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty()) parse_fail("bad integer '" + std::string(field) + "'", line);
    return v;
}

std::size_t Table::column(std::string_view name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    throw Error(ErrorCode::ParseError, "missing column '" + std::string(name) + "'");
}

Table parse_table(std::string_view text, char delimiter) {
    Table t;
    bool have_header = false;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        auto fields = split(line, delimiter);
        if (!have_header) {
            t.header.assign(fields.begin(), fields.end());
            have_header = true;
            return;
        }
        if (fields.size() != t.header.size()) {
            parse_fail("expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()),
                       line_no);
        }
        t.rows.emplace_back(fields.begin(), fields.end());
    });
    if (!have_header) throw Error(ErrorCode::ParseError, "no header line");
    return t;
}

// --- genotypes -----------------------------------------------------------

namespace {

struct RawGrid {
    std::vector<std::string> row_ids;
    std::vector<std::string> col_ids;
    std::vector<std::vector<std::string_view>> cells;
    std::vector<std::size_t> lines;
};

RawGrid parse_grid(std::string_view text) {
    RawGrid g;
    bool have_header = false;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        auto fields = split(line, '\t');
        if (!have_header) {
            if (fields.size() < 2) parse_fail("header needs a corner label and individual ids", line_no);
            g.col_ids.assign(fields.begin() + 1, fields.end());
            have_header = true;
            return;
        }
        if (fields.size() != g.col_ids.size() + 1) {
            parse_fail("expected " + std::to_string(g.col_ids.size() + 1) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
        }
        g.row_ids.emplace_back(fields.front());
        g.cells.emplace_back(fields.begin() + 1, fields.end());
        g.lines.push_back(line_no);
    });
    if (!have_header) throw Error(ErrorCode::ParseError, "empty matrix file");
    return g;
}

}  // namespace

GenotypeMatrix parse_genotypes_tsv(std::string_view text) {
    auto grid = parse_grid(text);
    GenotypeValues values(static_cast<Index>(grid.row_ids.size()), static_cast<Index>(grid.col_ids.size()));
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        for (std::size_t j = 0; j < grid.col_ids.size(); ++j) {
            const auto cell = grid.cells[i][j];
            std::int8_t v;
            if (cell == "0") v = 0;
            else if (cell == "1") v = 1;
            else if (cell == "2") v = 2;
            else if (cell == "NA") v = kMissingGenotype;
            else parse_fail("genotype must be 0, 1, 2 or NA, got '" + std::string(cell) + "'", grid.lines[i]);
            values(static_cast<Index>(i), static_cast<Index>(j)) = v;
        }
    }
    return GenotypeMatrix(std::move(values), std::move(grid.row_ids), std::move(grid.col_ids));
}

std::string format_genotypes_tsv(const GenotypeMatrix& g) {
    std::string out = "snp_id";
    for (const auto& id : g.individual_ids()) {
        check_id(id);
        out += '\t';
        out += id;
    }
    out += '\n';
    const auto& v = g.values();
    for (Index i = 0; i < g.snps(); ++i) {
        out += g.snp_ids()[static_cast<std::size_t>(i)];
        for (Index j = 0; j < g.individuals(); ++j) {
            out += '\t';
            const auto c = v(i, j);
            if (c == kMissingGenotype) out += "NA";
            else out += static_cast<char>('0' + c);
        }
        out += '\n';
    }
    return out;
}

ScaledMatrix parse_matrix_tsv(std::string_view text, ScaleKind kind) {
    auto grid = parse_grid(text);
    Eigen::MatrixXd values(static_cast<Index>(grid.row_ids.size()), static_cast<Index>(grid.col_ids.size()));
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        for (std::size_t j = 0; j < grid.col_ids.size(); ++j) {
            values(static_cast<Index>(i), static_cast<Index>(j)) = parse_double(grid.cells[i][j], grid.lines[i]);
        }
    }
    return ScaledMatrix(std::move(values), kind, std::move(grid.row_ids), std::move(grid.col_ids));
}

std::string format_matrix_tsv(const ScaledMatrix& x) {
    std::string out = "snp_id";
    for (const auto& id : x.individual_ids()) {
        out += '\t';
        out += id;
    }
    out += '\n';
    for (Index i = 0; i < x.snps(); ++i) {
        out += x.snp_ids()[static_cast<std::size_t>(i)];
        for (Index j = 0; j < x.individuals(); ++j) {
            out += '\t';
            out += format_double(x.values()(i, j));
        }
        out += '\n';
    }
    return out;
}

// --- families ------------------------------------------------------------

FamilyStructure parse_families(std::string_view text, const std::vector<std::string>& individual_ids) {
    const auto index = index_ids(individual_ids);
    std::map<std::string, IndexList> by_family;
    std::unordered_set<std::size_t> seen;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto fields = split_whitespace(line);
        if (fields.size() != 2) parse_fail("expected individual_id family_id", line_no);
        if (fields[0] == "individual_id" && fields[1] == "family_id") return;
        const std::string id(fields[0]);
        const auto it = index.find(id);
        if (it == index.end()) throw Error(ErrorCode::UnknownId, "unknown individual '" + id + "'", {line_no});
        if (!seen.insert(it->second).second) parse_fail("individual '" + id + "' listed twice", line_no);
        if (fields[1] != ".") by_family[std::string(fields[1])].push_back(it->second);
    });
    std::vector<IndexList> families;
    std::vector<std::string> ids;
    for (auto& [fid, members] : by_family) {
        if (members.size() < 2) {
            throw Error(ErrorCode::ParseError, "family '" + fid + "' has a single member", members);
        }
        families.push_back(std::move(members));
        ids.push_back(fid);
    }
    return FamilyStructure(individual_ids.size(), std::move(families), std::move(ids));
}

std::string format_families(const FamilyStructure& fam, const std::vector<std::string>& individual_ids) {
    if (individual_ids.size() != fam.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one id per individual required");
    }
    std::vector<std::string> label(fam.size(), ".");
    for (std::size_t f = 0; f < fam.family_count(); ++f) {
        check_id(fam.family_ids()[f]);
        for (const auto j : fam.families()[f]) label[j] = fam.family_ids()[f];
    }
    std::string out = "individual_id\tfamily_id\n";
    for (std::size_t j = 0; j < fam.size(); ++j) {
        out += individual_ids[j];
        out += '\t';
        out += label[j];
        out += '\n';
    }
    return out;
}

// --- CSV outputs ---------------------------------------------------------

std::vector<int> parse_strata_csv(std::string_view text, const std::vector<std::string>& individual_ids) {
    const auto table = parse_table(text, ',');
    const auto id_col = table.column("individual_id");
    const auto s_col = table.column("stratum");
    const auto index = index_ids(individual_ids);
    std::vector<int> strata(individual_ids.size(), 0);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const auto it = index.find(row[id_col]);
        if (it == index.end()) throw Error(ErrorCode::UnknownId, "unknown individual '" + row[id_col] + "'", {r + 2});
        const auto s = parse_integer(row[s_col], r + 2);
        if (s < 1) parse_fail("strata are numbered from 1", r + 2);
        strata[it->second] = static_cast<int>(s);
    }
    IndexList missing;
    for (std::size_t j = 0; j < strata.size(); ++j) {
        if (strata[j] == 0) missing.push_back(j);
    }
    if (!missing.empty()) throw Error(ErrorCode::ParseError, "individuals without a stratum", missing);
    return strata;
}

std::string format_strata_csv(const std::vector<int>& strata, const std::vector<std::string>& individual_ids) {
    if (strata.size() != individual_ids.size()) throw Error(ErrorCode::DimensionMismatch, "one stratum per individual");
    std::string out = "individual_id,stratum\n";
    for (std::size_t j = 0; j < strata.size(); ++j) {
        out += individual_ids[j] + "," + std::to_string(strata[j]) + "\n";
    }
    return out;
}

namespace {

ScoreTable matrix_from_table(const Table& table, const char* what) {
    if (table.header.empty() || table.header[0] != "individual_id") {
        throw Error(ErrorCode::ParseError, std::string(what) + " file must start with an individual_id column");
    }
    const auto k = static_cast<Index>(table.header.size() - 1);
    ScoreTable out;
    out.scores.resize(static_cast<Index>(table.rows.size()), k);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out.individual_ids.push_back(table.rows[r][0]);
        for (Index l = 0; l < k; ++l) {
            out.scores(static_cast<Index>(r), l) = parse_double(table.rows[r][static_cast<std::size_t>(l) + 1], r + 2);
        }
    }
    return out;
}

}  // namespace

ScoreTable parse_scores_csv(std::string_view text) {
    const auto table = parse_table(text, ',');
    for (std::size_t l = 1; l < table.header.size(); ++l) {
        if (table.header[l] != "score_" + std::to_string(l)) {
            throw Error(ErrorCode::ParseError, "expected column score_" + std::to_string(l));
        }
    }
    return matrix_from_table(table, "scores");
}

ScoreTable parse_matrix_csv(std::string_view text) { return matrix_from_table(parse_table(text, ','), "matrix"); }

std::string format_matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& row_ids,
                              std::string_view column_prefix) {
    if (static_cast<Index>(row_ids.size()) != m.rows()) throw Error(ErrorCode::DimensionMismatch, "one id per row");
    std::string out = "individual_id";
    for (Index l = 0; l < m.cols(); ++l) {
        out += ',';
        out += column_prefix;
        out += std::to_string(l + 1);
    }
    out += '\n';
    for (Index j = 0; j < m.rows(); ++j) {
        out += row_ids[static_cast<std::size_t>(j)];
        for (Index l = 0; l < m.cols(); ++l) {
            out += ',';
            out += format_double(m(j, l));
        }
        out += '\n';
    }
    return out;
}

std::string format_scores_csv(const Eigen::MatrixXd& scores, const std::vector<std::string>& individual_ids) {
    return format_matrix_csv(scores, individual_ids, "score_");
}

std::string format_values_csv(const methods::AncestryResult& result) {
    const auto d = result.singular_values();
    const char* kind = result.value_kind == methods::ValueKind::Singular ? "singular" : "eigen";
    std::string out = "component,kind,value,singular_value\n";
    for (Index l = 0; l < result.values.size(); ++l) {
        out += std::to_string(l + 1) + "," + kind + "," + format_double(result.values(l)) + "," + format_double(d(l)) + "\n";
    }
    return out;
}

Eigen::VectorXd parse_values_csv(std::string_view text) {
    const auto table = parse_table(text, ',');
    const auto c = table.column("component");
    const auto s = table.column("singular_value");
    Eigen::VectorXd out(static_cast<Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (parse_integer(table.rows[r][c], r + 2) != static_cast<long long>(r) + 1) {
            parse_fail("components must be listed 1, 2, ... in order", r + 2);
        }
        out(static_cast<Index>(r)) = parse_double(table.rows[r][s], r + 2);
    }
    return out;
}

std::string format_edges_csv(const relatedness::RelatednessGraph& graph) {
    std::string out = "j1,j2,corr\n";
    for (const auto& e : graph.edges) {
        out += std::to_string(e.j1 + 1) + "," + std::to_string(e.j2 + 1) + "," + format_double(e.corr) + "\n";
    }
    return out;
}

// --- configuration -------------------------------------------------------

std::map<std::string, std::string> parse_config(std::string_view text) {
    std::map<std::string, std::string> out;
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        if (trim(line).empty()) return;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) parse_fail("expected key = value", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) parse_fail("empty key or value", line_no);
        if (!out.emplace(key, value).second) parse_fail("key '" + key + "' repeated", line_no);
    });
    return out;
}

sim::SimConfig sim_config_from(const std::map<std::string, std::string>& entries) {
    sim::SimConfig cfg;
    for (const auto& [key, value] : entries) {
        if (key == "snps") cfg.snps = parse_integer(value, 0);
        else if (key == "block") cfg.block = parse_integer(value, 0);
        else if (key == "rho") cfg.rho = parse_double(value, 0);
        else if (key == "individuals") cfg.individuals = parse_integer(value, 0);
        else if (key == "strata") cfg.strata = static_cast<int>(parse_integer(value, 0));
        else if (key == "fst") cfg.fst = parse_double(value, 0);
        else if (key == "maf_a") cfg.maf_a = parse_double(value, 0);
        else if (key == "maf_b") cfg.maf_b = parse_double(value, 0);
        else if (key == "prop") cfg.prop = parse_double(value, 0);
        else if (key == "family_size") {
            const auto v = parse_integer(value, 0);
            if (v < 0) throw Error(ErrorCode::ParseError, "family_size must be positive");
            cfg.family_size = static_cast<std::size_t>(v);
        } else if (key == "design") cfg.design = sim::parse_design(value);
        else if (key == "mean_recombinations") cfg.mean_recombinations = parse_double(value, 0);
        else if (key == "seed") {
            const auto v = parse_integer(value, 0);
            if (v < 0) throw Error(ErrorCode::ParseError, "seed must be non-negative");
            cfg.seed = static_cast<std::uint64_t>(v);
        } else {
            throw Error(ErrorCode::ParseError, "unknown config key '" + key + "'");
        }
    }
    return cfg;
}

std::string format_sim_config(const sim::SimConfig& cfg) {
    std::ostringstream out;
    out << "snps = " << cfg.snps << "\n"
        << "block = " << cfg.block << "\n"
        << "rho = " << format_double(cfg.rho) << "\n"
        << "individuals = " << cfg.individuals << "\n"
        << "strata = " << cfg.strata << "\n"
        << "fst = " << format_double(cfg.fst) << "\n"
        << "maf_a = " << format_double(cfg.maf_a) << "\n"
        << "maf_b = " << format_double(cfg.maf_b) << "\n"
        << "prop = " << format_double(cfg.prop) << "\n"
        << "family_size = " << cfg.family_size << "\n"
        << "design = " << sim::to_string(cfg.design) << "\n"
        << "mean_recombinations = " << format_double(cfg.mean_recombinations) << "\n"
        << "seed = " << cfg.seed << "\n";
    return out.str();
}

// --- run manifests -------------------------------------------------------

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_manifest(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["tool_version"] = m.tool_version;
    j["subcommand"] = m.subcommand;
    j["seed"] = m.has_seed ? nlohmann::ordered_json(m.seed) : nlohmann::ordered_json(nullptr);
    j["config_hash"] = m.config_hash;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["arguments"] = m.arguments;
    return j.dump(2) + "\n";
}

RunManifest parse_manifest(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        if (!j.at("seed").is_null()) {
            m.seed = j.at("seed").get<std::uint64_t>();
            m.has_seed = true;
        }
        m.config_hash = j.at("config_hash").get<std::string>();
        m.inputs = j.at("inputs").get<std::vector<std::string>>();
        m.outputs = j.at("outputs").get<std::vector<std::string>>();
        m.arguments = j.at("arguments").get<std::vector<std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad manifest: ") + e.what());
    }
}

}  // namespace famscore::io
