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


#include "famscore/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "famscore/error.hpp"
#include "famscore/evaluation.hpp"
#include "famscore/io.hpp"
#include "famscore/relatedness.hpp"
#include "famscore/report.hpp"

extern "C" void openblas_set_num_threads(int);

namespace famscore::cli {

namespace {

using methods::Method;

constexpr Method kAllMethods[] = {Method::Naive,       Method::SP, Method::PCAiRLite, Method::FWMatrix,
                                  Method::FWGeometric, Method::MS, Method::CPW,       Method::FA};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& name : names) {
        if (name == "all") {
            out.assign(std::begin(kAllMethods), std::end(kAllMethods));
            return out;
        }
        out.push_back(methods::parse_method(name));
    }
    return out;
}

// Collects what a subcommand read and wrote, for its manifest.
struct Run {
    std::string subcommand;
    std::vector<std::string> args;
    std::string prefix;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string canonical_config;
    std::uint64_t seed = 0;
    bool has_seed = false;

    std::string read(const std::string& path) {
        inputs.push_back(path);
        return io::read_text(path);
    }

    void write(const std::string& suffix, const std::string& content) {
        const std::string path = prefix + suffix;
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        io::write_atomic(path, content);
        outputs.push_back(path);
    }

    void finish() {
        io::RunManifest m;
        m.tool_version = std::string(kVersion);
        m.subcommand = subcommand;
        m.seed = seed;
        m.has_seed = has_seed;
        std::string config = canonical_config;
        if (config.empty()) {
            for (const auto& a : args) config += a + "\n";
        }
        m.config_hash = io::hex64(io::fnv1a(config));
        m.inputs = inputs;
        m.outputs = outputs;
        m.arguments = args;
        io::write_atomic(prefix + "." + subcommand + ".manifest.json", io::format_manifest(m));
    }
};

struct MatrixSource {
    std::string genotypes;
    std::string scaled;
    std::string missing = "mean";

    void add_to(CLI::App* app) {
        auto* g = app->add_option("--genotypes", genotypes, "genotype TSV (SNPs x individuals, 0/1/2/NA)");
        auto* s = app->add_option("--scaled", scaled, "scaled matrix TSV written by 'scale'");
        g->excludes(s);
        app->add_option("--missing", missing, "missing genotypes: mean or reject")
            ->check(CLI::IsMember({"mean", "reject"}));
    }

    ScaledMatrix load(Run& run, std::ostream& err) const {
        if (genotypes.empty() == scaled.empty()) {
            throw Error(ErrorCode::InvalidArgument, "give exactly one of --genotypes or --scaled");
        }
        if (!scaled.empty()) return io::parse_matrix_tsv(run.read(scaled), ScaleKind::RowStandardized);
        auto g = io::parse_genotypes_tsv(run.read(genotypes));
        const auto mono = monomorphic_snps(g);
        if (!mono.empty()) {
            err << "note: dropping " << mono.size() << " monomorphic SNP(s)\n";
            g = drop_snps(g, mono);
        }
        return scale_genotypes(g, missing == "mean" ? MissingPolicy::MeanImpute : MissingPolicy::Reject);
    }
};

struct MethodFlags {
    double delta = 0.001;
    bool strict = false;
    std::string median_scope = "offdiag";

    void add_to(CLI::App* app) {
        app->add_option("--delta", delta, "ridge added to the covariance diagonal by cpw")->capture_default_str();
        app->add_flag("--strict", strict, "cpw: fail on an indefinite target instead of clamping");
        app->add_option("--median-scope", median_scope, "ms/cpw substitute: median of offdiag or all entries")
            ->check(CLI::IsMember({"offdiag", "all"}))
            ->capture_default_str();
    }

    methods::MethodOptions options() const {
        methods::MethodOptions o;
        o.delta = delta;
        o.clamp_negative = !strict;
        o.median_scope = median_scope == "all" ? methods::MedianScope::AllEntries : methods::MedianScope::OffDiagonal;
        return o;
    }
};

FamilyStructure load_families(Run& run, const std::string& path, const ScaledMatrix& x) {
    if (path.empty()) return FamilyStructure::all_singletons(static_cast<std::size_t>(x.individuals()));
    return relatedness::assign_representatives(io::parse_families(run.read(path), x.individual_ids()), x);
}

std::string fmt_or_na(double v) { return std::isfinite(v) ? io::format_double(v) : "NA"; }

}  // namespace

// --- bench ---------------------------------------------------------------

std::uint64_t cell_seed(std::uint64_t seed, sim::Design design, Index n, double prop, int replicate) {
    std::ostringstream key;
    key << seed << '/' << sim::to_string(design) << '/' << n << '/' << io::format_double(prop) << '/' << replicate;
    return io::fnv1a(key.str());
}

namespace {

struct BenchJob {
    sim::Design design;
    Index n;
    double prop;
    int replicate;
};

std::vector<BenchRow> bench_job(const BenchOptions& o, const BenchJob& job, std::vector<std::string>& warnings) {
    sim::SimConfig cfg = o.base;
    cfg.individuals = job.n;
    cfg.design = job.design;
    cfg.prop = sim::nearest_feasible_prop(job.n, job.prop, cfg.family_size);
    cfg.seed = cell_seed(o.seed, job.design, job.n, job.prop, job.replicate);
    const auto data = sim::simulate_dataset(cfg);
    const auto x = scale_genotypes(drop_monomorphic(data.genotypes));
    const auto fam = relatedness::assign_representatives(data.pedigree, x);
    std::vector<BenchRow> rows;
    for (const auto m : o.methods) {
        BenchRow row{job.design, job.n, cfg.prop, m, job.replicate, 0.0, 0.0};
        try {
            const auto r = methods::run_method(m, x, fam, o.components);
            row.swiss = eval::swiss(r.scores, data.strata, o.components).mean;
            row.rse = eval::rse(r.scores, data.strata, eval::rse_split(m, fam), o.components).mean;
        } catch (const Error& e) {
            if (!is_numerical(e.code())) throw;
            row.swiss = row.rse = std::numeric_limits<double>::quiet_NaN();
            warnings.push_back(std::string(methods::method_name(m)) + " failed on " + sim::to_string(job.design) +
                               " n=" + std::to_string(job.n) + " replicate " + std::to_string(job.replicate) + ": " +
                               e.what());
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& o, std::vector<std::string>* warnings) {
    if (o.replicates < 0) throw Error(ErrorCode::InvalidArgument, "replicates must be >= 0");
    if (o.methods.empty()) throw Error(ErrorCode::InvalidArgument, "bench needs at least one method");
    std::vector<BenchJob> jobs;
    for (const auto d : o.designs) {
        for (const auto n : o.sizes) {
            for (const auto p : o.props) {
                for (int r = 1; r <= o.replicates; ++r) jobs.push_back({d, n, p, r});
            }
        }
    }
    std::vector<std::vector<BenchRow>> results(jobs.size());
    std::vector<std::vector<std::string>> notes(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                results[i] = bench_job(o, jobs[i], notes[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(o.threads, static_cast<unsigned>(jobs.size())));
    if (threads > 1) {
        // one BLAS thread per job; the jobs themselves are the parallelism
        openblas_set_num_threads(1);
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    } else {
        worker();
    }
    std::vector<BenchRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (failures[i]) std::rethrow_exception(failures[i]);
        rows.insert(rows.end(), results[i].begin(), results[i].end());
        if (warnings) warnings->insert(warnings->end(), notes[i].begin(), notes[i].end());
    }
    return rows;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
    std::string out = "design,n,prop,method,replicate,swiss,rse\n";
    for (const auto& r : rows) {
        out += sim::to_string(r.design) + "," + std::to_string(r.n) + "," + io::format_double(r.prop) + "," +
               std::string(methods::method_name(r.method)) + "," + std::to_string(r.replicate) + "," +
               fmt_or_na(r.swiss) + "," + fmt_or_na(r.rse) + "\n";
    }
    return out;
}

std::string format_bench_means_csv(const std::vector<BenchRow>& rows) {
    struct Acc {
        double swiss = 0.0, rse = 0.0;
        int count = 0;
        int failed = 0;
    };
    std::vector<std::string> order;
    std::map<std::string, Acc> cells;
    for (const auto& r : rows) {
        const std::string key = sim::to_string(r.design) + "," + std::to_string(r.n) + "," + io::format_double(r.prop) +
                                "," + std::string(methods::method_name(r.method));
        if (!cells.count(key)) order.push_back(key);
        auto& a = cells[key];
        if (std::isfinite(r.swiss) && std::isfinite(r.rse)) {
            a.swiss += r.swiss;
            a.rse += r.rse;
            ++a.count;
        } else {
            ++a.failed;
        }
    }
    std::string out = "design,n,prop,method,replicates,swiss,rse\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& key : order) {
        const auto& a = cells[key];
        out += key + "," + std::to_string(a.count) + "," + fmt_or_na(a.count ? a.swiss / a.count : nan) + "," +
               fmt_or_na(a.count ? a.rse / a.count : nan) + "\n";
    }
    return out;
}

// --- subcommands ---------------------------------------------------------

namespace {

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::vector<std::string> args;
};

using Action = std::function<void(Run&)>;

// Adds a subcommand whose action runs after a successful parse.
CLI::App* command(CLI::App& app, const char* name, const char* help, Run& run, Action& action, Action body) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--out", run.prefix, "output prefix; every file written is <prefix>.<suffix>")->required();
    sub->callback([&run, &action, body, name] {
        run.subcommand = name;
        action = body;
    });
    return sub;
}

void add_simulate(CLI::App& app, Run& run, Action& action, Context& ctx) {
    struct Opts {
        std::string config;
        std::uint64_t seed = 0;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "simulate", "simulate genotypes, strata and a pedigree", run, action, [o, &ctx](Run& r) {
        auto cfg = o->config.empty() ? sim::SimConfig{} : io::sim_config_from(io::parse_config(r.read(o->config)));
        cfg.seed = o->seed;
        r.seed = o->seed;
        r.has_seed = true;
        r.canonical_config = io::format_sim_config(cfg);
        const auto data = sim::simulate_dataset(cfg);
        const auto& ids = data.genotypes.individual_ids();
        r.write(".genotypes.tsv", io::format_genotypes_tsv(data.genotypes));
        r.write(".strata.csv", io::format_strata_csv(data.strata, ids));
        r.write(".families.tsv", io::format_families(data.pedigree, ids));
        r.write(".config.txt", r.canonical_config);
        ctx.out << "simulated " << data.genotypes.snps() << " SNPs x " << ids.size() << " individuals, "
                << data.pedigree.family_count() << " families\n";
    });
    sub->add_option("--config", o->config, "key = value file of simulation settings");
    sub->add_option("--seed", o->seed, "random seed")->required();
}

void add_scale(CLI::App& app, Run& run, Action& action, Context& ctx) {
    auto src = std::make_shared<MatrixSource>();
    auto* sub = command(app, "scale", "standardize genotype rows", run, action, [src, &ctx](Run& r) {
        const auto x = src->load(r, ctx.err);
        r.write(".scaled.tsv", io::format_matrix_tsv(x));
    });
    src->add_to(sub);
}

void add_relate(CLI::App& app, Run& run, Action& action, Context& ctx) {
    auto src = std::make_shared<MatrixSource>();
    auto eta = std::make_shared<double>(relatedness::kDefaultEta);
    auto* sub = command(app, "relate", "detect first-degree families from genotype correlations", run, action,
                        [src, eta, &ctx](Run& r) {
                            const auto x = src->load(r, ctx.err);
                            const auto corr = relatedness::pairwise_correlations(x);
                            const auto fam = relatedness::detect_families(corr, *eta);
                            r.write(".families.tsv", io::format_families(fam, x.individual_ids()));
                            r.write(".edges.csv", io::format_edges_csv(relatedness::relatedness_graph(corr, *eta)));
                            ctx.out << fam.family_count() << " families, " << fam.singletons().size()
                                    << " singletons\n";
                        });
    src->add_to(sub);
    sub->add_option("--eta", *eta, "correlation threshold for a related pair")->capture_default_str();
}

void add_scores(CLI::App& app, Run& run, Action& action, Context& ctx) {
    struct Opts {
        MatrixSource src;
        MethodFlags flags;
        std::string families;
        std::string method;
        Index k = 10;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "scores", "compute ancestry scores", run, action, [o, &ctx](Run& r) {
        const auto x = o->src.load(r, ctx.err);
        const auto fam = load_families(r, o->families, x);
        const auto result = methods::run_method(methods::parse_method(o->method), x, fam, o->k, o->flags.options());
        r.write(".scores.csv", io::format_scores_csv(result.scores, x.individual_ids()));
        r.write(".values.csv", io::format_values_csv(result));
    });
    o->src.add_to(sub);
    o->flags.add_to(sub);
    sub->add_option("--families", o->families, "family file (individuals not listed are singletons)");
    sub->add_option("--method", o->method, "naive, sp, pcair, fw, fw-geo, ms, cpw or fa")->required();
    sub->add_option("--k", o->k, "number of components")->capture_default_str();
}

void add_evaluate(CLI::App& app, Run& run, Action& action, Context&) {
    struct Opts {
        std::string scores, strata, families, method;
        Index components = eval::kMetricComponents;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "evaluate", "SWISS and RSE of a scores file", run, action, [o](Run& r) {
        const auto s = io::parse_scores_csv(r.read(o->scores));
        const auto strata = io::parse_strata_csv(r.read(o->strata), s.individual_ids);
        const auto fam = io::parse_families(r.read(o->families), s.individual_ids);
        const auto m = methods::parse_method(o->method);
        const auto sw = eval::swiss(s.scores, strata, o->components);
        const auto rs = eval::rse(s.scores, strata, eval::rse_split(m, fam), o->components);
        std::string csv = "method,component,swiss,rse\n";
        for (Index l = 0; l < sw.per_component.size(); ++l) {
            csv += std::string(methods::method_name(m)) + "," + std::to_string(l + 1) + "," +
                   io::format_double(sw.per_component(l)) + "," + fmt_or_na(rs.per_component(l)) + "\n";
        }
        r.write(".metrics.csv", csv);
    });
    sub->add_option("--scores", o->scores, "scores CSV")->required();
    sub->add_option("--strata", o->strata, "strata CSV")->required();
    sub->add_option("--families", o->families, "family file")->required();
    sub->add_option("--method", o->method, "method that produced the scores (selects the RSE split)")->required();
    sub->add_option("--components", o->components, "leading components to score")->capture_default_str();
}

// Crossing warnings come once per decomposition; print each distinct one with
// the number of runs that raised it.
void report_crossings(const std::vector<std::string>& warnings, std::ostream& err) {
    std::vector<std::string> order;
    std::map<std::string, int> counts;
    for (const auto& w : warnings) {
        const auto cut = w.find("): ");
        const std::string what = cut == std::string::npos ? w : w.substr(cut + 3);
        if (counts[what]++ == 0) order.push_back(what);
    }
    for (const auto& what : order) err << "warning: " << what << " (" << counts[what] << " runs)\n";
}

void add_instability(CLI::App& app, Run& run, Action& action, Context& ctx) {
    struct Opts {
        MatrixSource src;
        MethodFlags flags;
        std::string families;
        std::vector<std::string> methods;
        Index components = eval::kInstabilityComponents;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "instability", "instability index against leave-family-in gold standards", run, action,
                        [o, &ctx](Run& r) {
                            const auto x = o->src.load(r, ctx.err);
                            const auto fam = load_families(r, o->families, x);
                            std::string csv = "method,component,instability\n";
                            for (const auto m : parse_methods(o->methods)) {
                                const auto rep = eval::instability(x, fam, m, o->components, o->flags.options());
                                report_crossings(rep.warnings, ctx.err);
                                for (Index l = 0; l < rep.instability.size(); ++l) {
                                    csv += std::string(methods::method_name(m)) + "," + std::to_string(l + 1) + "," +
                                           io::format_double(rep.instability(l)) + "\n";
                                }
                            }
                            r.write(".instability.csv", csv);
                        });
    o->src.add_to(sub);
    o->flags.add_to(sub);
    sub->add_option("--families", o->families, "family file")->required();
    sub->add_option("--method", o->methods, "method(s) to assess, or all")->required();
    sub->add_option("--components", o->components, "leading components to assess")->capture_default_str();
}

void add_scree(CLI::App& app, Run& run, Action& action, Context&) {
    struct Opts {
        std::string scores, values;
        double span = eval::kDefaultSpan;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "scree", "individual scree values with loess smoothing", run, action, [o](Run& r) {
        auto s = io::parse_scores_csv(r.read(o->scores));
        methods::AncestryResult result;
        result.scores = std::move(s.scores);
        result.values = io::parse_values_csv(r.read(o->values));
        result.value_kind = methods::ValueKind::Singular;
        const auto scree = eval::individual_scree(result, o->span);
        r.write(".scree_raw.csv", io::format_matrix_csv(scree.raw, s.individual_ids, "raw_"));
        r.write(".scree_smoothed.csv", io::format_matrix_csv(scree.smoothed, s.individual_ids, "smoothed_"));
    });
    sub->add_option("--scores", o->scores, "scores CSV")->required();
    sub->add_option("--values", o->values, "values CSV from the same run")->required();
    sub->add_option("--span", o->span, "loess span")->capture_default_str();
}

void add_report(CLI::App& app, Run& run, Action& action, Context&) {
    struct Opts {
        report::PlotSpec spec;
        std::string kind = "scatter";
        std::string highlight = "none";
        std::string metric = "rse";
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "report", "render an SVG plot from other subcommands' CSV outputs", run, action,
                        [o](Run& r) {
                            auto spec = o->spec;
                            spec.kind = report::parse_kind(o->kind);
                            spec.metric = report::parse_metric(o->metric);
                            static const std::map<std::string, report::Highlight> highlights = {
                                {"none", report::Highlight::None},
                                {"strata", report::Highlight::Strata},
                                {"size", report::Highlight::FamilySize},
                                {"family", report::Highlight::Family}};
                            spec.highlight = highlights.at(o->highlight);
                            if (spec.highlight == report::Highlight::Family && spec.family_id.empty()) {
                                throw Error(ErrorCode::InvalidArgument, "--highlight family needs --family-id");
                            }
                            r.inputs = spec.inputs;
                            if (!spec.families.empty()) r.inputs.push_back(spec.families);
                            if (!spec.strata.empty()) r.inputs.push_back(spec.strata);
                            r.write(".svg", report::render(spec));
                        });
    sub->add_option("--kind", o->kind, "scatter, scree or heatmap")->required();
    sub->add_option("--input", o->spec.inputs, "scores CSV, smoothed scree CSV, or bench/metrics CSV")->required();
    sub->add_option("--families", o->spec.families, "family file");
    sub->add_option("--strata", o->spec.strata, "strata CSV");
    sub->add_option("--highlight", o->highlight, "scatter colouring: none, strata, size or family")
        ->check(CLI::IsMember({"none", "strata", "size", "family"}));
    sub->add_option("--family-id", o->spec.family_id, "family to highlight");
    sub->add_option("--x", o->spec.x, "component on the x axis")->capture_default_str();
    sub->add_option("--y", o->spec.y, "component on the y axis")->capture_default_str();
    sub->add_option("--metric", o->metric, "heatmap metric: swiss or rse")->capture_default_str();
    sub->add_option("--title", o->spec.title, "plot title");
    sub->add_option("--x-label", o->spec.x_label, "x axis label");
    sub->add_option("--y-label", o->spec.y_label, "y axis label");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void add_bench(CLI::App& app, Run& run, Action& action, Context& ctx) {
    struct Opts {
        std::uint64_t seed = 0;
        std::vector<std::string> methods{"all"};
        int replicates = 3;
        bool full_scale = false;
        std::string sizes = "500,1000,2000";
        std::string designs = "balanced,unbalanced";
        std::string props = "0.2,0.5,0.8";
        std::string config;
        unsigned threads = 1;
    };
    auto o = std::make_shared<Opts>();
    auto* sub = command(app, "bench", "simulation grid of SWISS and RSE per method", run, action, [o, &ctx](Run& r) {
        BenchOptions b;
        if (!o->config.empty()) b.base = io::sim_config_from(io::parse_config(r.read(o->config)));
        else b.base.snps = kDeskSnps;
        if (o->full_scale) b.base.snps = kFullScaleSnps;
        b.seed = o->seed;
        b.replicates = o->replicates;
        b.methods = parse_methods(o->methods);
        b.threads = o->threads;
        b.sizes.clear();
        for (const auto& s : split_list(o->sizes)) b.sizes.push_back(io::parse_integer(s, 0));
        b.designs.clear();
        for (const auto& s : split_list(o->designs)) b.designs.push_back(sim::parse_design(s));
        b.props.clear();
        for (const auto& s : split_list(o->props)) b.props.push_back(io::parse_double(s, 0));
        r.seed = o->seed;
        r.has_seed = true;
        std::string canon = io::format_sim_config(b.base) + "replicates = " + std::to_string(b.replicates) +
                            "\nsizes = " + o->sizes + "\ndesigns = " + o->designs + "\nprops = " + o->props +
                            "\nmethods =";
        for (const auto m : b.methods) canon += " " + std::string(methods::method_name(m));
        r.canonical_config = canon + "\nbench_seed = " + std::to_string(o->seed) + "\n";
        std::vector<std::string> warnings;
        const auto rows = run_bench(b, &warnings);
        for (const auto& w : warnings) ctx.err << "warning: " << w << "\n";
        r.write(".bench.csv", format_bench_csv(rows));
        r.write(".bench_mean.csv", format_bench_means_csv(rows));
    });
    sub->add_option("--seed", o->seed, "random seed")->required();
    sub->add_option("--methods", o->methods, "methods, or all")->capture_default_str();
    sub->add_option("--replicates", o->replicates, "replicates per grid cell")->capture_default_str();
    sub->add_flag("--paper-scale", o->full_scale, "use 20000 SNPs instead of 5000");
    sub->add_option("--sizes", o->sizes, "comma separated sample sizes")->capture_default_str();
    sub->add_option("--designs", o->designs, "comma separated designs")->capture_default_str();
    sub->add_option("--props", o->props, "comma separated family proportions")->capture_default_str();
    sub->add_option("--config", o->config, "simulation settings shared by all cells");
    sub->add_option("--threads", o->threads, "grid cells computed in parallel")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Family-robust ancestry scores", "famscore"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Context ctx{out, err, args};
    Run r;
    r.args = args;
    Action action;
    add_simulate(app, r, action, ctx);
    add_scale(app, r, action, ctx);
    add_relate(app, r, action, ctx);
    add_scores(app, r, action, ctx);
    add_evaluate(app, r, action, ctx);
    add_instability(app, r, action, ctx);
    add_scree(app, r, action, ctx);
    add_report(app, r, action, ctx);
    add_bench(app, r, action, ctx);
    std::string manifest;
    auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    replay->add_option("--manifest", manifest, "manifest JSON")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidationError;
    }
    try {
        if (replay->parsed()) {
            const auto m = io::parse_manifest(io::read_text(manifest));
            if (m.subcommand == "replay") throw Error(ErrorCode::InvalidArgument, "a replay manifest cannot be replayed");
            return run(m.arguments, out, err);
        }
        action(r);
        r.finish();
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_numerical(e.code()) ? kNumericalError : kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
}

}  // namespace famscore::cli
