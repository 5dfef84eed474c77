// Command-line front end: build an index, search it, evaluate runs, and run
// the randomized verification campaign.
//
// Exit status: 0 on success, 1 when verify finds a violation, 2 on any usage,
// input or domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gti/batch.hpp"
#include "gti/evaluation.hpp"
#include "gti/index_io.hpp"
#include "gti/verify.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

auto open_out(std::string const& path) -> std::ofstream
{
    std::ofstream out(path);
    if (!out) {
        throw gti::Error("cannot open " + path + " for writing");
    }
    return out;
}

struct BuildArgs {
    std::string corpus;
    std::string index;
    std::string alignment = "zero";
    std::uint32_t block_size = 64;
    double k1 = 0.9;
    double b = 0.4;
    bool keep_learned_zero = false;
};

auto cmd_build(BuildArgs const& args) -> int
{
    static std::map<std::string, gti::FillMode> const fills = {
        {"zero", gti::FillMode::Zero}, {"one", gti::FillMode::One}, {"scaled", gti::FillMode::Scaled}};
    gti::BuildOptions options;
    options.alignment.fill = fills.at(args.alignment);
    options.alignment.include_learned_zero = args.keep_learned_zero;
    options.block_size = args.block_size;
    options.bm25 = {args.k1, args.b};
    options.bm25.validate();
    if (options.block_size == 0) {
        throw gti::DomainError("block size must be at least 1");
    }

    auto corpus = gti::read_corpus(args.corpus);
    auto index = gti::build_index(corpus, options);
    gti::serialize_index(index, args.index);

    std::cout << "documents " << index.num_docs << '\n'
              << "terms " << index.lists.size() << '\n'
              << "postings " << index.posting_count() << '\n'
              << "filled " << index.alignment_stats.filled_count << '\n';
    if (options.alignment.fill == gti::FillMode::Scaled) {
        std::cout << "scale_ratio " << index.alignment_stats.scale_ratio << '\n';
    }
    return 0;
}

struct SearchArgs {
    std::string index;
    std::string queries;
    std::string algorithm = "maxscore-2gti";
    double alpha = 1.0;
    double beta = 0.3;
    double gamma = 0.05;
    std::size_t k = 10;
    double factor_f = 1.0;
    std::string runs_out;
    std::string counters_out;
    int threads = 1;
};

void write_counters(std::ostream& out, std::vector<gti::QueryRun> const& runs)
{
    out << "query_id,docs_fully_scored,docs_locally_pruned,docs_globally_skipped,postings_touched,"
           "repartition_count,blocks_opened,latency_ms\n";
    for (auto const& r : runs) {
        auto const& c = r.counters;
        out << r.query_id << ',' << c.docs_fully_scored << ',' << c.docs_locally_pruned << ','
            << c.docs_globally_skipped << ',' << c.postings_touched << ',' << c.repartition_count << ','
            << c.blocks_opened << ',' << r.latency_ms << '\n';
    }
}

auto cmd_search(SearchArgs const& args) -> int
{
    gti::TraversalConfig config;
    config.algorithm = gti::parse_algorithm(args.algorithm);
    config.coeffs = {args.alpha, args.beta, args.gamma};
    config.k = args.k;
    config.factor_f = args.factor_f;
    config.validate();
    if (args.threads < 0) {
        throw gti::DomainError("threads must be non-negative");
    }

    auto index = gti::load_index(args.index);
    auto queries = gti::read_queries(args.queries);
    auto runs = args.threads == 1 ? gti::run_batch_serial(queries, index, config)
                                  : gti::run_batch(queries, index, config, args.threads);

    auto lines = gti::to_run_lines(runs, gti::algorithm_name(config.algorithm));
    if (args.runs_out.empty()) {
        gti::write_run(std::cout, lines);
    } else {
        auto out = open_out(args.runs_out);
        gti::write_run(out, lines);
    }
    if (!args.counters_out.empty()) {
        auto out = open_out(args.counters_out);
        write_counters(out, runs);
    }

    std::vector<double> latencies;
    gti::EffortCounters total;
    for (auto const& r : runs) {
        latencies.push_back(r.latency_ms);
        total += r.counters;
    }
    std::cerr << "queries " << runs.size() << '\n';
    if (!latencies.empty()) {
        auto stats = gti::latency_stats(latencies);
        std::cerr << "mrt_ms " << stats.mean << "\np99_ms " << stats.p99 << '\n'
                  << "docs_fully_scored " << total.docs_fully_scored << '\n';
    }
    return 0;
}

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::vector<std::string> metrics;
    std::string csv_out;
};

auto cmd_eval(EvalArgs const& args) -> int
{
    std::vector<gti::MetricSpec> metrics;
    for (auto const& m : args.metrics) {
        metrics.push_back(gti::parse_metric(m));
    }
    if (metrics.empty()) {
        metrics.push_back(gti::parse_metric("mrr@10"));
    }
    auto run = gti::read_run(args.run);
    auto qrels = gti::read_qrels(args.qrels);
    auto report = gti::evaluate(run, qrels, metrics);
    gti::write_report_table(std::cout, report);
    if (!args.csv_out.empty()) {
        auto out = open_out(args.csv_out);
        gti::write_report_csv(out, report);
    }
    return 0;
}

auto cmd_verify(gti::VerifyOptions const& options) -> int
{
    auto report = gti::run_verify(options);
    gti::write_verify_report(std::cout, report);
    if (report.violations() > 0) {
        std::cout << "FAIL\n";
        return kExitViolation;
    }
    std::cout << "PASS\n";
    return 0;
}

}  // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app{"Two-level guided traversal over a dual-weight inverted index"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "Build an index from a corpus file");
    build_cmd->add_option("corpus", build.corpus, "Corpus: doc_id<TAB>term:tf:weight ...")->required();
    build_cmd->add_option("index", build.index, "Output index path")->required();
    build_cmd->add_option("--alignment", build.alignment, "Fill for learned-only postings")
        ->check(CLI::IsMember({"zero", "one", "scaled"}));
    build_cmd->add_option("--block-size", build.block_size, "Postings per block");
    build_cmd->add_option("--bm25-k1", build.k1);
    build_cmd->add_option("--bm25-b", build.b);
    build_cmd->add_flag("--keep-learned-zero", build.keep_learned_zero, "Keep postings whose learned weight is 0");

    SearchArgs search;
    auto* search_cmd = app.add_subcommand("search", "Run queries against an index");
    search_cmd->add_option("index", search.index)->required();
    search_cmd->add_option("queries", search.queries, "Queries: qid<TAB>term term ...")->required();
    search_cmd->add_option("--algorithm", search.algorithm)
        ->check(CLI::IsMember({"maxscore-2gti", "bmw-2gti", "exhaustive"}));
    search_cmd->add_option("--alpha", search.alpha, "Global pruning weight on BM25");
    search_cmd->add_option("--beta", search.beta, "Local pruning weight on BM25");
    search_cmd->add_option("--gamma", search.gamma, "Ranking weight on BM25");
    search_cmd->add_option("--k", search.k);
    search_cmd->add_option("--factor-f", search.factor_f, "Threshold overestimation factor (>= 1)");
    search_cmd->add_option("--runs-out", search.runs_out, "TREC run output (default stdout)");
    search_cmd->add_option("--counters-out", search.counters_out, "Per-query counter CSV");
    search_cmd->add_option("--threads", search.threads, "Query-level threads, 0 for the OpenMP default");

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Score a TREC run against qrels");
    eval_cmd->add_option("run", eval.run)->required();
    eval_cmd->add_option("qrels", eval.qrels)->required();
    eval_cmd->add_option("--metric", eval.metrics, "mrr@K, recall@K or ndcg@10; repeatable");
    eval_cmd->add_option("--csv-out", eval.csv_out, "Per-query CSV output");

    gti::VerifyOptions verify;
    verify.trials = 500;
    auto* verify_cmd = app.add_subcommand("verify", "Randomized rank-safety and property campaign");
    verify_cmd->add_option("--trials", verify.trials);
    verify_cmd->add_option("--seed", verify.seed);
    verify_cmd->add_option("--max-docs", verify.max_docs);
    verify_cmd->add_option("--threads", verify.threads, "0 for the OpenMP default, 1 for serial");

    try {
        app.parse(argc, argv);
    } catch (CLI::Success const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*build_cmd) {
            return cmd_build(build);
        }
        if (*search_cmd) {
            return cmd_search(search);
        }
        if (*eval_cmd) {
            return cmd_eval(eval);
        }
        if (*verify_cmd) {
            verify.validate();
            return cmd_verify(verify);
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
