#include "gti/verify.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <ostream>
#include <random>
#include <sstream>

#include <omp.h>

#include "gti/batch.hpp"
#include "gti/oracle.hpp"
#include "gti/synthetic.hpp"

namespace gti {

namespace {

    enum CheckIndex : std::size_t {
        kSafetyMaxScore = 0,
        kSafetyBmw,
        kContainment,
        kMeanGamma,
        kRelevantCount,
        kCheckCount
    };

    constexpr double kScoreTolerance = 1e-9;
    constexpr Algorithm kTraversals[] = {Algorithm::MaxScore2Gti, Algorithm::Bmw2Gti};

    template <typename T, std::size_t N>
    auto pick(std::mt19937_64& rng, T const (&options)[N]) -> T
    {
        return options[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
    }

    auto describe(Query const& q) -> std::string
    {
        std::ostringstream s;
        s << "query [";
        for (std::size_t i = 0; i < q.terms.size(); ++i) {
            s << (i ? " " : "") << q.terms[i];
        }
        s << ']';
        return s.str();
    }

    auto describe(TraversalConfig const& c) -> std::string
    {
        std::ostringstream s;
        s << algorithm_name(c.algorithm) << " alpha=" << c.coeffs.alpha << " beta=" << c.coeffs.beta
          << " gamma=" << c.coeffs.gamma << " k=" << c.k;
        return s.str();
    }

    /// Empty when equal, else the first difference.
    auto compare_rankings(RankedList const& got, RankedList const& want) -> std::string
    {
        if (got.size() != want.size()) {
            return "length " + std::to_string(got.size()) + " vs " + std::to_string(want.size());
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            auto tol = kScoreTolerance * std::max(1.0, std::abs(want[i].score));
            if (got[i].doc != want[i].doc || std::abs(got[i].score - want[i].score) > tol) {
                std::ostringstream s;
                s.precision(17);
                s << "rank " << i + 1 << ": doc " << got[i].doc << " score " << got[i].score << " vs doc "
                  << want[i].doc << " score " << want[i].score;
                return s.str();
            }
        }
        return {};
    }

    void record(TrialCheck& check, CheckOutcome const& outcome, std::string const& context)
    {
        if (outcome.status == CheckStatus::Holds || outcome.status == CheckStatus::Violated) {
            check.tested = true;
        }
        if (outcome.status == CheckStatus::Violated && !check.violated) {
            check.violated = true;
            std::ostringstream s;
            s << context << " gap=" << outcome.gap;
            if (outcome.witness) {
                s << " missing doc " << *outcome.witness;
            }
            check.detail = s.str();
        }
    }

    auto random_labels(
        std::mt19937_64& rng, RankedList const& gamma_ranking, std::size_t k) -> std::unordered_set<DocId>
    {
        std::unordered_set<DocId> relevant;
        if (gamma_ranking.empty()) {
            return relevant;
        }
        if (std::bernoulli_distribution(0.6)(rng)) {
            // A prefix of the gamma ranking: gamma orders every pair correctly.
            auto m = std::uniform_int_distribution<std::size_t>(1, std::min(gamma_ranking.size(), 2 * k))(rng);
            for (std::size_t i = 0; i < m; ++i) {
                relevant.insert(gamma_ranking[i].doc);
            }
        } else {
            std::bernoulli_distribution coin(0.2);
            for (auto const& e : gamma_ranking) {
                if (coin(rng)) {
                    relevant.insert(e.doc);
                }
            }
        }
        return relevant;
    }

    auto aggregate(VerifyOptions const& options, std::vector<TrialOutcome> const& outcomes, double seconds)
        -> VerifyReport
    {
        VerifyReport report;
        report.trials = options.trials;
        report.seconds = seconds;
        for (auto const& name : check_names()) {
            report.checks.push_back({name, 0, 0, 0, std::nullopt, {}});
        }
        for (auto const& trial : outcomes) {
            for (std::size_t i = 0; i < trial.checks.size(); ++i) {
                auto& tally = report.checks[i];
                auto const& c = trial.checks[i];
                ++tally.attempted;
                tally.tested += c.tested ? 1 : 0;
                if (c.violated) {
                    ++tally.violations;
                    if (!tally.first_violation_seed) {
                        tally.first_violation_seed = trial.seed;
                        tally.first_violation = c.detail;
                    }
                }
            }
        }
        return report;
    }

}  // namespace

void VerifyOptions::validate() const
{
    if (trials == 0) {
        throw DomainError("trials must be at least 1");
    }
    if (max_docs == 0) {
        throw DomainError("max-docs must be at least 1");
    }
    if (threads < 0) {
        throw DomainError("threads must be non-negative");
    }
}

auto VerifyReport::violations() const -> std::size_t
{
    std::size_t n = 0;
    for (auto const& c : checks) {
        n += c.violations;
    }
    return n;
}

auto VerifyReport::find(std::string const& name) const -> CheckTally const*
{
    for (auto const& c : checks) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

auto check_names() -> std::vector<std::string> const&
{
    static std::vector<std::string> const names = {
        "rank_safety_maxscore", "rank_safety_bmw", "containment", "mean_gamma", "relevant_count"};
    return names;
}

auto run_trial(std::uint64_t seed, std::size_t max_docs) -> TrialOutcome
{
    TrialOutcome out;
    out.seed = seed;
    out.checks.resize(kCheckCount);

    std::mt19937_64 rng(seed);
    RandomCorpusSpec spec;
    spec.max_docs = max_docs;
    auto inst = random_instance(rng, spec);
    auto index = build_index(inst.corpus, inst.build);
    auto query = random_query(rng, inst.vocab, 8);
    auto const n_docs = static_cast<std::size_t>(index.num_docs);
    std::size_t const k_options[] = {1, 5, 10, n_docs};
    auto const k = pick(rng, k_options);
    auto const context = "seed " + std::to_string(seed) + " " + describe(query);

    // Rank safety: equal coefficients must reproduce the exhaustive ranking.
    static constexpr double kEqual[] = {0.0, 0.3, 0.5, 1.0};
    for (auto x : kEqual) {
        auto want = exhaustive_topk(query, index, x, k);
        for (std::size_t a = 0; a < 2; ++a) {
            TraversalConfig config;
            config.coeffs = {x, x, x};
            config.k = k;
            config.algorithm = kTraversals[a];
            auto got = run_traversal(query, index, config);
            auto& check = out.checks[a == 0 ? kSafetyMaxScore : kSafetyBmw];
            check.tested = true;
            auto diff = compare_rankings(got.results, want);
            if (!diff.empty() && !check.violated) {
                check.violated = true;
                check.detail = context + " " + describe(config) + ": " + diff;
            }
        }
    }

    // Containment of the documents all three rankings agree on.
    {
        static constexpr double kBeta[] = {0.0, 0.3, 1.0};
        static constexpr double kGamma[] = {0.05, 0.5};
        TraversalConfig config;
        config.coeffs = {1.0, pick(rng, kBeta), pick(rng, kGamma)};
        config.k = k;
        for (auto algo : kTraversals) {
            config.algorithm = algo;
            record(out.checks[kContainment], check_containment(query, index, config), context + " " + describe(config));
        }
    }

    static constexpr double kGrid[] = {0.0, 0.05, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0};

    // Mean gamma score against two-stage retrieval.
    {
        TraversalConfig config;
        config.k = k;
        auto a = pick(rng, kGrid);
        auto b = pick(rng, kGrid);
        auto c = pick(rng, kGrid);
        config.coeffs = std::bernoulli_distribution(0.5)(rng) ? MixCoefficients{a, a, c} : MixCoefficients{a, b, b};
        for (auto algo : kTraversals) {
            config.algorithm = algo;
            record(out.checks[kMeanGamma], check_mean_score(query, index, config), context + " " + describe(config));
        }
    }

    // Relevant-document count against two-stage retrieval under chain labels.
    {
        TraversalConfig config;
        config.k = k;
        auto a = pick(rng, kGrid);
        auto b = pick(rng, kGrid);
        auto c = pick(rng, kGrid);
        auto shape = std::uniform_int_distribution<int>(0, 2)(rng);
        config.coeffs = shape == 0 ? MixCoefficients{a, a, c} : shape == 1 ? MixCoefficients{a, b, b}
                                                                          : MixCoefficients{a, b, c};
        auto relevant = random_labels(rng, full_ranking(query, index, c), k);
        for (auto algo : kTraversals) {
            config.algorithm = algo;
            record(
                out.checks[kRelevantCount],
                check_relevant_count(query, index, config, relevant),
                context + " " + describe(config));
        }
    }
    return out;
}

auto run_verify_serial(VerifyOptions const& options) -> VerifyReport
{
    options.validate();
    auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes;
    outcomes.reserve(options.trials);
    for (std::size_t t = 0; t < options.trials; ++t) {
        outcomes.push_back(run_trial(options.seed + t, options.max_docs));
    }
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return aggregate(options, outcomes, seconds);
}

auto run_verify(VerifyOptions const& options) -> VerifyReport
{
    options.validate();
    if (options.threads == 1) {
        return run_verify_serial(options);
    }
    auto start = std::chrono::steady_clock::now();
    std::vector<TrialOutcome> outcomes(options.trials);
    std::exception_ptr failure;
    auto n = static_cast<std::ptrdiff_t>(options.trials);
    int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t t = 0; t < n; ++t) {
        try {
            outcomes[static_cast<std::size_t>(t)] =
                run_trial(options.seed + static_cast<std::uint64_t>(t), options.max_docs);
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return aggregate(options, outcomes, seconds);
}

void write_verify_report(std::ostream& out, VerifyReport const& report)
{
    out << "trials " << report.trials << " in " << report.seconds << " s\n";
    for (auto const& c : report.checks) {
        out << c.name << ": tested " << c.tested << "/" << c.attempted << ", violations " << c.violations;
        if (c.first_violation_seed) {
            out << " (repro: --seed " << *c.first_violation_seed << " --trials 1; " << c.first_violation << ")";
        }
        out << '\n';
    }
}

}  // namespace gti
