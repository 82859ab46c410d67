// prmu: keyphrase PRMU classification and keyphrase-augmented retrieval experiments.
//
// Exit codes: 0 success, 1 evaluation failure, 2 input or usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <prmu/prmu.hpp>

namespace {

constexpr int kExitEvalFailure = 1;
constexpr int kExitInputError = 2;

std::string fixed1(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string fixed4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

/// Writes to the named file, or stdout when the name is empty or "-".
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) {
                throw prmu::InputError("cannot write '" + path + "'");
            }
        }
    }

    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int cmd_classify(const std::string& corpus_path, const std::string& output)
{
    const prmu::Corpus corpus = prmu::load_corpus(corpus_path);
    Output out(output);
    for (const auto& doc : corpus) {
        for (const auto& label : prmu::classify_document(doc)) {
            if (!label.category) {
                continue;
            }
            nlohmann::json rec;
            rec["id"] = doc.id;
            rec["keyphrase"] = label.keyphrase;
            rec["category"] = std::string(1, prmu::category_code(*label.category));
            out.stream() << rec.dump() << '\n';
        }
    }
    return 0;
}

int cmd_stats(const std::string& corpus_path, bool as_json)
{
    const prmu::Corpus corpus = prmu::load_corpus(corpus_path);
    const auto r = prmu::corpus_distribution(corpus);
    using prmu::Category;
    if (as_json) {
        nlohmann::json j;
        j["pct_present"] = r.percent(Category::Present);
        j["pct_reordered"] = r.percent(Category::Reordered);
        j["pct_mixed"] = r.percent(Category::Mixed);
        j["pct_unseen"] = r.percent(Category::Unseen);
        j["pct_uw"] = r.pct_uw;
        j["pct_uw_macro"] = r.pct_uw_macro;
        j["keyphrases"] = r.n_keyphrases;
        j["documents"] = r.n_docs;
        j["skipped_keyphrases"] = r.n_skipped;
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    std::printf("%6s %6s %6s %6s %6s   %s\n", "%P", "%R", "%M", "%U", "%uw", "(docs, keyphrases)");
    std::printf("%6s %6s %6s %6s %6s   (%llu, %llu)\n", fixed1(r.percent(Category::Present)).c_str(),
                fixed1(r.percent(Category::Reordered)).c_str(),
                fixed1(r.percent(Category::Mixed)).c_str(),
                fixed1(r.percent(Category::Unseen)).c_str(), fixed1(r.pct_uw).c_str(),
                static_cast<unsigned long long>(r.n_docs),
                static_cast<unsigned long long>(r.n_keyphrases));
    std::printf("%%uw averaged per document: %s\n", fixed1(r.pct_uw_macro).c_str());
    return 0;
}

int cmd_index(const std::string& corpus_path, const std::string& config, const std::string& output)
{
    const prmu::Corpus corpus = prmu::load_corpus(corpus_path);
    const auto index = prmu::InvertedIndex::build(corpus, prmu::IndexConfig::parse(config));
    index.save(output);
    std::cerr << "indexed " << index.num_docs() << " documents, " << index.num_terms()
              << " terms, " << fixed1(index.kp_appended()) << " keyphrases appended per document\n";
    return 0;
}

struct SearchOptions {
    std::string index_path;
    std::string corpus_path;
    std::string config = "none";
    std::string topics_path;
    std::string output;
    std::string tag;
    std::size_t k = 1000;
    bool rm3 = false;
    std::string fb_weighting = "score";
    prmu::Bm25Params bm25;
    prmu::Rm3Params rm3_params;
};

int cmd_search(SearchOptions opt)
{
    if (opt.index_path.empty() == opt.corpus_path.empty()) {
        throw prmu::InputError("search needs exactly one of --index or --corpus");
    }
    opt.rm3_params.weighting = opt.fb_weighting == "uniform" ? prmu::FeedbackWeighting::Uniform
                                                             : prmu::FeedbackWeighting::Score;
    const auto index = opt.index_path.empty()
                           ? prmu::InvertedIndex::build(prmu::load_corpus(opt.corpus_path),
                                                        prmu::IndexConfig::parse(opt.config))
                           : prmu::InvertedIndex::load(opt.index_path);
    const auto topics = prmu::load_topics(opt.topics_path);
    prmu::RunList run;
    run.tag = opt.tag.empty() ? (opt.rm3 ? "bm25rm3" : "bm25") : opt.tag;
    for (const auto& topic : topics) {
        const auto query = prmu::QueryModel::from_text(topic.text);
        auto hits = opt.rm3 ? prmu::search_rm3(index, query, opt.bm25, opt.rm3_params, opt.k)
                            : prmu::search(index, query, opt.k, opt.bm25);
        run.topics[topic.id] = prmu::to_run_entries(hits);
    }
    if (opt.output.empty() || opt.output == "-") {
        prmu::write_run(run, std::cout);
    } else {
        prmu::write_run(run, opt.output);
    }
    return 0;
}

int cmd_evaluate(const std::string& run_path, const std::string& qrels_path,
                 const std::string& metric_name, bool per_topic)
{
    const auto metric = prmu::Metric::parse(metric_name);
    const auto report =
        prmu::evaluate(prmu::load_run(run_path), prmu::load_qrels(qrels_path), metric);
    if (report.topic_count() == 0) {
        std::cerr << "error: no judged topic has a relevant document\n";
        return kExitEvalFailure;
    }
    if (per_topic) {
        for (const auto& [topic, s] : report.per_topic) {
            std::cout << report.metric << '\t' << topic << '\t' << fixed4(s) << '\n';
        }
    }
    std::cout << report.metric << "\tall\t" << fixed4(report.aggregate) << '\n';
    std::cout << "topics\tall\t" << report.topic_count() << '\n';
    return 0;
}

int cmd_significance(const std::string& run_a, const std::string& run_b,
                     const std::string& qrels_path, const std::string& metric_name)
{
    const auto metric = prmu::Metric::parse(metric_name);
    const auto qrels = prmu::load_qrels(qrels_path);
    const auto a = prmu::evaluate(prmu::load_run(run_a), qrels, metric);
    const auto b = prmu::evaluate(prmu::load_run(run_b), qrels, metric);
    if (a.topic_count() < 2) {
        std::cerr << "error: paired t-test needs at least two judged topics\n";
        return kExitEvalFailure;
    }
    const auto s = prmu::paired_t_test(a, b);
    nlohmann::json j;
    j["metric"] = a.metric;
    j["score_a"] = a.aggregate;
    j["score_b"] = b.aggregate;
    j["n"] = s.n;
    j["t"] = std::isfinite(s.t_statistic) ? nlohmann::json(s.t_statistic) : nlohmann::json(nullptr);
    j["p"] = s.p_value;
    j["significant"] = s.significant;
    j["degenerate_variance"] = s.degenerate_variance;
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_experiment(prmu::ExperimentSpec spec, const std::string& rows)
{
    if (!rows.empty()) {
        std::istringstream in("rows = " + rows);
        spec = prmu::parse_experiment_config(in, "--rows", std::move(spec));
    }
    if (spec.corpus_path.empty() || spec.topics_path.empty() || spec.qrels_path.empty()) {
        throw prmu::InputError("experiment needs corpus, topics and qrels paths");
    }
    const auto report = prmu::run_experiment(spec);
    const std::string json = prmu::report_json(report).dump(2) + "\n";
    const std::string table = prmu::report_table(report);
    if (!spec.output_dir.empty()) {
        std::filesystem::create_directories(spec.output_dir);
        const auto dir = std::filesystem::path(spec.output_dir);
        std::ofstream(dir / "report.json") << json;
        std::ofstream(dir / "report.txt") << table;
    }
    std::cout << table;
    return 0;
}

int cmd_eval_gen(const std::string& predictions_path, const std::string& corpus_path,
                 std::size_t k, bool micro)
{
    const auto corpus = prmu::load_corpus(corpus_path);
    const auto predictions = prmu::load_predictions(predictions_path);
    const auto r = prmu::grade_generation(predictions, corpus, k,
                                          micro ? prmu::FAveraging::Micro : prmu::FAveraging::Macro);
    using prmu::Category;
    const std::string f_name = "F@" + std::to_string(k);
    std::printf("%6s %6s %6s %6s %6s\n", "%P", "%R", "%M", "%U", f_name.c_str());
    std::printf("%6s %6s %6s %6s %6s\n", fixed1(r.percent(Category::Present)).c_str(),
                fixed1(r.percent(Category::Reordered)).c_str(),
                fixed1(r.percent(Category::Mixed)).c_str(),
                fixed1(r.percent(Category::Unseen)).c_str(), fixed1(100.0 * r.f_at_k).c_str());
    std::printf("documents: %zu, predictions graded: %zu, %s averaging\n", r.n_docs,
                r.n_predictions, micro ? "micro" : "macro");
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"PRMU keyphrase classification and keyphrase-augmented retrieval"};
    app.require_subcommand(1);

    std::string corpus_path;
    std::string output;

    auto* classify = app.add_subcommand("classify", "Label every keyphrase P, R, M or U (JSONL)");
    classify->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    classify->add_option("-o,--output", output, "Output file (default stdout)");

    bool stats_json = false;
    auto* stats = app.add_subcommand("stats", "PRMU distribution and %uw of a corpus");
    stats->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    stats->add_flag("--json", stats_json, "Print JSON instead of a table");

    std::string index_config = "none";
    auto* index = app.add_subcommand("index", "Build an index snapshot");
    index->add_option("--corpus", corpus_path, "Corpus JSONL")->required();
    index->add_option("--config", index_config,
                      "Appended categories: none, P, R, M, U, P+R, absent, highlight, expand, all");
    index->add_option("-o,--output", output, "Snapshot file")->required();

    SearchOptions sopt;
    auto* search = app.add_subcommand("search", "Retrieve topics with BM25 or BM25+RM3");
    search->add_option("--index", sopt.index_path, "Index snapshot");
    search->add_option("--corpus", sopt.corpus_path, "Corpus JSONL to index on the fly");
    search->add_option("--config", sopt.config, "Index configuration with --corpus");
    search->add_option("--topics", sopt.topics_path, "Topics TSV (id<TAB>text)")->required();
    search->add_option("-k,--k", sopt.k, "Documents per topic")->capture_default_str();
    search->add_option("--k1", sopt.bm25.k1, "BM25 k1")->capture_default_str();
    search->add_option("--b", sopt.bm25.b, "BM25 b")->capture_default_str();
    search->add_flag("--rm3", sopt.rm3, "Apply RM3 query expansion");
    search->add_option("--fb-docs", sopt.rm3_params.fb_docs, "RM3 feedback documents")
        ->capture_default_str();
    search->add_option("--fb-terms", sopt.rm3_params.fb_terms, "RM3 feedback terms")
        ->capture_default_str();
    search->add_option("--orig-weight", sopt.rm3_params.orig_weight, "RM3 original query weight")
        ->capture_default_str();
    search->add_option("--fb-weighting", sopt.fb_weighting, "Feedback document weights")
        ->check(CLI::IsMember({"score", "uniform"}))
        ->capture_default_str();
    search->add_option("-o,--output", sopt.output, "Run file (default stdout)");
    search->add_option("--tag", sopt.tag, "Run tag");

    std::string run_path;
    std::string qrels_path;
    std::string metric = "map@1000";
    bool per_topic = false;
    auto* evaluate = app.add_subcommand("evaluate", "Score a run against qrels");
    evaluate->add_option("--run", run_path, "TREC run file")->required();
    evaluate->add_option("--qrels", qrels_path, "TREC qrels file")->required();
    evaluate->add_option("--metric", metric, "map@K or recall@K")->capture_default_str();
    evaluate->add_flag("--per-topic", per_topic, "Also print per-topic scores");

    std::string run_b;
    auto* significance = app.add_subcommand("significance", "Paired t-test between two runs");
    significance->add_option("--run-a", run_path, "First run")->required();
    significance->add_option("--run-b", run_b, "Second run")->required();
    significance->add_option("--qrels", qrels_path, "TREC qrels file")->required();
    significance->add_option("--metric", metric, "map@K or recall@K")->capture_default_str();

    std::string config_file;
    std::string rows;
    prmu::ExperimentSpec espec;
    std::string exp_metric;
    std::string exp_weighting;
    auto* experiment =
        app.add_subcommand("experiment", "Run every indexing configuration with BM25 and BM25+RM3");
    experiment->add_option("--config", config_file, "Experiment file (key = value lines)");
    experiment->add_option("--corpus", espec.corpus_path, "Corpus JSONL");
    experiment->add_option("--topics", espec.topics_path, "Topics TSV");
    experiment->add_option("--qrels", espec.qrels_path, "TREC qrels");
    experiment->add_option("--metric", exp_metric, "map@K or recall@K (default map@1000)");
    experiment->add_option("--rows", rows, "Comma-separated rows (default: all nine)");
    experiment->add_option("--depth", espec.depth, "Documents retrieved per topic");
    experiment->add_option("--k1", espec.bm25.k1, "BM25 k1");
    experiment->add_option("--b", espec.bm25.b, "BM25 b");
    experiment->add_option("--fb-docs", espec.rm3.fb_docs, "RM3 feedback documents");
    experiment->add_option("--fb-terms", espec.rm3.fb_terms, "RM3 feedback terms");
    experiment->add_option("--orig-weight", espec.rm3.orig_weight, "RM3 original query weight");
    experiment->add_option("--fb-weighting", exp_weighting, "score or uniform")
        ->check(CLI::IsMember({"score", "uniform"}));
    experiment->add_option("-o,--output", espec.output_dir, "Directory for report.json/report.txt");
    experiment->add_option("-j,--jobs", espec.jobs, "Rows evaluated in parallel");

    std::string predictions_path;
    std::size_t gen_k = 5;
    bool micro = false;
    auto* eval_gen = app.add_subcommand("eval-gen", "PRMU distribution and F@k of generated keyphrases");
    eval_gen->add_option("--predictions", predictions_path, "Predictions JSONL")->required();
    eval_gen->add_option("--corpus", corpus_path, "Corpus JSONL with gold keyphrases")->required();
    eval_gen->add_option("-k,--k", gen_k, "Predictions considered per document")->capture_default_str();
    eval_gen->add_flag("--micro", micro, "Micro-average F instead of per-document macro");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (*classify) {
            return cmd_classify(corpus_path, output);
        }
        if (*stats) {
            return cmd_stats(corpus_path, stats_json);
        }
        if (*index) {
            return cmd_index(corpus_path, index_config, output);
        }
        if (*search) {
            return cmd_search(sopt);
        }
        if (*evaluate) {
            return cmd_evaluate(run_path, qrels_path, metric, per_topic);
        }
        if (*significance) {
            return cmd_significance(run_path, run_b, qrels_path, metric);
        }
        if (*experiment) {
            // Precedence: defaults, then the config file, then explicit flags.
            prmu::ExperimentSpec spec;
            if (!config_file.empty()) {
                std::ifstream in(config_file);
                if (!in) {
                    throw prmu::InputError("cannot open '" + config_file + "'");
                }
                spec = prmu::parse_experiment_config(in, config_file);
            }
            auto given = [&](const char* flag) { return experiment->count(flag) > 0; };
            if (given("--corpus")) spec.corpus_path = espec.corpus_path;
            if (given("--topics")) spec.topics_path = espec.topics_path;
            if (given("--qrels")) spec.qrels_path = espec.qrels_path;
            if (given("--metric")) spec.metric = prmu::Metric::parse(exp_metric);
            if (given("--depth")) spec.depth = espec.depth;
            if (given("--k1")) spec.bm25.k1 = espec.bm25.k1;
            if (given("--b")) spec.bm25.b = espec.bm25.b;
            if (given("--fb-docs")) spec.rm3.fb_docs = espec.rm3.fb_docs;
            if (given("--fb-terms")) spec.rm3.fb_terms = espec.rm3.fb_terms;
            if (given("--orig-weight")) spec.rm3.orig_weight = espec.rm3.orig_weight;
            if (given("--fb-weighting")) {
                spec.rm3.weighting = exp_weighting == "uniform" ? prmu::FeedbackWeighting::Uniform
                                                                : prmu::FeedbackWeighting::Score;
            }
            if (given("--output")) spec.output_dir = espec.output_dir;
            if (given("--jobs")) spec.jobs = espec.jobs;
            return cmd_experiment(std::move(spec), rows);
        }
        if (*eval_gen) {
            return cmd_eval_gen(predictions_path, corpus_path, gen_k, micro);
        }
    } catch (const prmu::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEvalFailure;
    }
    return kExitInputError;
}
