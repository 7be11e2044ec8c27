// pronpred: dataset construction, LM gap-filling baseline and scoring for
// cross-lingual pronoun prediction.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pronpred/alignment.hpp"
#include "pronpred/baseline.hpp"
#include "pronpred/evaluation.hpp"
#include "pronpred/extraction.hpp"
#include "pronpred/format.hpp"
#include "pronpred/lm.hpp"
#include "pronpred/types.hpp"
#include "pronpred/util.hpp"

using namespace pronpred;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    // "start:stop:step" (step is a magnitude) or a comma-separated list.
    std::vector<double> grid;
    auto fields = util::split_fields(text, ':');
    try {
        if (fields.size() == 3) {
            double start = std::stod(std::string(fields[0]));
            double stop = std::stod(std::string(fields[1]));
            double step = std::abs(std::stod(std::string(fields[2])));
            if (step == 0.0) throw Error("penalty grid step must be non-zero");
            if (start < stop) std::swap(start, stop);
            for (double v = start; v >= stop - 1e-9; v -= step) grid.push_back(v);
            return grid;
        }
        for (auto f : util::split_fields(text, ','))
            grid.push_back(std::stod(std::string(f)));
    } catch (const std::logic_error&) {
        throw Error("cannot parse penalty grid '" + text + "'");
    }
    if (grid.empty()) throw Error("empty penalty grid");
    return grid;
}

std::vector<extract::AnnotatedSegment> load_segments(const std::string& source_path,
                                                     const std::string& target_path,
                                                     const std::string& align_path,
                                                     const std::optional<std::string>& deps_path) {
    auto source = format::read_token_corpus_file(source_path);
    auto target = format::read_tagged_corpus_file(target_path);
    auto alignments = format::read_alignment_file(align_path);
    if (source.size() != target.size() || source.size() != alignments.size())
        throw LengthMismatch("corpus sides differ: " + std::to_string(source.size()) +
                             " source / " + std::to_string(target.size()) + " target / " +
                             std::to_string(alignments.size()) + " alignment segments");
    std::optional<std::vector<std::vector<std::string>>> deps;
    if (deps_path) {
        deps = format::read_token_corpus_file(*deps_path);
        if (deps->size() != source.size())
            throw LengthMismatch("dependency label file has " + std::to_string(deps->size()) +
                                 " segments, source has " + std::to_string(source.size()));
    }
    std::vector<extract::AnnotatedSegment> segments(source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
        segments[i].source = std::move(source[i]);
        segments[i].target = std::move(target[i]);
        segments[i].alignment = std::move(alignments[i]);
        if (deps) segments[i].dep_labels = std::move((*deps)[i]);
    }
    return segments;
}

void print_class_table(std::ostream& out, const SubtaskSpec& spec,
                       const extract::ExtractStats& stats, bool filtered) {
    char buf[128];
    std::int64_t total_u = 0, total_k = 0;
    if (filtered)
        std::snprintf(buf, sizeof(buf), "%-10s %10s %10s\n", "class", "unfiltered", "kept");
    else
        std::snprintf(buf, sizeof(buf), "%-10s %10s\n", "class", "count");
    out << buf;
    for (const auto& cls : spec.classes) {
        std::int64_t u = 0, k = 0;
        if (auto it = stats.class_counts_unfiltered.find(cls);
            it != stats.class_counts_unfiltered.end())
            u = it->second;
        if (auto it = stats.class_counts.find(cls); it != stats.class_counts.end()) k = it->second;
        total_u += u;
        total_k += k;
        if (filtered)
            std::snprintf(buf, sizeof(buf), "%-10s %10" PRId64 " %10" PRId64 "\n", cls.c_str(), u,
                          k);
        else
            std::snprintf(buf, sizeof(buf), "%-10s %10" PRId64 "\n", cls.c_str(), k);
        out << buf;
    }
    if (filtered)
        std::snprintf(buf, sizeof(buf), "%-10s %10" PRId64 " %10" PRId64 "\n", "total", total_u,
                      total_k);
    else
        std::snprintf(buf, sizeof(buf), "%-10s %10" PRId64 "\n", "total", total_k);
    out << buf;
}

std::vector<std::vector<std::string>> read_lm_corpus(const std::string& path,
                                                     const std::string& input_format) {
    if (input_format == "plain") return format::read_token_corpus_file(path);
    auto tagged = format::read_tagged_corpus_file(path);
    std::vector<std::vector<std::string>> corpus(tagged.size());
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        corpus[i].reserve(tagged[i].size());
        for (const auto& tok : tagged[i]) corpus[i].push_back(tok.lemma);
    }
    return corpus;
}

baseline::CandidateSet resolve_candidates(const std::optional<std::string>& json_path,
                                          const std::optional<std::string>& train_path,
                                          int top_k, const SubtaskSpec& spec) {
    baseline::CandidateSet cands;
    if (json_path) {
        cands = baseline::load_candidate_file(*json_path);
    } else if (train_path) {
        auto training = format::read_instance_file(*train_path, spec);
        cands = baseline::build_candidate_set(training, spec, top_k);
    } else {
        throw Error("either --candidates or --candidates-from is required");
    }
    for (const auto& c : cands.all())
        if (!spec.has_class(c.cls))
            throw UnknownLabel("candidate class '" + c.cls + "' is not a " +
                               to_string(spec.direction) + " class");
    return cands;
}

baseline::SearchMode search_mode_from_string(const std::string& s) {
    if (s == "auto") return baseline::SearchMode::automatic;
    if (s == "exhaustive") return baseline::SearchMode::exhaustive;
    if (s == "beam") return baseline::SearchMode::beam;
    throw Error("unknown search mode '" + s + "'");
}

void write_prediction_files(const std::string& out_path,
                            const std::optional<std::string>& fillers_path,
                            const std::vector<std::vector<baseline::Prediction>>& preds) {
    auto out = open_out(out_path);
    for (const auto& line : preds) {
        std::vector<std::string> classes;
        classes.reserve(line.size());
        for (const auto& p : line) classes.push_back(p.cls);
        out << util::join(classes, " ") << '\n';
    }
    if (fillers_path) {
        auto fout = open_out(*fillers_path);
        for (const auto& line : preds) {
            std::vector<std::string> fillers;
            fillers.reserve(line.size());
            for (const auto& p : line) fillers.push_back(p.filler);
            fout << util::join(fillers, " ") << '\n';
        }
    }
}

void print_grid_table(std::ostream& out, const baseline::TuneResult& result) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%8s %9s %8s\n", "penalty", "macro-R", "NONE");
    out << buf;
    for (const auto& gp : result.grid) {
        std::snprintf(buf, sizeof(buf), "%8.2f %9.2f %8" PRId64 "\n", gp.penalty,
                      gp.macro_recall, gp.none_count);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "chosen penalty: %.2f (dev macro-R %.2f)\n", result.penalty,
                  result.macro_recall);
    out << buf;
}

struct PrfRow {
    double p = 100.0, r = 100.0, f = 100.0;
};

// Exact 2-decimal percentages from aggregated link counts; empty hypothesis
// counts as precision 100, empty gold as recall 100.
PrfRow prf_percent(const align::LinkCounts& c) {
    PrfRow row;
    row.p = c.hyp == 0 ? 100.0
                       : eval::percent_2dp(static_cast<std::int64_t>(c.correct),
                                           static_cast<std::int64_t>(c.hyp));
    row.r = c.gold == 0 ? 100.0
                        : eval::percent_2dp(static_cast<std::int64_t>(c.correct),
                                            static_cast<std::int64_t>(c.gold));
    if (c.hyp + c.gold == 0)
        row.f = 100.0;
    else if (c.correct == 0)
        row.f = 0.0;
    else
        row.f = eval::percent_2dp(static_cast<std::int64_t>(2 * c.correct),
                                  static_cast<std::int64_t>(c.hyp + c.gold));
    return row;
}

// ---------------------------------------------------------------------------

struct SymmetrizeArgs {
    std::string fwd, bwd, heuristic = "grow-diag-final-and", out;
};

int run_symmetrize(const SymmetrizeArgs& a) {
    auto fwd = format::read_alignment_file(a.fwd);
    auto bwd = format::read_alignment_file(a.bwd);
    if (fwd.size() != bwd.size())
        throw LengthMismatch("forward file has " + std::to_string(fwd.size()) +
                             " segments, backward has " + std::to_string(bwd.size()));
    auto h = align::heuristic_from_string(a.heuristic);
    std::vector<AlignmentSet> result(fwd.size());
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        int src_len = 0, tgt_len = 0;
        for (const auto& l : fwd[i]) {
            src_len = std::max(src_len, l.src + 1);
            tgt_len = std::max(tgt_len, l.tgt + 1);
        }
        for (const auto& l : bwd[i]) {
            src_len = std::max(src_len, l.src + 1);
            tgt_len = std::max(tgt_len, l.tgt + 1);
        }
        result[i] = align::symmetrize(fwd[i], bwd[i], h, src_len, tgt_len);
    }
    format::write_alignment_file(a.out, result);
    std::cout << "symmetrized " << result.size() << " segments with " << align::to_string(h)
              << "\n";
    return 0;
}

struct ExtractArgs {
    std::string direction, source, target, alignments, out;
    std::optional<std::string> dep_labels;
    std::optional<std::string> freq_out;
    std::vector<std::string> keep_labels;
    bool no_subject_filter = false;
    bool lm_corpus = false;
};

int run_extract(const ExtractArgs& a, int jobs) {
    auto spec = builtin_spec(direction_from_string(a.direction));
    bool filtering = !a.no_subject_filter && extract::direction_filters_subjects(spec.direction);
    if (filtering && !a.dep_labels)
        throw MissingLabels("direction " + to_string(spec.direction) +
                            " filters subjects: pass --dep-labels or --no-subject-filter");
    auto segments = load_segments(a.source, a.target, a.alignments, a.dep_labels);
    extract::ExtractOptions opts;
    opts.subject_filter = !a.no_subject_filter;
    opts.lm_corpus_mode = a.lm_corpus;
    if (!a.keep_labels.empty())
        opts.keep_labels = std::set<std::string>(a.keep_labels.begin(), a.keep_labels.end());
    extract::ExtractStats stats;
    auto instances = extract::extract_examples(segments, spec, opts, &stats, jobs);
    format::write_instance_file(a.out, instances);
    std::cout << "segments: " << stats.segments << "  instances: " << stats.instances
              << "  pronouns: " << stats.pronouns_seen << "  kept: " << stats.pronouns_kept
              << "  inserted placeholders: " << stats.inserted_placeholders << "\n";
    print_class_table(std::cout, spec, stats, filtering);
    if (a.freq_out) {
        auto fout = open_out(*a.freq_out);
        print_class_table(fout, spec, stats, filtering);
    }
    return 0;
}

struct TrainLmArgs {
    std::string in, out;
    int order = 5;
    int unk_threshold = 1;
    std::string input_format = "tagged";
};

int run_train_lm(const TrainLmArgs& a) {
    auto corpus = read_lm_corpus(a.in, a.input_format);
    auto model = lm::NGramModel::train(corpus, a.order, a.unk_threshold);
    model.save_file(a.out);
    std::cout << "trained order-" << model.order() << " model on " << corpus.size()
              << " segments (smoothing: " << lm::to_string(model.smoothing())
              << ", prediction vocabulary: " << model.vocab_size() << ")\n";
    return 0;
}

struct PredictArgs {
    std::string direction, model, in, out;
    std::optional<std::string> candidates;
    std::optional<std::string> candidates_from;
    std::optional<std::string> fillers_out;
    int top_k = 20;
    double none_penalty = 0.0;
    std::string search = "auto";
};

int run_predict(const PredictArgs& a, int jobs) {
    auto spec = builtin_spec(direction_from_string(a.direction));
    auto model = lm::NGramModel::load_file(a.model);
    auto cands = resolve_candidates(a.candidates, a.candidates_from, a.top_k, spec);
    auto instances = format::read_instance_file(a.in, spec);
    auto preds = baseline::predict_all(model, instances, cands, a.none_penalty,
                                       search_mode_from_string(a.search), jobs);
    write_prediction_files(a.out, a.fillers_out, preds);
    std::size_t gaps = 0;
    for (const auto& line : preds) gaps += line.size();
    std::cout << "predicted " << gaps << " placeholders in " << instances.size()
              << " instances (NONE penalty " << a.none_penalty << ")\n";
    return 0;
}

struct TuneArgs {
    std::string direction, model, dev;
    std::optional<std::string> candidates;
    std::optional<std::string> candidates_from;
    std::optional<std::string> out;
    int top_k = 20;
    std::string grid = "0:-4:0.5";
};

int run_tune(const TuneArgs& a, int jobs) {
    auto spec = builtin_spec(direction_from_string(a.direction));
    auto model = lm::NGramModel::load_file(a.model);
    auto cands = resolve_candidates(a.candidates, a.candidates_from, a.top_k, spec);
    auto dev = format::read_instance_file(a.dev, spec);
    auto result = baseline::tune_none_penalty(model, dev, cands, spec, parse_grid(a.grid), jobs);
    print_grid_table(std::cout, result);
    if (a.out) {
        auto out = open_out(*a.out);
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g\n", result.penalty);
        out << buf;
    }
    return 0;
}

struct ScoreArgs {
    std::string direction, gold, pred, system;
    bool json = false;
};

int run_score(const ScoreArgs& a) {
    auto spec = builtin_spec(direction_from_string(a.direction));
    auto gold = format::read_instance_file(a.gold, spec);
    auto preds = format::read_prediction_file(a.pred);
    auto report = eval::score_report(gold, preds, spec);
    std::string system = a.system;
    if (system.empty())
        system = std::filesystem::path(a.pred).filename().string();
    if (a.json)
        std::cout << eval::format_json(report, system);
    else
        std::cout << eval::format_text(report, system);
    return 0;
}

struct AlignEvalArgs {
    std::string hyp, gold;
    std::optional<std::string> pronoun_positions;
    bool json = false;
};

int run_align_eval(const AlignEvalArgs& a) {
    auto hyp = format::read_alignment_file(a.hyp);
    auto gold = format::read_alignment_file(a.gold);
    if (hyp.size() != gold.size())
        throw LengthMismatch("hypothesis file has " + std::to_string(hyp.size()) +
                             " segments, gold has " + std::to_string(gold.size()));
    std::optional<std::vector<std::set<int>>> positions;
    if (a.pronoun_positions) {
        auto rows = format::read_token_corpus_file(*a.pronoun_positions);
        if (rows.size() != hyp.size())
            throw LengthMismatch("pronoun position file has " + std::to_string(rows.size()) +
                                 " segments, alignments have " + std::to_string(hyp.size()));
        positions.emplace();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::set<int> idx;
            for (const auto& tok : rows[i]) {
                auto v = util::parse_canonical_int(tok);
                if (!v)
                    throw MalformedLine(1, "bad source index '" + tok + "'", i + 1,
                                        *a.pronoun_positions);
                idx.insert(*v);
            }
            positions->push_back(std::move(idx));
        }
    }

    align::LinkCounts all, pron;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
        all.add(hyp[i], gold[i]);
        if (positions) {
            const auto& idx = (*positions)[i];
            AlignmentSet hyp_p, gold_p;
            for (const auto& l : hyp[i])
                if (idx.count(l.src)) hyp_p.insert(l);
            for (const auto& l : gold[i])
                if (idx.count(l.src)) gold_p.insert(l);
            pron.add(hyp_p, gold_p);
        }
    }

    PrfRow all_row = prf_percent(all);
    if (a.json) {
        nlohmann::json j;
        j["all"] = {{"precision", all_row.p},
                    {"recall", all_row.r},
                    {"f1", all_row.f},
                    {"hyp", all.hyp},
                    {"gold", all.gold},
                    {"correct", all.correct}};
        if (positions) {
            PrfRow pr = prf_percent(pron);
            j["pronouns"] = {{"precision", pr.p}, {"recall", pr.r},      {"f1", pr.f},
                             {"hyp", pron.hyp},   {"gold", pron.gold},   {"correct", pron.correct}};
        }
        std::cout << j.dump(2) << "\n";
    } else {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s\n", "links", "precision", "recall",
                      "F1");
        std::cout << buf;
        std::snprintf(buf, sizeof(buf), "%-10s %10.2f %10.2f %10.2f\n", "all", all_row.p,
                      all_row.r, all_row.f);
        std::cout << buf;
        if (positions) {
            PrfRow pr = prf_percent(pron);
            std::snprintf(buf, sizeof(buf), "%-10s %10.2f %10.2f %10.2f\n", "pronouns", pr.p,
                          pr.r, pr.f);
            std::cout << buf;
        }
    }
    return 0;
}

struct ReproduceArgs {
    std::string direction, train_prefix, dev_prefix, test_prefix, out_dir;
    int order = 5;
    int unk_threshold = 1;
    int top_k = 20;
    std::string grid = "0:-4:0.5";
    bool no_subject_filter = false;
};

std::vector<extract::AnnotatedSegment> load_prefixed(const std::string& prefix,
                                                     bool want_deps) {
    std::optional<std::string> deps;
    if (want_deps && std::filesystem::exists(prefix + ".deps")) deps = prefix + ".deps";
    return load_segments(prefix + ".src", prefix + ".tgt", prefix + ".align", deps);
}

int run_reproduce(const ReproduceArgs& a, int jobs) {
    auto spec = builtin_spec(direction_from_string(a.direction));
    std::filesystem::create_directories(a.out_dir);
    auto out_path = [&](const char* name) {
        return (std::filesystem::path(a.out_dir) / name).string();
    };

    extract::ExtractOptions opts;
    opts.subject_filter = !a.no_subject_filter;
    bool filtering = opts.subject_filter && extract::direction_filters_subjects(spec.direction);

    auto load_split = [&](const std::string& prefix) {
        auto segments = load_prefixed(prefix, filtering);
        if (filtering && (segments.empty() || !segments.front().dep_labels))
            throw MissingLabels("direction " + to_string(spec.direction) + " filters subjects: " +
                                prefix + ".deps not found (or pass --no-subject-filter)");
        return segments;
    };

    std::cout << "[1/6] extracting training instances\n";
    auto train_segments = load_split(a.train_prefix);
    extract::ExtractStats train_stats;
    auto train = extract::extract_examples(train_segments, spec, opts, &train_stats, jobs);
    format::write_instance_file(out_path("train.tsv"), train);
    print_class_table(std::cout, spec, train_stats, filtering);

    std::cout << "[2/6] training the language model\n";
    std::vector<std::vector<std::string>> corpus(train_segments.size());
    for (std::size_t i = 0; i < train_segments.size(); ++i) {
        corpus[i].reserve(train_segments[i].target.size());
        for (const auto& tok : train_segments[i].target) corpus[i].push_back(tok.lemma);
    }
    auto model = lm::NGramModel::train(corpus, a.order, a.unk_threshold);
    model.save_file(out_path("model.lm"));
    std::cout << "  smoothing: " << lm::to_string(model.smoothing())
              << "  prediction vocabulary: " << model.vocab_size() << "\n";

    std::cout << "[3/6] building the candidate set\n";
    auto cands = baseline::build_candidate_set(train, spec, a.top_k);
    baseline::save_candidate_file(out_path("candidates.json"), cands);

    std::cout << "[4/6] tuning the NONE penalty\n";
    auto dev = extract::extract_examples(load_split(a.dev_prefix), spec, opts, nullptr, jobs);
    format::write_instance_file(out_path("dev.tsv"), dev);
    auto tuned = baseline::tune_none_penalty(model, dev, cands, spec, parse_grid(a.grid), jobs);
    print_grid_table(std::cout, tuned);
    {
        auto out = open_out(out_path("penalty.txt"));
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g\n", tuned.penalty);
        out << buf;
    }

    std::cout << "[5/6] predicting on the test split\n";
    auto test = extract::extract_examples(load_split(a.test_prefix), spec, opts, nullptr, jobs);
    format::write_instance_file(out_path("test.tsv"), test);
    auto preds = baseline::predict_all(model, test, cands, tuned.penalty,
                                       baseline::SearchMode::automatic, jobs);
    std::string fillers_path = out_path("fillers.txt");
    write_prediction_files(out_path("predictions.txt"), fillers_path, preds);

    std::cout << "[6/6] scoring\n";
    std::vector<std::vector<std::string>> pred_labels(preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (const auto& p : preds[i]) pred_labels[i].push_back(p.cls);
    auto report = eval::score_report(test, pred_labels, spec);
    std::cout << eval::format_text(report, "lm-baseline");
    {
        auto out = open_out(out_path("score.json"));
        out << eval::format_json(report, "lm-baseline");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-lingual pronoun prediction toolkit"};
    app.set_version_flag("--version", "pronpred 1.0.0");
    app.set_config("--config", "", "read options from a key=value config file");
    unsigned long seed = 42;
    int jobs = 1;
    bool dump_config = false;
    app.add_option("--seed", seed, "seed for sampling utilities")->capture_default_str();
    app.add_option("--jobs", jobs, "worker threads for corpus-level operations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");
    app.require_subcommand(0, 1);

    static const std::vector<std::string> kDirections = {"en-fr", "fr-en", "en-de", "de-en"};

    SymmetrizeArgs sym;
    auto* sym_cmd = app.add_subcommand("symmetrize", "combine forward and backward alignments");
    sym_cmd->add_option("--fwd", sym.fwd, "forward alignment file (s-t pairs)")->required();
    sym_cmd->add_option("--bwd", sym.bwd, "backward alignment file (s-t pairs)")->required();
    sym_cmd->add_option("--heuristic", sym.heuristic,
                        "intersection, union, grow-diag, grow-diag-final, grow-diag-final-and")
        ->capture_default_str();
    sym_cmd->add_option("--out", sym.out, "output alignment file")->required();

    ExtractArgs ext;
    auto* ext_cmd = app.add_subcommand("extract", "build prediction instances from a bitext");
    ext_cmd->add_option("--direction", ext.direction, "translation direction")
        ->required()
        ->check(CLI::IsMember(kDirections));
    ext_cmd->add_option("--source", ext.source, "plain tokenized source file")->required();
    ext_cmd->add_option("--target-tagged", ext.target, "lemma|TAG target file")->required();
    ext_cmd->add_option("--alignments", ext.alignments, "word alignment file")->required();
    ext_cmd->add_option("--dep-labels", ext.dep_labels,
                        "per-token dependency labels for the source side");
    ext_cmd->add_option("--keep-label", ext.keep_labels,
                        "dependency labels treated as subjects (overrides the default)");
    ext_cmd->add_flag("--no-subject-filter", ext.no_subject_filter,
                      "keep pronouns in any syntactic function");
    ext_cmd->add_flag("--lm-corpus", ext.lm_corpus,
                      "emit every segment, including ones without placeholders");
    ext_cmd->add_option("--out", ext.out, "output instance file")->required();
    ext_cmd->add_option("--freq-out", ext.freq_out, "also write the class frequency table here");

    TrainLmArgs tlm;
    auto* tlm_cmd = app.add_subcommand("train-lm", "train the n-gram language model");
    tlm_cmd->add_option("--in", tlm.in, "training corpus")->required();
    tlm_cmd->add_option("--order", tlm.order, "model order")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    tlm_cmd->add_option("--unk-threshold", tlm.unk_threshold,
                        "map words with count <= N to <unk>")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    tlm_cmd->add_option("--format", tlm.input_format, "tagged (lemma|TAG) or plain")
        ->check(CLI::IsMember({"tagged", "plain"}))
        ->capture_default_str();
    tlm_cmd->add_option("--out", tlm.out, "model file to write")->required();

    PredictArgs prd;
    auto* prd_cmd = app.add_subcommand("predict", "fill placeholders with the LM baseline");
    prd_cmd->add_option("--direction", prd.direction, "translation direction")
        ->required()
        ->check(CLI::IsMember(kDirections));
    prd_cmd->add_option("--model", prd.model, "language model file")->required();
    auto* prd_json = prd_cmd->add_option("--candidates", prd.candidates, "candidate JSON file");
    prd_cmd->add_option("--candidates-from", prd.candidates_from,
                        "build candidates from this training instance file")
        ->excludes(prd_json);
    prd_cmd->add_option("--top-k", prd.top_k, "non-pronoun candidates to keep")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    prd_cmd->add_option("--none-penalty", prd.none_penalty, "additive log penalty per NONE")
        ->capture_default_str();
    prd_cmd->add_option("--search", prd.search, "auto, exhaustive or beam")
        ->check(CLI::IsMember({"auto", "exhaustive", "beam"}))
        ->capture_default_str();
    prd_cmd->add_option("--in", prd.in, "instance file to predict on")->required();
    prd_cmd->add_option("--out", prd.out, "predicted classes, one line per instance")->required();
    prd_cmd->add_option("--fillers-out", prd.fillers_out, "also write the winning fillers here");

    TuneArgs tun;
    auto* tun_cmd = app.add_subcommand("tune", "grid-search the NONE penalty on a dev set");
    tun_cmd->add_option("--direction", tun.direction, "translation direction")
        ->required()
        ->check(CLI::IsMember(kDirections));
    tun_cmd->add_option("--model", tun.model, "language model file")->required();
    auto* tun_json = tun_cmd->add_option("--candidates", tun.candidates, "candidate JSON file");
    tun_cmd->add_option("--candidates-from", tun.candidates_from,
                        "build candidates from this training instance file")
        ->excludes(tun_json);
    tun_cmd->add_option("--top-k", tun.top_k, "non-pronoun candidates to keep")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    tun_cmd->add_option("--dev", tun.dev, "development instance file")->required();
    tun_cmd->add_option("--grid", tun.grid, "start:stop:step or a comma list")
        ->capture_default_str();
    tun_cmd->add_option("--out", tun.out, "write the chosen penalty to this file");

    ScoreArgs sco;
    auto* sco_cmd = app.add_subcommand("score", "score predictions against gold instances");
    sco_cmd->add_option("--direction", sco.direction, "translation direction")
        ->required()
        ->check(CLI::IsMember(kDirections));
    sco_cmd->add_option("--gold", sco.gold, "gold instance file")->required();
    sco_cmd->add_option("--pred", sco.pred, "prediction file (labels per line)")->required();
    sco_cmd->add_option("--system", sco.system, "system name for the report");
    sco_cmd->add_flag("--json", sco.json, "emit a JSON report");

    AlignEvalArgs aev;
    auto* aev_cmd = app.add_subcommand("align-eval", "score alignments against a gold standard");
    aev_cmd->add_option("--hyp", aev.hyp, "hypothesis alignment file")->required();
    aev_cmd->add_option("--gold", aev.gold, "gold alignment file")->required();
    aev_cmd->add_option("--pronoun-positions", aev.pronoun_positions,
                        "per-segment source indices of pronouns (space separated)");
    aev_cmd->add_flag("--json", aev.json, "emit a JSON report");

    ReproduceArgs rep;
    auto* rep_cmd = app.add_subcommand(
        "reproduce-baseline", "end-to-end extract, train, tune, predict and score");
    rep_cmd->add_option("--direction", rep.direction, "translation direction")
        ->required()
        ->check(CLI::IsMember(kDirections));
    rep_cmd->add_option("--train", rep.train_prefix,
                        "training prefix (expects .src .tgt .align, optional .deps)")
        ->required();
    rep_cmd->add_option("--dev", rep.dev_prefix, "development prefix")->required();
    rep_cmd->add_option("--test", rep.test_prefix, "test prefix")->required();
    rep_cmd->add_option("--out-dir", rep.out_dir, "directory for all artifacts")->required();
    rep_cmd->add_option("--order", rep.order, "model order")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    rep_cmd->add_option("--unk-threshold", rep.unk_threshold,
                        "map words with count <= N to <unk>")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    rep_cmd->add_option("--top-k", rep.top_k, "non-pronoun candidates to keep")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    rep_cmd->add_option("--grid", rep.grid, "start:stop:step or a comma list")
        ->capture_default_str();
    rep_cmd->add_flag("--no-subject-filter", rep.no_subject_filter,
                      "keep pronouns in any syntactic function");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (dump_config) {
            std::cout << app.config_to_str(true, false);
            return 0;
        }
        if (sym_cmd->parsed()) return run_symmetrize(sym);
        if (ext_cmd->parsed()) return run_extract(ext, jobs);
        if (tlm_cmd->parsed()) return run_train_lm(tlm);
        if (prd_cmd->parsed()) return run_predict(prd, jobs);
        if (tun_cmd->parsed()) return run_tune(tun, jobs);
        if (sco_cmd->parsed()) return run_score(sco);
        if (aev_cmd->parsed()) return run_align_eval(aev);
        if (rep_cmd->parsed()) return run_reproduce(rep, jobs);
        std::cerr << app.help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "pronpred: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "pronpred: " << e.what() << "\n";
        return 1;
    }
}
