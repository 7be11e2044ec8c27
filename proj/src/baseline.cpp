#include "pronpred/baseline.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>

#include <json.hpp>

#include "pronpred/evaluation.hpp"
#include "pronpred/util.hpp"

namespace pronpred::baseline {

std::string Candidate::display() const {
    if (tokens.empty()) return "NONE";
    return util::join(tokens, "+");
}

std::vector<Candidate> CandidateSet::all() const {
    std::vector<Candidate> out = pronoun_fillers;
    out.insert(out.end(), other_fillers.begin(), other_fillers.end());
    if (include_none) out.push_back(Candidate{{}, SubtaskSpec::fallback_class()});
    return out;
}

CandidateSet build_candidate_set(const std::vector<TaskInstance>& training,
                                 const SubtaskSpec& spec, int top_k) {
    CandidateSet set;
    for (const auto& cls : spec.classes)
        if (cls != SubtaskSpec::fallback_class())
            set.pronoun_fillers.push_back(Candidate{{cls}, cls});

    std::map<std::vector<std::string>, std::int64_t> freq;
    for (const auto& inst : training) {
        for (std::size_t p = 0; p < inst.labels.size() && p < inst.replaced.size(); ++p) {
            if (inst.labels[p] != SubtaskSpec::fallback_class()) continue;
            const auto& group = inst.replaced[p];
            if (group.empty()) continue;
            std::vector<std::string> lemmas;
            lemmas.reserve(group.size());
            for (const auto& tok : group) lemmas.push_back(tok.lemma);
            if (lemmas.size() == 1 && spec.lexicon.count(util::fold_lower(lemmas[0]))) continue;
            ++freq[lemmas];
        }
    }
    std::vector<std::pair<std::vector<std::string>, std::int64_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < top_k; ++i)
        set.other_fillers.push_back(Candidate{ranked[i].first, SubtaskSpec::fallback_class()});
    set.include_none = true;
    return set;
}

namespace {

constexpr const char* kCandidateFormat = "pronpred-candidates";

nlohmann::json candidate_to_json(const Candidate& c) {
    return nlohmann::json{{"tokens", c.tokens}, {"class", c.cls}};
}

Candidate candidate_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("tokens") || !j.contains("class"))
        throw Error("candidate entry must be an object with 'tokens' and 'class'");
    Candidate c;
    for (const auto& t : j.at("tokens")) {
        if (!t.is_string() || t.get<std::string>().empty())
            throw Error("candidate tokens must be non-empty strings");
        c.tokens.push_back(t.get<std::string>());
    }
    if (c.tokens.empty())
        throw Error("candidate has no tokens (NONE is expressed via include_none)");
    c.cls = j.at("class").get<std::string>();
    if (c.cls.empty()) throw Error("candidate has an empty class");
    return c;
}

} // namespace

std::string candidate_set_to_json(const CandidateSet& cands) {
    nlohmann::json j;
    j["format"] = kCandidateFormat;
    j["version"] = 1;
    j["include_none"] = cands.include_none;
    j["pronoun_fillers"] = nlohmann::json::array();
    for (const auto& c : cands.pronoun_fillers) j["pronoun_fillers"].push_back(candidate_to_json(c));
    j["other_fillers"] = nlohmann::json::array();
    for (const auto& c : cands.other_fillers) j["other_fillers"].push_back(candidate_to_json(c));
    return j.dump(2) + "\n";
}

CandidateSet candidate_set_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad candidate JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != kCandidateFormat)
        throw Error("not a candidate file (missing format tag)");
    if (j.value("version", 0) != 1)
        throw Error("unsupported candidate file version");
    CandidateSet set;
    set.include_none = j.value("include_none", true);
    for (const auto& c : j.value("pronoun_fillers", nlohmann::json::array()))
        set.pronoun_fillers.push_back(candidate_from_json(c));
    for (const auto& c : j.value("other_fillers", nlohmann::json::array()))
        set.other_fillers.push_back(candidate_from_json(c));
    return set;
}

void save_candidate_file(const std::string& path, const CandidateSet& cands) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << candidate_set_to_json(cands);
    if (!out) throw Error("failed while writing " + path);
}

CandidateSet load_candidate_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return candidate_set_from_json(text);
}

namespace {

// Lemma runs between placeholders: k placeholders yield k+1 fixed parts.
std::vector<std::vector<std::string>> fixed_parts(const TaskInstance& inst) {
    std::vector<std::vector<std::string>> parts(1);
    for (const auto& item : inst.target) {
        if (const auto* tok = std::get_if<TaggedToken>(&item))
            parts.back().push_back(tok->lemma);
        else
            parts.emplace_back();
    }
    return parts;
}

std::vector<Prediction> to_predictions(const std::vector<Candidate>& options,
                                       const std::vector<int>& choice) {
    std::vector<Prediction> out;
    out.reserve(choice.size());
    for (int idx : choice) {
        const Candidate& c = options[static_cast<std::size_t>(idx)];
        out.push_back(Prediction{c.display(), c.cls, c.is_none()});
    }
    return out;
}

struct BeamState {
    std::vector<int> choice;
    std::vector<std::string> seq;
    double penalties = 0.0;
    double score = 0.0;
};

} // namespace

std::vector<Prediction> fill_placeholders(const lm::NGramModel& model, const TaskInstance& inst,
                                          const CandidateSet& cands, double none_penalty,
                                          SearchMode mode) {
    if (!model.trained())
        throw UntrainedModel("fill_placeholders needs a trained language model");
    const auto options = cands.all();
    if (options.empty()) throw Error("empty candidate set");

    auto parts = fixed_parts(inst);
    std::size_t gaps = parts.size() - 1;
    if (gaps == 0) return {};

    std::uint64_t combos = 1;
    for (std::size_t g = 0; g < gaps && combos <= kExhaustiveLimit; ++g)
        combos *= static_cast<std::uint64_t>(options.size());
    bool exhaustive = mode == SearchMode::exhaustive ||
                      (mode == SearchMode::automatic && combos <= kExhaustiveLimit);

    if (exhaustive) {
        std::vector<int> choice(gaps, 0), best_choice;
        double best = 0.0;
        bool have_best = false;
        while (true) {
            std::vector<std::string> seq = parts[0];
            double penalties = 0.0;
            for (std::size_t g = 0; g < gaps; ++g) {
                const Candidate& c = options[static_cast<std::size_t>(choice[g])];
                seq.insert(seq.end(), c.tokens.begin(), c.tokens.end());
                seq.insert(seq.end(), parts[g + 1].begin(), parts[g + 1].end());
                if (c.is_none()) penalties += none_penalty;
            }
            double score = model.sequence_logprob(seq) + penalties;
            if (!have_best || score > best) {
                best = score;
                best_choice = choice;
                have_best = true;
            }
            // odometer: the last gap varies fastest
            std::size_t g = gaps;
            while (g > 0) {
                --g;
                if (++choice[g] < static_cast<int>(options.size())) break;
                choice[g] = 0;
                if (g == 0) return to_predictions(options, best_choice);
            }
        }
    }

    // Beam search over gaps, scored by prefix log-probability.
    std::vector<BeamState> beam(1);
    beam[0].seq = parts[0];
    beam[0].score = model.prefix_logprob(beam[0].seq);
    for (std::size_t g = 0; g < gaps; ++g) {
        std::vector<BeamState> next;
        next.reserve(beam.size() * options.size());
        for (const auto& state : beam) {
            for (std::size_t o = 0; o < options.size(); ++o) {
                const Candidate& c = options[o];
                BeamState ns;
                ns.choice = state.choice;
                ns.choice.push_back(static_cast<int>(o));
                ns.seq = state.seq;
                ns.seq.insert(ns.seq.end(), c.tokens.begin(), c.tokens.end());
                ns.seq.insert(ns.seq.end(), parts[g + 1].begin(), parts[g + 1].end());
                ns.penalties = state.penalties + (c.is_none() ? none_penalty : 0.0);
                ns.score = model.prefix_logprob(ns.seq) + ns.penalties;
                next.push_back(std::move(ns));
            }
        }
        std::stable_sort(next.begin(), next.end(),
                         [](const BeamState& a, const BeamState& b) { return a.score > b.score; });
        if (next.size() > static_cast<std::size_t>(kBeamWidth)) next.resize(kBeamWidth);
        beam = std::move(next);
    }

    const BeamState* best_state = nullptr;
    double best = 0.0;
    for (const auto& state : beam) {
        double score = model.sequence_logprob(state.seq) + state.penalties;
        if (!best_state || score > best) {
            best_state = &state;
            best = score;
        }
    }
    return to_predictions(options, best_state->choice);
}

std::vector<double> default_penalty_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 8; ++i) grid.push_back(-0.5 * i);
    return grid;
}

std::vector<std::vector<Prediction>> predict_all(const lm::NGramModel& model,
                                                 const std::vector<TaskInstance>& instances,
                                                 const CandidateSet& cands, double none_penalty,
                                                 SearchMode mode, int jobs) {
    std::vector<std::vector<Prediction>> out(instances.size());
    std::exception_ptr failure;
    std::mutex failure_mtx;
    util::parallel_chunks(instances.size(), jobs, [&](std::size_t b, std::size_t e) {
        try {
            for (std::size_t i = b; i < e; ++i)
                out[i] = fill_placeholders(model, instances[i], cands, none_penalty, mode);
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mtx);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    return out;
}

TuneResult tune_none_penalty(const lm::NGramModel& model, const std::vector<TaskInstance>& dev,
                             const CandidateSet& cands, const SubtaskSpec& spec,
                             const std::vector<double>& grid, int jobs) {
    if (grid.empty()) throw Error("penalty grid is empty");
    if (dev.empty()) throw EmptyCorpus("cannot tune on an empty dev set");

    std::vector<std::string> gold;
    for (const auto& inst : dev)
        gold.insert(gold.end(), inst.labels.begin(), inst.labels.end());

    std::vector<double> ordered = grid;
    std::sort(ordered.begin(), ordered.end(), std::greater<double>());

    TuneResult result;
    bool have_best = false;
    for (double penalty : ordered) {
        auto preds = predict_all(model, dev, cands, penalty, SearchMode::automatic, jobs);
        std::vector<std::string> flat;
        std::int64_t nones = 0;
        for (const auto& line : preds)
            for (const auto& p : line) {
                flat.push_back(p.cls);
                if (p.none) ++nones;
            }
        double macro = eval::macro_recall(eval::confusion(gold, flat, spec.classes));
        result.grid.push_back(GridPoint{penalty, macro, nones});
        if (!have_best || macro > result.macro_recall) {
            result.penalty = penalty;
            result.macro_recall = macro;
            have_best = true;
        }
    }
    return result;
}

} // namespace pronpred::baseline
