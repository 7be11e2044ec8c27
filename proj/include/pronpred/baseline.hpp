#pragma once

#include <string>
#include <vector>

#include "pronpred/lm.hpp"
#include "pronpred/types.hpp"

namespace pronpred::baseline {

// One gap-filling option: the lemmas inserted into the gap (empty = NONE)
// and the class credited when it wins.
struct Candidate {
    std::vector<std::string> tokens;
    std::string cls;
    bool is_none() const { return tokens.empty(); }
    std::string display() const;  // tokens joined by '+', or "NONE"
    bool operator==(const Candidate&) const = default;
};

struct CandidateSet {
    std::vector<Candidate> pronoun_fillers;  // one per non-OTHER class
    std::vector<Candidate> other_fillers;    // frequent non-pronoun lemmas
    bool include_none = true;

    std::vector<Candidate> all() const;  // pronoun, then other, then NONE
};

// Pronoun fillers are the non-OTHER class names themselves; other fillers
// are the top_k most frequent single lemmas replaced in OTHER-labelled
// training placeholders, lexicon entries excluded, count ties broken
// lexicographically. NONE is included as a zero-token OTHER candidate.
CandidateSet build_candidate_set(const std::vector<TaskInstance>& training,
                                 const SubtaskSpec& spec, int top_k = 20);

std::string candidate_set_to_json(const CandidateSet& cands);
CandidateSet candidate_set_from_json(const std::string& text);
void save_candidate_file(const std::string& path, const CandidateSet& cands);
CandidateSet load_candidate_file(const std::string& path);

enum class SearchMode { automatic, exhaustive, beam };

// Exhaustive search is used while the number of joint combinations stays
// within this bound; larger instances switch to a beam.
constexpr std::uint64_t kExhaustiveLimit = 10000;
constexpr int kBeamWidth = 8;

struct Prediction {
    std::string filler;  // display form of the winning candidate
    std::string cls;
    bool none = false;
};

// Jointly fills all placeholders of one instance by maximizing the LM
// log-probability of the restored lemma sequence plus none_penalty per NONE
// chosen. Deterministic: ties keep the earliest combination in enumeration
// order (candidates in all() order, later gaps varying fastest).
std::vector<Prediction> fill_placeholders(const lm::NGramModel& model, const TaskInstance& inst,
                                          const CandidateSet& cands, double none_penalty,
                                          SearchMode mode = SearchMode::automatic);

std::vector<double> default_penalty_grid();  // 0, -0.5, ..., -4.0

struct GridPoint {
    double penalty = 0.0;
    double macro_recall = 0.0;
    std::int64_t none_count = 0;
};

struct TuneResult {
    double penalty = 0.0;
    double macro_recall = 0.0;
    std::vector<GridPoint> grid;
};

// Sweeps the penalty grid on dev instances and keeps the value with the
// best macro recall; the grid is scanned from 0 downwards and only strictly
// better scores replace the incumbent, so ties resolve toward 0.
TuneResult tune_none_penalty(const lm::NGramModel& model,
                             const std::vector<TaskInstance>& dev, const CandidateSet& cands,
                             const SubtaskSpec& spec,
                             const std::vector<double>& grid = default_penalty_grid(),
                             int jobs = 1);

// Predictions for a whole instance list (deterministic under jobs > 1).
std::vector<std::vector<Prediction>> predict_all(const lm::NGramModel& model,
                                                 const std::vector<TaskInstance>& instances,
                                                 const CandidateSet& cands, double none_penalty,
                                                 SearchMode mode = SearchMode::automatic,
                                                 int jobs = 1);

} // namespace pronpred::baseline
