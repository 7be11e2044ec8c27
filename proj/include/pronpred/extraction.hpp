#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pronpred/types.hpp"

namespace pronpred::extract {

// One aligned bitext segment before extraction: plain source tokens,
// optional per-token dependency labels, tagged target tokens, word links.
struct AnnotatedSegment {
    std::vector<std::string> source;
    std::optional<std::vector<std::string>> dep_labels;
    std::vector<TaggedToken> target;
    AlignmentSet alignment;
};

// Ascending source indices whose (case-folded) token is in the pronoun set.
std::vector<int> find_source_pronouns(const std::vector<std::string>& source,
                                      const SubtaskSpec& spec);

// Keeps the indices whose dependency label is in keep_set. Throws
// MissingLabels when labels are absent but there is something to filter.
std::vector<int> filter_subjects(const std::vector<int>& indices,
                                 const std::optional<std::vector<std::string>>& labels,
                                 const std::set<std::string>& keep_set);

// Subject labels per source language: English SBJ; German SB plus EP
// (expletives are predictable and therefore kept); French sources have no
// labels and skip filtering entirely.
std::set<std::string> default_subject_labels(Direction d);
bool direction_filters_subjects(Direction d);

struct TargetClassChoice {
    std::string cls;
    int index = 0;  // position within the aligned token list that was chosen
};

// Chooses the class for a pronoun from its aligned target tokens: leftmost
// lexicon hit wins; otherwise OTHER with the shortest token (codepoints,
// leftmost tie) recorded as the replaced word.
TargetClassChoice map_target_class(const std::vector<TaggedToken>& aligned_tokens,
                                   const SubtaskSpec& spec);

// Insertion position (0..|target|) for a pronoun with no usable alignment:
// scan source neighbours at distance 1, 2, ... preferring the left one; a
// left neighbour puts the placeholder after its rightmost linked target
// token, a right neighbour before its leftmost; with no aligned neighbour
// at all the position is src_idx scaled by |target|/|source|, rounded
// half-up and clamped.
int insert_placeholder_unaligned(const AnnotatedSegment& seg, int src_idx);

struct ExtractOptions {
    bool subject_filter = true;
    // Overrides the per-direction default label set when present.
    std::optional<std::set<std::string>> keep_labels;
    // Emit every segment, including ones without placeholders, so the output
    // doubles as LM training material via restore_target().
    bool lm_corpus_mode = false;
};

struct ExtractStats {
    std::map<std::string, std::int64_t> class_counts;             // emitted
    std::map<std::string, std::int64_t> class_counts_unfiltered;  // before subject filter
    std::int64_t segments = 0;
    std::int64_t instances = 0;
    std::int64_t pronouns_seen = 0;
    std::int64_t pronouns_kept = 0;
    std::int64_t inserted_placeholders = 0;

    void merge(const ExtractStats& o);
};

// Turns one segment into an instance (nullopt when it has no placeholder and
// lm_corpus_mode is off).
std::optional<TaskInstance> extract_segment(const AnnotatedSegment& seg, const SubtaskSpec& spec,
                                            const ExtractOptions& opts = {},
                                            ExtractStats* stats = nullptr);

std::vector<TaskInstance> extract_examples(const std::vector<AnnotatedSegment>& segments,
                                           const SubtaskSpec& spec,
                                           const ExtractOptions& opts = {},
                                           ExtractStats* stats = nullptr, int jobs = 1);

std::map<std::string, std::int64_t> class_frequency_table(const std::vector<TaskInstance>& instances);

} // namespace pronpred::extract
