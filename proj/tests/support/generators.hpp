#pragma once

// Seeded random data for property tests. Every generator takes the caller's
// engine so suites stay reproducible.

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pronpred/extraction.hpp"
#include "pronpred/types.hpp"

namespace testsupport {

inline int rand_int(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool rand_chance(std::mt19937& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename T>
const T& pick(std::mt19937& rng, const std::vector<T>& v) {
    return v[static_cast<std::size_t>(rand_int(rng, 0, static_cast<int>(v.size()) - 1))];
}

// Lemma of 1..3 syllables, occasionally with accented letters or an internal
// '|' (legal in lemmas; tokens split at the last '|'). Never contains '+',
// whitespace or an uppercase letter, so it cannot collide with the built-in
// pronoun inventories after case folding.
inline std::string random_lemma(std::mt19937& rng) {
    static const std::vector<std::string> syllables = {
        "ba", "co", "du", "fo", "gu", "ka", "lo", "mi", "nu", "po",
        "ra", "su", "ti", "vo", "zu", "bé", "çà", "dü", "fö", "gê"};
    std::string out;
    int n = rand_int(rng, 1, 3);
    for (int i = 0; i < n; ++i) out += pick(rng, syllables);
    if (rand_chance(rng, 0.05)) out += "|" + pick(rng, syllables);
    return out;
}

inline std::string random_tag(std::mt19937& rng, const pronpred::SubtaskSpec& spec) {
    std::vector<std::string> tags(spec.target_tagset.begin(), spec.target_tagset.end());
    return pick(rng, tags);
}

inline pronpred::TaggedToken random_token(std::mt19937& rng, const pronpred::SubtaskSpec& spec) {
    return {random_lemma(rng), random_tag(rng, spec)};
}

// Valid instance under spec: every placeholder points at a source pronoun,
// labels/groups are placeholder-aligned, links stay in bounds.
inline pronpred::TaskInstance random_instance(std::mt19937& rng,
                                              const pronpred::SubtaskSpec& spec) {
    using pronpred::Placeholder;
    using pronpred::TaskInstance;
    std::vector<std::string> pronouns(spec.source_pronouns.begin(), spec.source_pronouns.end());

    TaskInstance inst;
    int n_src = rand_int(rng, 1, 12);
    std::vector<int> pron_idx;
    for (int i = 0; i < n_src; ++i) {
        if (rand_chance(rng, 0.35)) {
            std::string p = pick(rng, pronouns);
            if (rand_chance(rng, 0.3)) p[0] = static_cast<char>(std::toupper(p[0]));
            inst.source.push_back(p);
            pron_idx.push_back(i);
        } else {
            inst.source.push_back(random_lemma(rng));
        }
    }

    std::shuffle(pron_idx.begin(), pron_idx.end(), rng);
    int gaps = std::min<int>(static_cast<int>(pron_idx.size()), rand_int(rng, 0, 3));

    int n_words = rand_int(rng, 0, 10);
    for (int i = 0; i < n_words; ++i) inst.target.emplace_back(random_token(rng, spec));
    for (int g = 0; g < gaps; ++g) {
        int pos = rand_int(rng, 0, static_cast<int>(inst.target.size()));
        inst.target.insert(inst.target.begin() + pos, Placeholder{pron_idx[g]});
    }

    for (const auto& item : inst.target) {
        if (!std::holds_alternative<Placeholder>(item)) continue;
        inst.labels.push_back(pick(rng, spec.classes));
        std::vector<pronpred::TaggedToken> group;
        int len = rand_int(rng, 0, 2);
        for (int i = 0; i < len; ++i) group.push_back(random_token(rng, spec));
        inst.replaced.push_back(std::move(group));
    }

    if (!inst.target.empty()) {
        int n_links = rand_int(rng, 0, n_src + 2);
        for (int i = 0; i < n_links; ++i)
            inst.alignment.insert({rand_int(rng, 0, n_src - 1),
                                   rand_int(rng, 0, static_cast<int>(inst.target.size()) - 1)});
    }
    return inst;
}

inline pronpred::AlignmentSet random_alignment(std::mt19937& rng, int src_len, int tgt_len,
                                               double density) {
    pronpred::AlignmentSet out;
    for (int s = 0; s < src_len; ++s)
        for (int t = 0; t < tgt_len; ++t)
            if (rand_chance(rng, density)) out.insert({s, t});
    return out;
}

// Aligned segment ready for extraction, with dependency labels. Pronouns get
// the given subject label or OBJ; other tokens get X.
inline pronpred::extract::AnnotatedSegment random_segment(std::mt19937& rng,
                                                          const pronpred::SubtaskSpec& spec,
                                                          const std::string& subj_label = "SBJ") {
    pronpred::extract::AnnotatedSegment seg;
    std::vector<std::string> pronouns(spec.source_pronouns.begin(), spec.source_pronouns.end());
    std::vector<std::string> lexicon_words;
    for (const auto& [word, cls] : spec.lexicon) lexicon_words.push_back(word);

    int n_src = rand_int(rng, 1, 10);
    std::vector<std::string> labels;
    for (int i = 0; i < n_src; ++i) {
        if (rand_chance(rng, 0.3)) {
            seg.source.push_back(pick(rng, pronouns));
            labels.push_back(rand_chance(rng, 0.7) ? subj_label : "OBJ");
        } else {
            seg.source.push_back(random_lemma(rng));
            labels.push_back("X");
        }
    }
    seg.dep_labels = labels;

    int n_tgt = rand_int(rng, 1, 10);
    for (int i = 0; i < n_tgt; ++i) {
        if (rand_chance(rng, 0.25))
            seg.target.push_back({pick(rng, lexicon_words), random_tag(rng, spec)});
        else
            seg.target.push_back(random_token(rng, spec));
    }

    seg.alignment = random_alignment(rng, n_src, n_tgt, 0.15);
    return seg;
}

} // namespace testsupport
