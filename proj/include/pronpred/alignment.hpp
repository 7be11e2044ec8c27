#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "pronpred/types.hpp"

namespace pronpred::align {

enum class Heuristic {
    intersection,
    union_all,
    grow_diag,
    grow_diag_final,
    grow_diag_final_and,
};

// Accepts both long names and the usual short forms (gd, gdf, gdfa, union).
Heuristic heuristic_from_string(std::string_view s);
std::string to_string(Heuristic h);

// Symmetrizes a forward (src->tgt) and backward (tgt->src, already expressed
// in src-tgt coordinates) alignment. Growth is a batch fixpoint: every round
// adds all union links 8-adjacent to the current set that have at least one
// unaligned endpoint; the final/final-and passes run once against coverage
// frozen at the end of growth. src_len/tgt_len bound-check the input links.
AlignmentSet symmetrize(const AlignmentSet& forward, const AlignmentSet& backward,
                        Heuristic h, int src_len, int tgt_len);

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Raw link counts; aggregate across segments, then convert to PRF.
struct LinkCounts {
    std::uint64_t hyp = 0;
    std::uint64_t gold = 0;
    std::uint64_t correct = 0;

    void add(const AlignmentSet& hyp_links, const AlignmentSet& gold_links);
    LinkCounts& operator+=(const LinkCounts& o);
};

// Empty hypothesis -> precision 1; empty gold -> recall 1; F1 = 0 when both
// components are 0.
PRF to_prf(const LinkCounts& c);

struct AlignmentEval {
    PRF all;
    std::optional<PRF> pronouns;
};

// Compares hypothesis links against gold. When pronoun_link is set, a second
// score restricted to links satisfying the predicate (on both sides) is
// produced.
AlignmentEval evaluate_alignment(const AlignmentSet& hyp, const AlignmentSet& gold,
                                 const std::function<bool(const AlignmentLink&)>& pronoun_link = {});

} // namespace pronpred::align
