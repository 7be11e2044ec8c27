#pragma once

// Hand-built fixtures shared across suites.

#include <string>
#include <vector>

#include "pronpred/types.hpp"

namespace testsupport {

// Canonical two-placeholder en-fr line: two source pronouns, one mapped to a
// lexicon class and one to OTHER, with a non-monotone alignment.
inline const char* kCanonicalLine =
    "ce OTHER\t"
    "ce|PRON qui|PRON\t"
    "It 's an idiotic debate . It has to stop .\t"
    "REPLACE_0 être|VER un|DET débat|NOM idiot|ADJ REPLACE_6 devoir|VER stopper|VER .|.\t"
    "0-0 1-1 2-2 3-4 4-3 6-5 7-6 8-6 9-7 10-8";

inline pronpred::TaskInstance canonical_instance() {
    using pronpred::AlignmentLink;
    using pronpred::Placeholder;
    using pronpred::TaggedToken;
    pronpred::TaskInstance inst;
    inst.labels = {"ce", "OTHER"};
    inst.replaced = {{TaggedToken{"ce", "PRON"}}, {TaggedToken{"qui", "PRON"}}};
    inst.source = {"It", "'s", "an", "idiotic", "debate", ".", "It", "has", "to", "stop", "."};
    inst.target = {Placeholder{0},
                   TaggedToken{"être", "VER"},
                   TaggedToken{"un", "DET"},
                   TaggedToken{"débat", "NOM"},
                   TaggedToken{"idiot", "ADJ"},
                   Placeholder{6},
                   TaggedToken{"devoir", "VER"},
                   TaggedToken{"stopper", "VER"},
                   TaggedToken{".", "."}};
    for (auto [s, t] : std::vector<std::pair<int, int>>{{0, 0},
                                                        {1, 1},
                                                        {2, 2},
                                                        {3, 4},
                                                        {4, 3},
                                                        {6, 5},
                                                        {7, 6},
                                                        {8, 6},
                                                        {9, 7},
                                                        {10, 8}})
        inst.alignment.insert(AlignmentLink{s, t});
    return inst;
}

// Minimal single-placeholder en-fr instance around the given target lemmas;
// the placeholder sits at gap_pos within the lemma list.
inline pronpred::TaskInstance gap_instance(const std::vector<std::string>& lemmas,
                                           std::size_t gap_pos, const std::string& label) {
    using pronpred::Placeholder;
    using pronpred::TaggedToken;
    pronpred::TaskInstance inst;
    inst.labels = {label};
    inst.replaced = {{}};
    inst.source = {"it"};
    for (std::size_t i = 0; i <= lemmas.size(); ++i) {
        if (i == gap_pos) inst.target.emplace_back(Placeholder{0});
        if (i < lemmas.size()) inst.target.emplace_back(TaggedToken{lemmas[i], "VER"});
    }
    return inst;
}

} // namespace testsupport
