#pragma once

// A tiny deterministic en-fr toy language for end-to-end pipeline tests. The
// target-side determiner+noun decides the pronoun of the second clause (le
// moteur ... il, la machine ... elle, les ... ils/elles), and the remaining
// classes carry signature verbs, so an order-5 LM can reach a perfect score.
// The corpus also ships a non-subject pronoun (filtered away), a pronoun-free
// distractor and an unaligned impersonal pronoun (inserted placeholder).

#include <array>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "pronpred/extraction.hpp"
#include "pronpred/format.hpp"
#include "pronpred/types.hpp"
#include "pronpred/util.hpp"

namespace testsupport::toylang {

using pronpred::TaggedToken;
using pronpred::extract::AnnotatedSegment;

inline AnnotatedSegment seg(std::vector<std::string> src, std::vector<std::string> deps,
                            std::vector<TaggedToken> tgt,
                            const std::vector<std::pair<int, int>>& links) {
    AnnotatedSegment s;
    s.source = std::move(src);
    s.dep_labels = std::move(deps);
    s.target = std::move(tgt);
    for (auto [a, b] : links) s.alignment.insert({a, b});
    return s;
}

inline std::vector<std::pair<int, int>> diag(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i) out.emplace_back(i, i);
    return out;
}

// "the NOUN V1 . PRON V2 ADV ." with a diagonal alignment; the French
// determiner and noun fix gender and number, hence the pronoun class.
inline AnnotatedSegment gendered_segment(bool fem, bool plural, int noun, int v1, int v2,
                                         int adv) {
    static const char* en_noun[2][2] = {{"engine", "dog"}, {"machine", "door"}};
    static const char* en_noun_pl[2][2] = {{"engines", "dogs"}, {"machines", "doors"}};
    static const char* fr_noun[2][2] = {{"moteur", "chien"}, {"machine", "porte"}};
    static const char* en_v1[2] = {"run", "move"};
    static const char* fr_v1[2] = {"tourner", "bouger"};
    static const char* en_v2[2] = {"snore", "creak"};
    static const char* fr_v2[2] = {"ronfler", "grincer"};
    static const char* en_adv[2] = {"loudly", "often"};
    static const char* fr_adv[2] = {"fort", "souvent"};

    const char* det = plural ? "les" : (fem ? "la" : "le");
    const char* pron_en = plural ? "they" : "it";
    const char* pron_fr = plural ? (fem ? "elles" : "ils") : (fem ? "elle" : "il");
    const char* noun_en = plural ? en_noun_pl[fem][noun] : en_noun[fem][noun];

    return seg({"the", noun_en, en_v1[v1], ".", pron_en, en_v2[v2], en_adv[adv], "."},
               {"NMOD", "SBJ", "ROOT", "P", "SBJ", "ROOT", "ADV", "P"},
               {{det, "DET"},
                {fr_noun[fem][noun], "NOM"},
                {fr_v1[v1], "VER"},
                {".", "SENT"},
                {pron_fr, "PRO"},
                {fr_v2[v2], "VER"},
                {fr_adv[adv], "ADV"},
                {".", "SENT"}},
               diag(8));
}

inline std::string gendered_class(bool fem, bool plural) {
    return plural ? (fem ? "elles" : "ils") : (fem ? "elle" : "il");
}

// Single-clause templates for the remaining classes, keyed by class name.
inline AnnotatedSegment subject_segment(const std::string& cls, int variant) {
    if (cls == "ce") {
        static const char* en[2] = {"problem", "issue"};
        static const char* fr[2] = {"problème", "souci"};
        return seg({"it", "be", "a", en[variant], "."}, {"SBJ", "ROOT", "NMOD", "PRD", "P"},
                   {{"ce", "PRO"}, {"être", "VER"}, {"un", "DET"}, {fr[variant], "NOM"},
                    {".", "SENT"}},
                   diag(5));
    }
    if (cls == "cela") {
        static const char* en[2] = {"now", "still"};
        static const char* fr[2] = {"maintenant", "encore"};
        return seg({"it", "suffice", en[variant], "."}, {"SBJ", "ROOT", "ADV", "P"},
                   {{"cela", "PRO"}, {"suffire", "VER"}, {fr[variant], "ADV"}, {".", "SENT"}},
                   diag(4));
    }
    if (cls == "on") {
        static const char* en[2] = {"here", "there"};
        static const char* fr[2] = {"ici", "là"};
        return seg({"it", "work", en[variant], "."}, {"SBJ", "ROOT", "ADV", "P"},
                   {{"on", "PRO"}, {"travailler", "VER"}, {fr[variant], "ADV"}, {".", "SENT"}},
                   diag(4));
    }
    // OTHER: "it" becomes the relative pronoun "qui", outside the lexicon.
    static const char* en[2] = {"stop", "leave"};
    static const char* fr[2] = {"stopper", "partir"};
    return seg({"it", "must", en[variant], "."}, {"SBJ", "ROOT", "ADV", "P"},
               {{"qui", "PRO"}, {"devoir", "VER"}, {fr[variant], "VER"}, {".", "SENT"}}, diag(4));
}

inline AnnotatedSegment distractor_segment() {
    return seg({"the", "dog", "bark", "."}, {"NMOD", "SBJ", "ROOT", "P"},
               {{"le", "DET"}, {"chien", "NOM"}, {"aboyer", "VER"}, {".", "SENT"}}, diag(4));
}

// "it" in object position: subject filtering drops it.
inline AnnotatedSegment object_segment() {
    return seg({"she", "see", "it", "."}, {"SBJ", "ROOT", "OBJ", "P"},
               {{"elle", "PRO"}, {"voir", "VER"}, {"le", "DET"}, {".", "SENT"}}, diag(4));
}

// Impersonal "it" with no alignment link: the placeholder is inserted.
inline AnnotatedSegment unaligned_segment() {
    return seg({"it", "rain", "today", "."}, {"SBJ", "ROOT", "ADV", "P"},
               {{"pleuvoir", "VER"}, {"aujourd'hui", "ADV"}, {".", "SENT"}},
               {{1, 0}, {2, 1}, {3, 2}});
}

struct ToyCorpus {
    std::vector<AnnotatedSegment> train, dev, test;
    // Expected gold label of each dev/test segment's single placeholder, in
    // segment order, for sanity checks against the extraction output.
    std::vector<std::string> dev_labels, test_labels;
};

inline const std::array<std::string, 4> kSimpleClasses = {"ce", "cela", "on", "OTHER"};

inline ToyCorpus build_corpus() {
    ToyCorpus c;
    for (int rep = 0; rep < 2; ++rep) {
        for (int fem = 0; fem < 2; ++fem)
            for (int plural = 0; plural < 2; ++plural)
                for (int noun = 0; noun < 2; ++noun)
                    for (int v1 = 0; v1 < 2; ++v1)
                        for (int v2 = 0; v2 < 2; ++v2)
                            for (int adv = 0; adv < 2; ++adv)
                                c.train.push_back(
                                    gendered_segment(fem, plural, noun, v1, v2, adv));
        for (const auto& cls : kSimpleClasses)
            for (int variant = 0; variant < 2; ++variant)
                c.train.push_back(subject_segment(cls, variant));
        c.train.push_back(distractor_segment());
        c.train.push_back(object_segment());
    }
    for (int rep = 0; rep < 3; ++rep) c.train.push_back(unaligned_segment());

    auto add = [](std::vector<AnnotatedSegment>& out, std::vector<std::string>& labels,
                  AnnotatedSegment s, const std::string& cls) {
        out.push_back(std::move(s));
        labels.push_back(cls);
    };

    for (int fem = 0; fem < 2; ++fem)
        for (int plural = 0; plural < 2; ++plural) {
            const auto cls = gendered_class(fem, plural);
            add(c.dev, c.dev_labels, gendered_segment(fem, plural, 0, 0, 0, 0), cls);
            add(c.dev, c.dev_labels, gendered_segment(fem, plural, 1, 1, 1, 1), cls);
            add(c.test, c.test_labels, gendered_segment(fem, plural, 0, 1, 0, 1), cls);
            add(c.test, c.test_labels, gendered_segment(fem, plural, 1, 0, 1, 0), cls);
        }
    for (const auto& cls : kSimpleClasses)
        for (int variant = 0; variant < 2; ++variant) {
            add(c.dev, c.dev_labels, subject_segment(cls, variant), cls);
            add(c.test, c.test_labels, subject_segment(cls, 1 - variant), cls);
        }
    add(c.test, c.test_labels, unaligned_segment(), "OTHER");
    return c;
}

inline std::vector<std::vector<std::string>> target_lemmas(
    const std::vector<AnnotatedSegment>& segments) {
    std::vector<std::vector<std::string>> out(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i)
        for (const auto& tok : segments[i].target) out[i].push_back(tok.lemma);
    return out;
}

// Writes prefix.src/.tgt/.align/.deps as read by the extraction CLI.
inline void write_split(const std::string& prefix,
                        const std::vector<AnnotatedSegment>& segments) {
    std::ofstream src(prefix + ".src", std::ios::binary);
    std::ofstream tgt(prefix + ".tgt", std::ios::binary);
    std::ofstream align(prefix + ".align", std::ios::binary);
    std::ofstream deps(prefix + ".deps", std::ios::binary);
    for (const auto& s : segments) {
        src << pronpred::util::join(s.source, " ") << '\n';
        std::vector<std::string> toks;
        for (const auto& tok : s.target) toks.push_back(pronpred::format::to_string(tok));
        tgt << pronpred::util::join(toks, " ") << '\n';
        align << pronpred::format::serialize_alignment(s.alignment) << '\n';
        deps << pronpred::util::join(*s.dep_labels, " ") << '\n';
    }
}

} // namespace testsupport::toylang
