#include "pronpred/alignment.hpp"

#include <algorithm>
#include <vector>

namespace pronpred::align {

Heuristic heuristic_from_string(std::string_view s) {
    if (s == "intersection" || s == "intersect") return Heuristic::intersection;
    if (s == "union") return Heuristic::union_all;
    if (s == "grow-diag" || s == "gd") return Heuristic::grow_diag;
    if (s == "grow-diag-final" || s == "gdf") return Heuristic::grow_diag_final;
    if (s == "grow-diag-final-and" || s == "gdfa") return Heuristic::grow_diag_final_and;
    throw Error("unknown symmetrization heuristic '" + std::string(s) + "'");
}

std::string to_string(Heuristic h) {
    switch (h) {
        case Heuristic::intersection: return "intersection";
        case Heuristic::union_all: return "union";
        case Heuristic::grow_diag: return "grow-diag";
        case Heuristic::grow_diag_final: return "grow-diag-final";
        case Heuristic::grow_diag_final_and: return "grow-diag-final-and";
    }
    throw Error("invalid heuristic value");
}

namespace {

void check_bounds(const AlignmentSet& links, int src_len, int tgt_len, const char* which) {
    for (const auto& l : links)
        if (l.src < 0 || l.src >= src_len || l.tgt < 0 || l.tgt >= tgt_len)
            throw IndexOutOfBounds(std::string(which) + " link " + std::to_string(l.src) +
                                   "-" + std::to_string(l.tgt) + " out of bounds for " +
                                   std::to_string(src_len) + "x" + std::to_string(tgt_len) +
                                   " segment");
}

struct Coverage {
    std::vector<int> src;
    std::vector<int> tgt;
    Coverage(int src_len, int tgt_len) : src(src_len, 0), tgt(tgt_len, 0) {}
    void add(const AlignmentLink& l) {
        ++src[l.src];
        ++tgt[l.tgt];
    }
    bool src_free(int i) const { return src[i] == 0; }
    bool tgt_free(int j) const { return tgt[j] == 0; }
};

bool adjacent(const AlignmentSet& a, const AlignmentLink& l) {
    for (int ds = -1; ds <= 1; ++ds)
        for (int dt = -1; dt <= 1; ++dt) {
            if (ds == 0 && dt == 0) continue;
            if (a.count(AlignmentLink{l.src + ds, l.tgt + dt})) return true;
        }
    return false;
}

} // namespace

AlignmentSet symmetrize(const AlignmentSet& forward, const AlignmentSet& backward,
                        Heuristic h, int src_len, int tgt_len) {
    if (src_len < 0 || tgt_len < 0)
        throw IndexOutOfBounds("negative segment length");
    check_bounds(forward, src_len, tgt_len, "forward");
    check_bounds(backward, src_len, tgt_len, "backward");

    AlignmentSet inter;
    std::set_intersection(forward.begin(), forward.end(), backward.begin(), backward.end(),
                          std::inserter(inter, inter.end()));
    if (h == Heuristic::intersection) return inter;

    AlignmentSet uni;
    std::set_union(forward.begin(), forward.end(), backward.begin(), backward.end(),
                   std::inserter(uni, uni.end()));
    if (h == Heuristic::union_all) return uni;

    AlignmentSet aligned = inter;
    Coverage cov(src_len, tgt_len);
    for (const auto& l : aligned) cov.add(l);

    // Grow phase: batch fixpoint so the result does not depend on the order
    // links are visited in.
    while (true) {
        std::vector<AlignmentLink> added;
        for (const auto& l : uni) {
            if (aligned.count(l)) continue;
            if (!cov.src_free(l.src) && !cov.tgt_free(l.tgt)) continue;
            if (adjacent(aligned, l)) added.push_back(l);
        }
        if (added.empty()) break;
        for (const auto& l : added) {
            aligned.insert(l);
            cov.add(l);
        }
    }

    if (h == Heuristic::grow_diag) return aligned;

    // Final pass: eligibility judged against coverage at end of growth, all
    // qualifying links added in one batch.
    bool both = (h == Heuristic::grow_diag_final_and);
    std::vector<AlignmentLink> finals;
    for (const auto& l : uni) {
        if (aligned.count(l)) continue;
        bool sf = cov.src_free(l.src);
        bool tf = cov.tgt_free(l.tgt);
        if (both ? (sf && tf) : (sf || tf)) finals.push_back(l);
    }
    for (const auto& l : finals) aligned.insert(l);
    return aligned;
}

void LinkCounts::add(const AlignmentSet& hyp_links, const AlignmentSet& gold_links) {
    hyp += hyp_links.size();
    gold += gold_links.size();
    for (const auto& l : hyp_links)
        if (gold_links.count(l)) ++correct;
}

LinkCounts& LinkCounts::operator+=(const LinkCounts& o) {
    hyp += o.hyp;
    gold += o.gold;
    correct += o.correct;
    return *this;
}

PRF to_prf(const LinkCounts& c) {
    PRF out;
    out.precision = c.hyp == 0 ? 1.0 : static_cast<double>(c.correct) / static_cast<double>(c.hyp);
    out.recall = c.gold == 0 ? 1.0 : static_cast<double>(c.correct) / static_cast<double>(c.gold);
    double pr = out.precision + out.recall;
    out.f1 = pr == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / pr;
    return out;
}

AlignmentEval evaluate_alignment(const AlignmentSet& hyp, const AlignmentSet& gold,
                                 const std::function<bool(const AlignmentLink&)>& pronoun_link) {
    AlignmentEval eval;
    LinkCounts all;
    all.add(hyp, gold);
    eval.all = to_prf(all);
    if (pronoun_link) {
        AlignmentSet hyp_p, gold_p;
        for (const auto& l : hyp)
            if (pronoun_link(l)) hyp_p.insert(l);
        for (const auto& l : gold)
            if (pronoun_link(l)) gold_p.insert(l);
        LinkCounts sub;
        sub.add(hyp_p, gold_p);
        eval.pronouns = to_prf(sub);
    }
    return eval;
}

} // namespace pronpred::align
