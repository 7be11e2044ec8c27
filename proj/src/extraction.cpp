#include "pronpred/extraction.hpp"

#include <algorithm>
#include <exception>
#include <mutex>

#include "pronpred/util.hpp"

namespace pronpred::extract {

std::vector<int> find_source_pronouns(const std::vector<std::string>& source,
                                      const SubtaskSpec& spec) {
    std::vector<int> out;
    for (std::size_t i = 0; i < source.size(); ++i)
        if (spec.is_source_pronoun(source[i])) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> filter_subjects(const std::vector<int>& indices,
                                 const std::optional<std::vector<std::string>>& labels,
                                 const std::set<std::string>& keep_set) {
    if (indices.empty()) return {};
    if (!labels)
        throw MissingLabels("dependency labels required for subject filtering");
    std::vector<int> out;
    for (int i : indices) {
        if (i < 0 || static_cast<std::size_t>(i) >= labels->size())
            throw IndexOutOfBounds("pronoun index " + std::to_string(i) +
                                   " outside the dependency label column (" +
                                   std::to_string(labels->size()) + " labels)");
        if (keep_set.count((*labels)[static_cast<std::size_t>(i)])) out.push_back(i);
    }
    return out;
}

std::set<std::string> default_subject_labels(Direction d) {
    switch (d) {
        case Direction::en_fr:
        case Direction::en_de: return {"SBJ"};
        case Direction::de_en: return {"SB", "EP"};
        case Direction::fr_en: return {};
    }
    throw Error("invalid direction value");
}

bool direction_filters_subjects(Direction d) {
    return d != Direction::fr_en;
}

TargetClassChoice map_target_class(const std::vector<TaggedToken>& aligned_tokens,
                                   const SubtaskSpec& spec) {
    if (aligned_tokens.empty())
        throw Error("map_target_class needs at least one aligned token");
    for (std::size_t i = 0; i < aligned_tokens.size(); ++i) {
        auto it = spec.lexicon.find(util::fold_lower(aligned_tokens[i].lemma));
        if (it != spec.lexicon.end())
            return {it->second, static_cast<int>(i)};
    }
    std::size_t best = 0;
    std::size_t best_len = util::utf8_codepoints(aligned_tokens[0].lemma);
    for (std::size_t i = 1; i < aligned_tokens.size(); ++i) {
        std::size_t len = util::utf8_codepoints(aligned_tokens[i].lemma);
        if (len < best_len) {
            best = i;
            best_len = len;
        }
    }
    return {SubtaskSpec::fallback_class(), static_cast<int>(best)};
}

namespace {

void check_segment(const AnnotatedSegment& seg) {
    int n = static_cast<int>(seg.source.size());
    int m = static_cast<int>(seg.target.size());
    for (const auto& l : seg.alignment)
        if (l.src < 0 || l.src >= n || l.tgt < 0 || l.tgt >= m)
            throw IndexOutOfBounds("alignment link " + std::to_string(l.src) + "-" +
                                   std::to_string(l.tgt) + " out of bounds for " +
                                   std::to_string(n) + "x" + std::to_string(m) + " segment");
    if (seg.dep_labels && seg.dep_labels->size() != seg.source.size())
        throw LengthMismatch("segment has " + std::to_string(seg.source.size()) +
                             " source tokens but " + std::to_string(seg.dep_labels->size()) +
                             " dependency labels");
}

} // namespace

int insert_placeholder_unaligned(const AnnotatedSegment& seg, int src_idx) {
    check_segment(seg);
    int n = static_cast<int>(seg.source.size());
    int m = static_cast<int>(seg.target.size());
    if (src_idx < 0 || src_idx >= n)
        throw IndexOutOfBounds("source index " + std::to_string(src_idx) +
                               " outside the segment");

    std::vector<int> lo(static_cast<std::size_t>(n), -1), hi(static_cast<std::size_t>(n), -1);
    for (const auto& l : seg.alignment) {
        auto s = static_cast<std::size_t>(l.src);
        if (lo[s] < 0 || l.tgt < lo[s]) lo[s] = l.tgt;
        if (l.tgt > hi[s]) hi[s] = l.tgt;
    }

    for (int d = 1; d < n; ++d) {
        int left = src_idx - d;
        if (left >= 0 && hi[static_cast<std::size_t>(left)] >= 0)
            return hi[static_cast<std::size_t>(left)] + 1;
        int right = src_idx + d;
        if (right < n && lo[static_cast<std::size_t>(right)] >= 0)
            return lo[static_cast<std::size_t>(right)];
    }

    // No aligned neighbour anywhere: place proportionally, rounding half-up.
    long long pos = (2LL * src_idx * m + n) / (2LL * n);
    return static_cast<int>(std::clamp<long long>(pos, 0, m));
}

namespace {

struct Event {
    bool inserted = false;  // false: replaces target_pos; true: inserts before it
    int target_pos = 0;
    int source_index = 0;
    std::string label;
    std::vector<TaggedToken> replaced;
};

std::vector<Event> decide(const AnnotatedSegment& seg, const std::vector<int>& pronouns,
                          const SubtaskSpec& spec) {
    std::vector<Event> events;
    std::set<int> claimed;
    for (int i : pronouns) {
        std::vector<int> positions;
        for (const auto& l : seg.alignment)
            if (l.src == i && !claimed.count(l.tgt)) positions.push_back(l.tgt);
        if (!positions.empty()) {
            std::vector<TaggedToken> tokens;
            tokens.reserve(positions.size());
            for (int p : positions) tokens.push_back(seg.target[static_cast<std::size_t>(p)]);
            auto choice = map_target_class(tokens, spec);
            int pos = positions[static_cast<std::size_t>(choice.index)];
            claimed.insert(pos);
            events.push_back(Event{false, pos, i, choice.cls,
                                   {seg.target[static_cast<std::size_t>(pos)]}});
        } else {
            int pos = insert_placeholder_unaligned(seg, i);
            events.push_back(Event{true, pos, i, SubtaskSpec::fallback_class(), {}});
        }
    }
    return events;
}

TaskInstance materialize(const AnnotatedSegment& seg, const std::vector<Event>& events) {
    TaskInstance inst;
    inst.source = seg.source;

    std::vector<const Event*> replace_at(seg.target.size(), nullptr);
    std::vector<std::vector<const Event*>> insert_at(seg.target.size() + 1);
    for (const auto& ev : events) {
        if (ev.inserted)
            insert_at[static_cast<std::size_t>(ev.target_pos)].push_back(&ev);
        else
            replace_at[static_cast<std::size_t>(ev.target_pos)] = &ev;
    }

    std::vector<int> new_index(seg.target.size(), 0);
    std::vector<const Event*> placeholder_events;
    for (std::size_t q = 0; q <= seg.target.size(); ++q) {
        for (const Event* ev : insert_at[q]) {
            inst.target.emplace_back(Placeholder{ev->source_index});
            placeholder_events.push_back(ev);
        }
        if (q == seg.target.size()) break;
        new_index[q] = static_cast<int>(inst.target.size());
        if (const Event* ev = replace_at[q]) {
            inst.target.emplace_back(Placeholder{ev->source_index});
            placeholder_events.push_back(ev);
        } else {
            inst.target.emplace_back(seg.target[q]);
        }
    }

    for (const Event* ev : placeholder_events) {
        inst.labels.push_back(ev->label);
        inst.replaced.push_back(ev->replaced);
    }
    for (const auto& l : seg.alignment)
        inst.alignment.insert(AlignmentLink{l.src, new_index[static_cast<std::size_t>(l.tgt)]});
    return inst;
}

} // namespace

void ExtractStats::merge(const ExtractStats& o) {
    for (const auto& [k, v] : o.class_counts) class_counts[k] += v;
    for (const auto& [k, v] : o.class_counts_unfiltered) class_counts_unfiltered[k] += v;
    segments += o.segments;
    instances += o.instances;
    pronouns_seen += o.pronouns_seen;
    pronouns_kept += o.pronouns_kept;
    inserted_placeholders += o.inserted_placeholders;
}

std::optional<TaskInstance> extract_segment(const AnnotatedSegment& seg, const SubtaskSpec& spec,
                                            const ExtractOptions& opts, ExtractStats* stats) {
    check_segment(seg);
    auto pronouns = find_source_pronouns(seg.source, spec);
    std::vector<int> kept;
    bool filtering = opts.subject_filter && direction_filters_subjects(spec.direction);
    if (filtering) {
        const auto& keep =
            opts.keep_labels ? *opts.keep_labels : default_subject_labels(spec.direction);
        kept = filter_subjects(pronouns, seg.dep_labels, keep);
    } else {
        kept = pronouns;
    }

    auto events = decide(seg, kept, spec);

    if (stats) {
        ++stats->segments;
        stats->pronouns_seen += static_cast<std::int64_t>(pronouns.size());
        stats->pronouns_kept += static_cast<std::int64_t>(kept.size());
        for (const auto& ev : events) {
            ++stats->class_counts[ev.label];
            if (ev.inserted) ++stats->inserted_placeholders;
        }
        if (kept.size() == pronouns.size()) {
            for (const auto& ev : events) ++stats->class_counts_unfiltered[ev.label];
        } else {
            for (const auto& ev : decide(seg, pronouns, spec))
                ++stats->class_counts_unfiltered[ev.label];
        }
    }

    if (events.empty() && !opts.lm_corpus_mode) return std::nullopt;
    auto inst = materialize(seg, events);
    if (stats) ++stats->instances;
    return inst;
}

std::vector<TaskInstance> extract_examples(const std::vector<AnnotatedSegment>& segments,
                                           const SubtaskSpec& spec, const ExtractOptions& opts,
                                           ExtractStats* stats, int jobs) {
    std::vector<std::optional<TaskInstance>> slots(segments.size());
    std::size_t workers = jobs <= 1 ? 1 : static_cast<std::size_t>(jobs);
    std::vector<ExtractStats> chunk_stats;
    if (workers <= 1) {
        ExtractStats local;
        for (std::size_t i = 0; i < segments.size(); ++i)
            slots[i] = extract_segment(segments[i], spec, opts, stats ? &local : nullptr);
        if (stats) stats->merge(local);
    } else {
        std::size_t chunks = std::min(workers, std::max<std::size_t>(segments.size(), 1));
        chunk_stats.assign(chunks, ExtractStats{});
        std::exception_ptr failure;
        std::mutex failure_mtx;
        std::size_t per = (segments.size() + chunks - 1) / chunks;
        util::parallel_chunks(chunks, static_cast<int>(chunks), [&](std::size_t cb, std::size_t ce) {
            for (std::size_t c = cb; c < ce; ++c) {
                std::size_t b = c * per;
                std::size_t e = std::min(segments.size(), b + per);
                try {
                    for (std::size_t i = b; i < e; ++i)
                        slots[i] = extract_segment(segments[i], spec, opts,
                                                   stats ? &chunk_stats[c] : nullptr);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mtx);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
        if (failure) std::rethrow_exception(failure);
        if (stats)
            for (const auto& cs : chunk_stats) stats->merge(cs);
    }

    std::vector<TaskInstance> out;
    for (auto& slot : slots)
        if (slot) out.push_back(std::move(*slot));
    return out;
}

std::map<std::string, std::int64_t> class_frequency_table(
    const std::vector<TaskInstance>& instances) {
    std::map<std::string, std::int64_t> out;
    for (const auto& inst : instances)
        for (const auto& label : inst.labels) ++out[label];
    return out;
}

} // namespace pronpred::extract
