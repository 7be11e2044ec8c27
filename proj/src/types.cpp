#include "pronpred/types.hpp"

#include <numeric>

#include "pronpred/util.hpp"

namespace pronpred {

MalformedLine::MalformedLine(int field, std::string reason, std::size_t line_no,
                             std::string source)
    : Error(compose(field, reason, line_no, source)),
      field_(field),
      reason_(std::move(reason)),
      line_no_(line_no),
      source_(std::move(source)) {}

std::string MalformedLine::compose(int field, const std::string& reason,
                                   std::size_t line_no, const std::string& source) {
    std::string msg;
    if (!source.empty()) msg += source + ":";
    if (line_no > 0) msg += std::to_string(line_no) + ":";
    if (!msg.empty()) msg += " ";
    if (field > 0) msg += "field " + std::to_string(field) + ": ";
    msg += reason;
    return msg;
}

Direction direction_from_string(std::string_view s) {
    if (s == "en-fr") return Direction::en_fr;
    if (s == "fr-en") return Direction::fr_en;
    if (s == "en-de") return Direction::en_de;
    if (s == "de-en") return Direction::de_en;
    throw Error("unknown direction '" + std::string(s) +
                "' (expected en-fr, fr-en, en-de or de-en)");
}

std::string to_string(Direction d) {
    switch (d) {
        case Direction::en_fr: return "en-fr";
        case Direction::fr_en: return "fr-en";
        case Direction::en_de: return "en-de";
        case Direction::de_en: return "de-en";
    }
    throw Error("invalid direction value");
}

const std::string& SubtaskSpec::fallback_class() {
    static const std::string other = "OTHER";
    return other;
}

bool SubtaskSpec::has_class(std::string_view label) const {
    for (const auto& c : classes)
        if (c == label) return true;
    return false;
}

bool SubtaskSpec::is_source_pronoun(std::string_view token) const {
    return source_pronouns.count(util::fold_lower(token)) > 0;
}

std::string SubtaskSpec::class_of(std::string_view target_surface) const {
    auto it = lexicon.find(util::fold_lower(target_surface));
    if (it != lexicon.end()) return it->second;
    return fallback_class();
}

namespace {

// 12-tag universal set used for English and German target sides.
const std::set<std::string>& universal_tagset() {
    static const std::set<std::string> tags = {"VERB", "NOUN", "PRON", "ADJ",
                                               "ADV",  "ADP",  "CONJ", "DET",
                                               "NUM",  "PRT",  "X",    "."};
    return tags;
}

// TreeTagger French tags clipped at the colon (VER:pres -> VER etc.).
const std::set<std::string>& french_tagset() {
    static const std::set<std::string> tags = {"ABR", "ADJ", "ADV", "DET", "INT",
                                               "KON", "NAM", "NOM", "NUM", "PRO",
                                               "PRP", "PUN", "SENT", "SYM", "VER"};
    return tags;
}

} // namespace

SubtaskSpec builtin_spec(Direction d) {
    SubtaskSpec s;
    s.direction = d;
    switch (d) {
        case Direction::en_fr:
            s.source_pronouns = {"it", "they"};
            s.classes = {"ce", "elle", "elles", "il", "ils", "cela", "on", "OTHER"};
            s.lexicon = {{"ce", "ce"},     {"c'", "ce"},    {"elle", "elle"},
                         {"elles", "elles"}, {"il", "il"},  {"ils", "ils"},
                         {"cela", "cela"}, {"ça", "cela"},  {"ca", "cela"},
                         {"ç'", "cela"},   {"on", "on"}};
            s.target_tagset = french_tagset();
            break;
        case Direction::fr_en:
            s.source_pronouns = {"elle", "elles", "il", "ils"};
            s.classes = {"he", "she", "it", "they", "this", "these", "there", "OTHER"};
            s.lexicon = {{"he", "he"},       {"she", "she"},   {"it", "it"},
                         {"they", "they"},   {"this", "this"}, {"that", "this"},
                         {"these", "these"}, {"those", "these"}, {"there", "there"}};
            s.target_tagset = universal_tagset();
            break;
        case Direction::en_de:
            s.source_pronouns = {"it", "they"};
            s.classes = {"er", "sie", "es", "man", "OTHER"};
            s.lexicon = {{"er", "er"}, {"sie", "sie"}, {"es", "es"}, {"man", "man"}};
            s.target_tagset = universal_tagset();
            break;
        case Direction::de_en:
            s.source_pronouns = {"er", "sie", "es"};
            s.classes = {"he",    "she",   "it",    "they", "you",
                         "this",  "these", "there", "OTHER"};
            s.lexicon = {{"he", "he"},       {"she", "she"},     {"it", "it"},
                         {"they", "they"},   {"you", "you"},     {"this", "this"},
                         {"that", "this"},   {"these", "these"}, {"those", "these"},
                         {"there", "there"}};
            s.target_tagset = universal_tagset();
            break;
    }
    return s;
}

std::vector<int> TaskInstance::placeholder_positions() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < target.size(); ++i)
        if (std::holds_alternative<Placeholder>(target[i]))
            out.push_back(static_cast<int>(i));
    return out;
}

std::size_t TaskInstance::placeholder_count() const {
    std::size_t n = 0;
    for (const auto& item : target)
        if (std::holds_alternative<Placeholder>(item)) ++n;
    return n;
}

namespace {

void check_token(const TaggedToken& tok, int field, const SubtaskSpec& spec,
                 std::vector<Violation>& out) {
    if (tok.lemma.empty())
        out.push_back({field, "empty lemma in tagged token"});
    else if (util::contains_whitespace(tok.lemma))
        out.push_back({field, "lemma contains whitespace: '" + tok.lemma + "'"});
    if (tok.pos.empty())
        out.push_back({field, "empty PoS tag on lemma '" + tok.lemma + "'"});
    else if (util::contains_whitespace(tok.pos) || tok.pos.find('|') != std::string::npos)
        out.push_back({field, "malformed PoS tag '" + tok.pos + "'"});
    else if (spec.tag_policy == TagPolicy::strict && !spec.target_tagset.count(tok.pos))
        out.push_back({field, "PoS tag '" + tok.pos + "' outside the configured tagset"});
}

} // namespace

std::vector<Violation> validate_instance_detail(const TaskInstance& inst,
                                                const SubtaskSpec& spec) {
    std::vector<Violation> out;
    auto positions = inst.placeholder_positions();

    if (inst.labels.size() != positions.size())
        out.push_back({1, "label/placeholder count mismatch: " +
                              std::to_string(inst.labels.size()) + " labels, " +
                              std::to_string(positions.size()) + " placeholders"});
    for (const auto& label : inst.labels)
        if (!spec.has_class(label))
            out.push_back({1, "unknown label '" + label + "'"});

    if (inst.replaced.size() != positions.size())
        out.push_back({2, "replaced-group/placeholder count mismatch: " +
                              std::to_string(inst.replaced.size()) + " groups, " +
                              std::to_string(positions.size()) + " placeholders"});
    for (const auto& group : inst.replaced)
        for (const auto& tok : group) {
            check_token(tok, 2, spec, out);
            if (tok.lemma.find('+') != std::string::npos)
                out.push_back({2, "replaced lemma contains '+': '" + tok.lemma + "'"});
        }

    for (const auto& tok : inst.source) {
        if (tok.empty())
            out.push_back({3, "empty source token"});
        else if (util::contains_whitespace(tok))
            out.push_back({3, "source token contains whitespace: '" + tok + "'"});
    }

    for (const auto& item : inst.target) {
        if (const auto* tok = std::get_if<TaggedToken>(&item)) {
            check_token(*tok, 4, spec, out);
        } else {
            int k = std::get<Placeholder>(item).source_index;
            if (k < 0 || static_cast<std::size_t>(k) >= inst.source.size()) {
                out.push_back({4, "placeholder index out of bounds: REPLACE_" +
                                      std::to_string(k) + " but source has " +
                                      std::to_string(inst.source.size()) + " tokens"});
            } else if (!spec.is_source_pronoun(inst.source[k])) {
                out.push_back({4, "placeholder source token '" + inst.source[k] +
                                      "' is not a source pronoun"});
            }
        }
    }

    for (const auto& link : inst.alignment) {
        if (link.src < 0 || static_cast<std::size_t>(link.src) >= inst.source.size() ||
            link.tgt < 0 || static_cast<std::size_t>(link.tgt) >= inst.target.size())
            out.push_back({5, "alignment link " + std::to_string(link.src) + "-" +
                                  std::to_string(link.tgt) + " out of bounds for " +
                                  std::to_string(inst.source.size()) + "x" +
                                  std::to_string(inst.target.size()) + " segment"});
    }
    return out;
}

std::vector<std::string> validate_instance(const TaskInstance& inst, const SubtaskSpec& spec) {
    std::vector<std::string> out;
    for (auto& v : validate_instance_detail(inst, spec)) out.push_back(std::move(v.message));
    return out;
}

std::vector<TaggedToken> restore_target(const TaskInstance& inst) {
    std::vector<TaggedToken> out;
    out.reserve(inst.target.size());
    std::size_t ph = 0;
    for (const auto& item : inst.target) {
        if (const auto* tok = std::get_if<TaggedToken>(&item)) {
            out.push_back(*tok);
        } else {
            if (ph >= inst.replaced.size())
                throw LengthMismatch("replaced-group/placeholder count mismatch");
            for (const auto& tok : inst.replaced[ph]) out.push_back(tok);
            ++ph;
        }
    }
    return out;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> cls) : classes(std::move(cls)) {
    counts.assign(classes.size(), std::vector<std::int64_t>(classes.size(), 0));
}

std::size_t ConfusionMatrix::index_of(std::string_view label) const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i] == label) return i;
    throw UnknownLabel("unknown label '" + std::string(label) + "'");
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (const auto& row : counts)
        t = std::accumulate(row.begin(), row.end(), t);
    return t;
}

std::int64_t ConfusionMatrix::diagonal() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

std::int64_t ConfusionMatrix::gold_count(std::size_t i) const {
    return std::accumulate(counts.at(i).begin(), counts.at(i).end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::pred_count(std::size_t i) const {
    std::int64_t t = 0;
    for (const auto& row : counts) t += row.at(i);
    return t;
}

} // namespace pronpred
