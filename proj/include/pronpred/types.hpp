#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pronpred {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parse/validation failure tied to one field of one input line. field is
// 1-based (0 = the line as a whole); line_no is 1-based (0 = unknown).
class MalformedLine : public Error {
public:
    MalformedLine(int field, std::string reason, std::size_t line_no = 0,
                  std::string source = "");
    int field() const { return field_; }
    const std::string& reason() const { return reason_; }
    std::size_t line_no() const { return line_no_; }
    const std::string& source() const { return source_; }

private:
    static std::string compose(int field, const std::string& reason,
                               std::size_t line_no, const std::string& source);
    int field_;
    std::string reason_;
    std::size_t line_no_;
    std::string source_;
};

class MissingLabels : public Error {
public:
    using Error::Error;
};
class EmptyCorpus : public Error {
public:
    using Error::Error;
};
class UntrainedModel : public Error {
public:
    using Error::Error;
};
class LengthMismatch : public Error {
public:
    using Error::Error;
};
class UnknownLabel : public Error {
public:
    using Error::Error;
};
class IndexOutOfBounds : public Error {
public:
    using Error::Error;
};
class EmptyGold : public Error {
public:
    using Error::Error;
};

struct TaggedToken {
    std::string lemma;
    std::string pos;
    bool operator==(const TaggedToken&) const = default;
};

struct AlignmentLink {
    int src = 0;
    int tgt = 0;
    auto operator<=>(const AlignmentLink&) const = default;
};

using AlignmentSet = std::set<AlignmentLink>;

enum class Direction { en_fr, fr_en, en_de, de_en };

Direction direction_from_string(std::string_view s);
std::string to_string(Direction d);

enum class TagPolicy { lenient, strict };

// Static description of one prediction task: which source tokens are
// prediction-triggering pronouns, the label inventory, and how target
// surface forms map onto labels.
struct SubtaskSpec {
    Direction direction = Direction::en_fr;
    std::set<std::string> source_pronouns;        // lowercase surface forms
    std::vector<std::string> classes;             // label order, OTHER last
    std::map<std::string, std::string> lexicon;   // lowercase target form -> class
    std::set<std::string> target_tagset;          // coarse tags of the target side
    TagPolicy tag_policy = TagPolicy::lenient;

    static const std::string& fallback_class();   // "OTHER"
    bool has_class(std::string_view label) const;
    bool is_source_pronoun(std::string_view token) const;  // case-folded
    // Lexicon lookup on the case-folded surface form; OTHER when absent.
    std::string class_of(std::string_view target_surface) const;
};

SubtaskSpec builtin_spec(Direction d);

// Placeholder in the target side, remembering which source token produced it.
struct Placeholder {
    int source_index = 0;
    bool operator==(const Placeholder&) const = default;
};

using TargetItem = std::variant<TaggedToken, Placeholder>;

struct TaskInstance {
    std::vector<std::string> labels;                  // one per placeholder
    std::vector<std::vector<TaggedToken>> replaced;   // one group per placeholder
    std::vector<std::string> source;                  // plain tokens
    std::vector<TargetItem> target;                   // tagged tokens + placeholders
    AlignmentSet alignment;                           // source idx -> target idx
    bool operator==(const TaskInstance&) const = default;

    std::vector<int> placeholder_positions() const;
    std::size_t placeholder_count() const;
};

// Invariant check; returns human-readable violations (empty = valid).
// Lenient tag policy ignores tags outside the tagset, strict flags them.
std::vector<std::string> validate_instance(const TaskInstance& inst, const SubtaskSpec& spec);

// Internal variant keeping the field a violation belongs to, so parsers can
// raise MalformedLine with the right column.
struct Violation {
    int field;            // 1-based instance-line field
    std::string message;
};
std::vector<Violation> validate_instance_detail(const TaskInstance& inst, const SubtaskSpec& spec);

// Target side with every placeholder expanded back to its replaced tokens.
std::vector<TaggedToken> restore_target(const TaskInstance& inst);

struct ConfusionMatrix {
    std::vector<std::string> classes;
    std::vector<std::vector<std::int64_t>> counts;  // [gold][predicted]

    explicit ConfusionMatrix(std::vector<std::string> cls = {});
    std::size_t index_of(std::string_view label) const;  // UnknownLabel if absent
    std::int64_t total() const;
    std::int64_t diagonal() const;
    std::int64_t gold_count(std::size_t i) const;
    std::int64_t pred_count(std::size_t i) const;
};

} // namespace pronpred
