#include "pronpred/format.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pronpred/util.hpp"

namespace pronpred::format {

namespace {

constexpr std::string_view kReplacePrefix = "REPLACE_";
constexpr std::string_view kEmptyGroup = "_";

std::vector<std::string_view> field_tokens(std::string_view field, int field_no,
                                           std::size_t line_no, std::string_view src) {
    auto toks = util::split_tokens(field);
    for (const auto& t : toks)
        if (t.empty())
            throw MalformedLine(field_no, "doubled or stray space between tokens",
                                line_no, std::string(src));
    return toks;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    return out;
}

// getline that tolerates CRLF input.
bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

} // namespace

TaggedToken parse_tagged_token(std::string_view token) {
    std::size_t bar = token.rfind('|');
    if (bar == std::string_view::npos)
        throw Error("tagged token '" + std::string(token) + "' has no '|' separator");
    if (bar == 0)
        throw Error("tagged token '" + std::string(token) + "' has an empty lemma");
    if (bar + 1 == token.size())
        throw Error("tagged token '" + std::string(token) + "' has an empty tag");
    return TaggedToken{std::string(token.substr(0, bar)), std::string(token.substr(bar + 1))};
}

std::string to_string(const TaggedToken& tok) {
    return tok.lemma + "|" + tok.pos;
}

TaskInstance parse_instance_line(std::string_view line, const SubtaskSpec& spec,
                                 std::size_t line_no, std::string_view source_name) {
    std::string src(source_name);
    auto fields = util::split_fields(line, '\t');
    if (fields.size() != 5)
        throw MalformedLine(0, "expected 5 tab-separated fields, got " +
                                   std::to_string(fields.size()),
                            line_no, src);

    TaskInstance inst;

    for (auto tok : field_tokens(fields[0], 1, line_no, src))
        inst.labels.emplace_back(tok);

    for (auto group : field_tokens(fields[1], 2, line_no, src)) {
        if (group == kEmptyGroup) {
            inst.replaced.emplace_back();
            continue;
        }
        std::vector<TaggedToken> parsed;
        for (auto part : util::split_fields(group, '+')) {
            if (part.empty())
                throw MalformedLine(2, "empty token in replaced group '" +
                                           std::string(group) + "'",
                                    line_no, src);
            try {
                parsed.push_back(parse_tagged_token(part));
            } catch (const Error& e) {
                throw MalformedLine(2, e.what(), line_no, src);
            }
        }
        inst.replaced.push_back(std::move(parsed));
    }

    for (auto tok : field_tokens(fields[2], 3, line_no, src))
        inst.source.emplace_back(tok);

    for (auto tok : field_tokens(fields[3], 4, line_no, src)) {
        if (tok.size() > kReplacePrefix.size() && tok.substr(0, kReplacePrefix.size()) == kReplacePrefix) {
            auto idx = util::parse_canonical_int(tok.substr(kReplacePrefix.size()));
            if (idx) {
                inst.target.emplace_back(Placeholder{*idx});
                continue;
            }
            // fall through: REPLACE_ followed by non-canonical digits is only
            // acceptable as an ordinary lemma|TAG token
            if (tok.find('|') == std::string_view::npos)
                throw MalformedLine(4, "malformed placeholder '" + std::string(tok) + "'",
                                    line_no, src);
        }
        try {
            inst.target.emplace_back(parse_tagged_token(tok));
        } catch (const Error& e) {
            throw MalformedLine(4, e.what(), line_no, src);
        }
    }

    for (auto tok : field_tokens(fields[4], 5, line_no, src)) {
        auto dash = tok.find('-');
        if (dash == std::string_view::npos || tok.find('-', dash + 1) != std::string_view::npos)
            throw MalformedLine(5, "bad alignment link '" + std::string(tok) + "'", line_no, src);
        auto s = util::parse_canonical_int(tok.substr(0, dash));
        auto t = util::parse_canonical_int(tok.substr(dash + 1));
        if (!s || !t)
            throw MalformedLine(5, "bad alignment link '" + std::string(tok) + "'", line_no, src);
        inst.alignment.insert(AlignmentLink{*s, *t});
    }

    auto violations = validate_instance_detail(inst, spec);
    if (!violations.empty())
        throw MalformedLine(violations.front().field, violations.front().message, line_no, src);
    return inst;
}

std::string serialize_instance(const TaskInstance& inst) {
    std::string out;
    out += util::join(inst.labels, " ");
    out += '\t';
    {
        std::vector<std::string> groups;
        groups.reserve(inst.replaced.size());
        for (const auto& group : inst.replaced) {
            if (group.empty()) {
                groups.emplace_back(kEmptyGroup);
                continue;
            }
            std::vector<std::string> parts;
            parts.reserve(group.size());
            for (const auto& tok : group) parts.push_back(to_string(tok));
            groups.push_back(util::join(parts, "+"));
        }
        out += util::join(groups, " ");
    }
    out += '\t';
    out += util::join(inst.source, " ");
    out += '\t';
    {
        std::vector<std::string> items;
        items.reserve(inst.target.size());
        for (const auto& item : inst.target) {
            if (const auto* tok = std::get_if<TaggedToken>(&item))
                items.push_back(to_string(*tok));
            else
                items.push_back(std::string(kReplacePrefix) +
                                std::to_string(std::get<Placeholder>(item).source_index));
        }
        out += util::join(items, " ");
    }
    out += '\t';
    out += serialize_alignment(inst.alignment);
    return out;
}

std::vector<TaskInstance> read_instances(std::istream& in, const SubtaskSpec& spec,
                                         std::string_view source_name) {
    std::vector<TaskInstance> out;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        out.push_back(parse_instance_line(line, spec, line_no, source_name));
    }
    return out;
}

std::vector<TaskInstance> read_instance_file(const std::string& path, const SubtaskSpec& spec) {
    auto in = open_input(path);
    return read_instances(in, spec, path);
}

void write_instances(std::ostream& out, const std::vector<TaskInstance>& instances) {
    for (const auto& inst : instances) out << serialize_instance(inst) << '\n';
}

void write_instance_file(const std::string& path, const std::vector<TaskInstance>& instances) {
    auto out = open_output(path);
    write_instances(out, instances);
}

AlignmentSet parse_alignment_line(std::string_view line, std::size_t line_no,
                                  std::string_view source_name) {
    AlignmentSet links;
    for (auto tok : field_tokens(line, 1, line_no, source_name)) {
        auto dash = tok.find('-');
        if (dash == std::string_view::npos || tok.find('-', dash + 1) != std::string_view::npos)
            throw MalformedLine(1, "bad alignment link '" + std::string(tok) + "'", line_no,
                                std::string(source_name));
        auto s = util::parse_canonical_int(tok.substr(0, dash));
        auto t = util::parse_canonical_int(tok.substr(dash + 1));
        if (!s || !t)
            throw MalformedLine(1, "bad alignment link '" + std::string(tok) + "'", line_no,
                                std::string(source_name));
        links.insert(AlignmentLink{*s, *t});
    }
    return links;
}

std::string serialize_alignment(const AlignmentSet& links) {
    std::vector<std::string> parts;
    parts.reserve(links.size());
    for (const auto& l : links)
        parts.push_back(std::to_string(l.src) + "-" + std::to_string(l.tgt));
    return util::join(parts, " ");
}

std::vector<AlignmentSet> read_alignments(std::istream& in, std::string_view source_name) {
    std::vector<AlignmentSet> out;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        out.push_back(parse_alignment_line(line, line_no, source_name));
    }
    return out;
}

std::vector<AlignmentSet> read_alignment_file(const std::string& path) {
    auto in = open_input(path);
    return read_alignments(in, path);
}

void write_alignment_file(const std::string& path, const std::vector<AlignmentSet>& segs) {
    auto out = open_output(path);
    for (const auto& links : segs) out << serialize_alignment(links) << '\n';
}

std::vector<std::vector<TaggedToken>> read_tagged_corpus(std::istream& in,
                                                         std::string_view source_name) {
    std::vector<std::vector<TaggedToken>> out;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        std::vector<TaggedToken> seg;
        for (auto tok : field_tokens(line, 1, line_no, source_name)) {
            try {
                seg.push_back(parse_tagged_token(tok));
            } catch (const Error& e) {
                throw MalformedLine(1, e.what(), line_no, std::string(source_name));
            }
        }
        out.push_back(std::move(seg));
    }
    return out;
}

std::vector<std::vector<TaggedToken>> read_tagged_corpus_file(const std::string& path) {
    auto in = open_input(path);
    return read_tagged_corpus(in, path);
}

std::vector<std::vector<std::string>> read_token_corpus(std::istream& in,
                                                        std::string_view source_name) {
    std::vector<std::vector<std::string>> out;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        std::vector<std::string> seg;
        for (auto tok : field_tokens(line, 1, line_no, source_name))
            seg.emplace_back(tok);
        out.push_back(std::move(seg));
    }
    return out;
}

std::vector<std::vector<std::string>> read_token_corpus_file(const std::string& path) {
    auto in = open_input(path);
    return read_token_corpus(in, path);
}

std::vector<std::vector<std::string>> read_predictions(std::istream& in,
                                                       std::string_view source_name) {
    return read_token_corpus(in, source_name);
}

std::vector<std::vector<std::string>> read_prediction_file(const std::string& path) {
    auto in = open_input(path);
    return read_predictions(in, path);
}

} // namespace pronpred::format
