#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pronpred/types.hpp"

namespace pronpred::format {

// "lemma|TAG", split at the last '|' so lemmas may contain '|'.
TaggedToken parse_tagged_token(std::string_view token);
std::string to_string(const TaggedToken& tok);

// One instance per line, 5 TAB-separated fields:
//   1  labels, space separated (empty when the segment has no placeholder)
//   2  replaced token groups, one per placeholder; tokens joined by '+',
//      an empty group written as '_'
//   3  source tokens
//   4  target items: lemma|TAG tokens and REPLACE_k placeholders, where k is
//      the source token index
//   5  alignment links "s-t", sorted by (s, t)
// The line is validated against the subtask spec before being returned.
TaskInstance parse_instance_line(std::string_view line, const SubtaskSpec& spec,
                                 std::size_t line_no = 0, std::string_view source_name = "");
std::string serialize_instance(const TaskInstance& inst);

std::vector<TaskInstance> read_instances(std::istream& in, const SubtaskSpec& spec,
                                         std::string_view source_name = "<stream>");
std::vector<TaskInstance> read_instance_file(const std::string& path, const SubtaskSpec& spec);
void write_instances(std::ostream& out, const std::vector<TaskInstance>& instances);
void write_instance_file(const std::string& path, const std::vector<TaskInstance>& instances);

// "s-t" pairs, space separated, one segment per line. Empty line = no links.
AlignmentSet parse_alignment_line(std::string_view line, std::size_t line_no = 0,
                                  std::string_view source_name = "");
std::string serialize_alignment(const AlignmentSet& links);
std::vector<AlignmentSet> read_alignments(std::istream& in,
                                          std::string_view source_name = "<stream>");
std::vector<AlignmentSet> read_alignment_file(const std::string& path);
void write_alignment_file(const std::string& path, const std::vector<AlignmentSet>& segs);

// Tagged corpus: one segment per line of space separated lemma|TAG tokens.
std::vector<std::vector<TaggedToken>> read_tagged_corpus(std::istream& in,
                                                         std::string_view source_name = "<stream>");
std::vector<std::vector<TaggedToken>> read_tagged_corpus_file(const std::string& path);

// Plain tokenized corpus (also used for dependency-label columns): one
// segment per line of space separated tokens. Empty line = empty segment.
std::vector<std::vector<std::string>> read_token_corpus(std::istream& in,
                                                        std::string_view source_name = "<stream>");
std::vector<std::vector<std::string>> read_token_corpus_file(const std::string& path);

// Prediction file: one line per instance, space separated labels (one per
// placeholder); a line may be empty for zero-placeholder instances.
std::vector<std::vector<std::string>> read_predictions(std::istream& in,
                                                       std::string_view source_name = "<stream>");
std::vector<std::vector<std::string>> read_prediction_file(const std::string& path);

} // namespace pronpred::format
