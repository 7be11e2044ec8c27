#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pronpred/format.hpp"
#include "pronpred/types.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace pronpred;

namespace {

MalformedLine capture(const std::string& line, const SubtaskSpec& spec) {
    try {
        format::parse_instance_line(line, spec);
    } catch (const MalformedLine& e) {
        return e;
    }
    FAIL("expected MalformedLine for: ", line);
    return MalformedLine(0, "unreachable");
}

} // namespace

TEST_CASE("tagged tokens split at the last separator") {
    auto tok = format::parse_tagged_token("être|VER");
    CHECK(tok.lemma == "être");
    CHECK(tok.pos == "VER");

    tok = format::parse_tagged_token("a|b|POS");
    CHECK(tok.lemma == "a|b");
    CHECK(tok.pos == "POS");

    CHECK(format::to_string(TaggedToken{"a|b", "POS"}) == "a|b|POS");
    CHECK(format::parse_tagged_token(format::to_string(tok)) == tok);

    CHECK_THROWS_WITH_AS(format::parse_tagged_token("word"),
                         "tagged token 'word' has no '|' separator", Error);
    CHECK_THROWS_WITH_AS(format::parse_tagged_token("|X"),
                         "tagged token '|X' has an empty lemma", Error);
    CHECK_THROWS_WITH_AS(format::parse_tagged_token("x|"),
                         "tagged token 'x|' has an empty tag", Error);
}

TEST_CASE("canonical line parses into the documented structure") {
    auto spec = builtin_spec(Direction::en_fr);
    auto inst = format::parse_instance_line(testsupport::kCanonicalLine, spec);
    CHECK(inst == testsupport::canonical_instance());
    CHECK(format::serialize_instance(inst) == testsupport::kCanonicalLine);
}

TEST_CASE("zero-placeholder lines keep their empty fields") {
    auto spec = builtin_spec(Direction::en_fr);
    std::string line = "\t\tthe dog .\tle|DET chien|NOM .|SENT\t0-0 1-1 2-2";
    auto inst = format::parse_instance_line(line, spec);
    CHECK(inst.labels.empty());
    CHECK(inst.replaced.empty());
    CHECK(inst.placeholder_count() == 0);
    CHECK(inst.source == std::vector<std::string>{"the", "dog", "."});
    CHECK(format::serialize_instance(inst) == line);

    // Fully linkless segment: the last field may be empty too.
    std::string bare = "\t\tthe dog .\tle|DET chien|NOM .|SENT\t";
    auto inst2 = format::parse_instance_line(bare, spec);
    CHECK(inst2.alignment.empty());
    CHECK(format::serialize_instance(inst2) == bare);
}

TEST_CASE("empty replaced groups are written as underscores") {
    auto spec = builtin_spec(Direction::en_fr);
    std::string line = "OTHER\t_\tit rain .\tREPLACE_0 pleuvoir|VER .|SENT\t1-1 2-2";
    auto inst = format::parse_instance_line(line, spec);
    CHECK(inst.replaced == std::vector<std::vector<TaggedToken>>{{}});
    CHECK(format::serialize_instance(inst) == line);
}

TEST_CASE("multi-token replaced groups join with plus") {
    auto spec = builtin_spec(Direction::en_fr);
    std::string line =
        "OTHER\tne|ADV+pas|ADV\tit go .\tREPLACE_0 aller|VER .|SENT\t1-1 2-2";
    auto inst = format::parse_instance_line(line, spec);
    REQUIRE(inst.replaced.size() == 1);
    CHECK(inst.replaced[0] ==
          std::vector<TaggedToken>{{"ne", "ADV"}, {"pas", "ADV"}});
    CHECK(format::serialize_instance(inst) == line);
}

TEST_CASE("parse failures carry the offending field") {
    auto spec = builtin_spec(Direction::en_fr);

    SUBCASE("wrong field count") {
        auto e = capture("a\tb\tc", spec);
        CHECK(e.field() == 0);
        CHECK(e.reason() == "expected 5 tab-separated fields, got 3");
    }
    SUBCASE("doubled space") {
        auto e = capture("\t\tthe  dog\tle|DET\t", spec);
        CHECK(e.field() == 3);
        CHECK(e.reason() == "doubled or stray space between tokens");
    }
    SUBCASE("unknown label") {
        auto e = capture("zzz\tce|PRON\tit\tREPLACE_0\t", spec);
        CHECK(e.field() == 1);
        CHECK(e.reason() == "unknown label 'zzz'");
    }
    SUBCASE("bare token in a replaced group") {
        auto e = capture("ce\tce\tit\tREPLACE_0\t", spec);
        CHECK(e.field() == 2);
        CHECK(e.reason() == "tagged token 'ce' has no '|' separator");
    }
    SUBCASE("empty token in a replaced group") {
        auto e = capture("ce\tce|PRON+\tit\tREPLACE_0\t", spec);
        CHECK(e.field() == 2);
        CHECK(e.reason() == "empty token in replaced group 'ce|PRON+'");
    }
    SUBCASE("bare target token") {
        auto e = capture("\t\tit\tword\t", spec);
        CHECK(e.field() == 4);
        CHECK(e.reason() == "tagged token 'word' has no '|' separator");
    }
    SUBCASE("placeholder with a padded index") {
        auto e = capture("ce\tce|PRON\tit\tREPLACE_01\t", spec);
        CHECK(e.field() == 4);
        CHECK(e.reason() == "malformed placeholder 'REPLACE_01'");
    }
    SUBCASE("placeholder with a non-numeric index") {
        auto e = capture("ce\tce|PRON\tit\tREPLACE_x\t", spec);
        CHECK(e.field() == 4);
        CHECK(e.reason() == "malformed placeholder 'REPLACE_x'");
    }
    SUBCASE("placeholder index out of bounds") {
        auto e = capture("ce\tce|PRON\tit\tREPLACE_3\t", spec);
        CHECK(e.field() == 4);
        CHECK(e.reason() ==
              "placeholder index out of bounds: REPLACE_3 but source has 1 tokens");
    }
    SUBCASE("placeholder on a non-pronoun source token") {
        auto e = capture("ce\tce|PRON\thouse\tREPLACE_0\t", spec);
        CHECK(e.field() == 4);
        CHECK(e.reason() == "placeholder source token 'house' is not a source pronoun");
    }
    SUBCASE("bad alignment pair") {
        auto e = capture("\t\tit\tmot|NOM\t3x4", spec);
        CHECK(e.field() == 5);
        CHECK(e.reason() == "bad alignment link '3x4'");
    }
    SUBCASE("alignment link out of range") {
        auto e = capture("\t\tit\tmot|NOM\t0-5", spec);
        CHECK(e.field() == 5);
        CHECK(e.reason() == "alignment link 0-5 out of bounds for 1x1 segment");
    }
    SUBCASE("label/placeholder mismatch") {
        auto e = capture("ce OTHER\tce|PRON _\tit\tREPLACE_0\t", spec);
        CHECK(e.field() == 1);
        CHECK(e.reason() == "label/placeholder count mismatch: 2 labels, 1 placeholders");
    }
}

TEST_CASE("lemmas may legally contain the tag separator") {
    auto spec = builtin_spec(Direction::en_fr);
    std::string line = "\t\tit\ta|b|NOM\t0-0";
    auto inst = format::parse_instance_line(line, spec);
    REQUIRE(inst.target.size() == 1);
    CHECK(std::get<TaggedToken>(inst.target[0]) == TaggedToken{"a|b", "NOM"});
    CHECK(format::serialize_instance(inst) == line);
}

TEST_CASE("REPLACE_-prefixed lemmas survive when tagged") {
    auto spec = builtin_spec(Direction::en_fr);
    std::string line = "\t\tit\tREPLACE_x|NOM\t0-0";
    auto inst = format::parse_instance_line(line, spec);
    REQUIRE(inst.target.size() == 1);
    CHECK(std::get<TaggedToken>(inst.target[0]) == TaggedToken{"REPLACE_x", "NOM"});
    CHECK(format::serialize_instance(inst) == line);
}

TEST_CASE("random instances round-trip byte for byte") {
    std::mt19937 rng(99);
    for (Direction d :
         {Direction::en_fr, Direction::fr_en, Direction::en_de, Direction::de_en}) {
        auto spec = builtin_spec(d);
        for (int i = 0; i < 400; ++i) {
            auto inst = testsupport::random_instance(rng, spec);
            auto line = format::serialize_instance(inst);
            auto back = format::parse_instance_line(line, spec);
            CHECK(back == inst);
            CHECK(format::serialize_instance(back) == line);
        }
    }
}

TEST_CASE("alignment lines parse, deduplicate and sort") {
    auto links = format::parse_alignment_line("0-0 2-1 1-3");
    CHECK(links == AlignmentSet{{0, 0}, {1, 3}, {2, 1}});
    CHECK(format::serialize_alignment(links) == "0-0 1-3 2-1");

    CHECK(format::parse_alignment_line("").empty());
    CHECK(format::parse_alignment_line("0-0 0-0") == AlignmentSet{{0, 0}});

    CHECK_THROWS_AS(format::parse_alignment_line("3x4"), MalformedLine);
    CHECK_THROWS_AS(format::parse_alignment_line("1-2-3"), MalformedLine);
    CHECK_THROWS_AS(format::parse_alignment_line("-1-2"), MalformedLine);
    CHECK_THROWS_AS(format::parse_alignment_line("01-2"), MalformedLine);
    CHECK_THROWS_AS(format::parse_alignment_line("0-0  1-1"), MalformedLine);
}

TEST_CASE("stream readers keep line numbers and the source name") {
    auto spec = builtin_spec(Direction::en_fr);
    std::istringstream in("\t\tok\tmot|NOM\t0-0\nbroken line\n");
    try {
        format::read_instances(in, spec, "batch.tsv");
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_no() == 2);
        CHECK(e.source() == "batch.tsv");
        CHECK(std::string(e.what()).find("batch.tsv:2:") == 0);
    }
}

TEST_CASE("tagged corpus reader handles CRLF and reports bad tokens") {
    std::istringstream in("être|VER un|DET\r\na|b|POS\n");
    auto corpus = format::read_tagged_corpus(in);
    REQUIRE(corpus.size() == 2);
    CHECK(corpus[0] == std::vector<TaggedToken>{{"être", "VER"}, {"un", "DET"}});
    CHECK(corpus[1] == std::vector<TaggedToken>{{"a|b", "POS"}});

    std::istringstream bad("fine|VER\nword\n");
    try {
        format::read_tagged_corpus(bad, "tagged.txt");
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line_no() == 2);
        CHECK(e.source() == "tagged.txt");
    }
}

TEST_CASE("token corpus reader keeps empty segments") {
    std::istringstream in("a b c\n\nd\n");
    auto corpus = format::read_token_corpus(in);
    REQUIRE(corpus.size() == 3);
    CHECK(corpus[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(corpus[1].empty());
    CHECK(corpus[2] == std::vector<std::string>{"d"});
}

TEST_CASE("prediction reader is the token reader") {
    std::istringstream in("ce OTHER\n\nil\n");
    auto preds = format::read_predictions(in);
    REQUIRE(preds.size() == 3);
    CHECK(preds[0] == std::vector<std::string>{"ce", "OTHER"});
    CHECK(preds[1].empty());
}

TEST_CASE("instance files round-trip through disk") {
    auto spec = builtin_spec(Direction::fr_en);
    std::mt19937 rng(123);
    std::vector<TaskInstance> instances;
    for (int i = 0; i < 50; ++i) instances.push_back(testsupport::random_instance(rng, spec));

    std::string path = "format_roundtrip.tsv";
    format::write_instance_file(path, instances);
    auto back = format::read_instance_file(path, spec);
    CHECK(back == instances);
    std::remove(path.c_str());

    CHECK_THROWS_AS(format::read_instance_file("does-not-exist.tsv", spec), Error);
}
