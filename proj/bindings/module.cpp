#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pronpred/alignment.hpp"
#include "pronpred/baseline.hpp"
#include "pronpred/evaluation.hpp"
#include "pronpred/extraction.hpp"
#include "pronpred/format.hpp"
#include "pronpred/lm.hpp"
#include "pronpred/types.hpp"

namespace py = pybind11;
using namespace pronpred;

namespace {

AlignmentSet links_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
    AlignmentSet out;
    for (const auto& [s, t] : pairs) out.insert(AlignmentLink{s, t});
    return out;
}

std::vector<std::pair<int, int>> pairs_from_links(const AlignmentSet& links) {
    std::vector<std::pair<int, int>> out;
    out.reserve(links.size());
    for (const auto& l : links) out.emplace_back(l.src, l.tgt);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "cross-lingual pronoun prediction toolkit";

    // Translators run newest-first, so the base class is registered before
    // the specific exceptions that derive from it.
    py::register_exception<Error>(m, "PronPredError", PyExc_RuntimeError);
    py::register_exception<MalformedLine>(m, "MalformedLineError", PyExc_ValueError);
    py::register_exception<MissingLabels>(m, "MissingLabelsError", PyExc_ValueError);
    py::register_exception<EmptyCorpus>(m, "EmptyCorpusError", PyExc_ValueError);
    py::register_exception<UntrainedModel>(m, "UntrainedModelError", PyExc_RuntimeError);
    py::register_exception<LengthMismatch>(m, "LengthMismatchError", PyExc_ValueError);
    py::register_exception<UnknownLabel>(m, "UnknownLabelError", PyExc_ValueError);
    py::register_exception<IndexOutOfBounds>(m, "IndexOutOfBoundsError", PyExc_IndexError);
    py::register_exception<EmptyGold>(m, "EmptyGoldError", PyExc_ValueError);

    py::class_<TaggedToken>(m, "TaggedToken")
        .def(py::init<std::string, std::string>(), py::arg("lemma"), py::arg("pos"))
        .def_readwrite("lemma", &TaggedToken::lemma)
        .def_readwrite("pos", &TaggedToken::pos)
        .def("__eq__", [](const TaggedToken& a, const TaggedToken& b) { return a == b; })
        .def("__repr__", [](const TaggedToken& t) {
            return "TaggedToken(" + t.lemma + "|" + t.pos + ")";
        });

    py::class_<Placeholder>(m, "Placeholder")
        .def(py::init<int>(), py::arg("source_index"))
        .def_readwrite("source_index", &Placeholder::source_index)
        .def("__eq__", [](const Placeholder& a, const Placeholder& b) { return a == b; })
        .def("__repr__", [](const Placeholder& p) {
            return "Placeholder(" + std::to_string(p.source_index) + ")";
        });

    py::class_<SubtaskSpec>(m, "SubtaskSpec")
        .def_property_readonly("direction",
                               [](const SubtaskSpec& s) { return to_string(s.direction); })
        .def_readonly("source_pronouns", &SubtaskSpec::source_pronouns)
        .def_readonly("classes", &SubtaskSpec::classes)
        .def_readonly("lexicon", &SubtaskSpec::lexicon)
        .def_readonly("target_tagset", &SubtaskSpec::target_tagset)
        .def("class_of", &SubtaskSpec::class_of, py::arg("target_surface"))
        .def("is_source_pronoun", &SubtaskSpec::is_source_pronoun, py::arg("token"));

    m.def("builtin_spec",
          [](const std::string& direction) { return builtin_spec(direction_from_string(direction)); },
          py::arg("direction"));

    py::class_<TaskInstance>(m, "TaskInstance")
        .def(py::init<>())
        .def_readwrite("labels", &TaskInstance::labels)
        .def_readwrite("replaced", &TaskInstance::replaced)
        .def_readwrite("source", &TaskInstance::source)
        .def_readwrite("target", &TaskInstance::target)
        .def_property(
            "alignment",
            [](const TaskInstance& inst) { return pairs_from_links(inst.alignment); },
            [](TaskInstance& inst, const std::vector<std::pair<int, int>>& pairs) {
                inst.alignment = links_from_pairs(pairs);
            })
        .def("placeholder_positions", &TaskInstance::placeholder_positions)
        .def("placeholder_count", &TaskInstance::placeholder_count)
        .def("__eq__", [](const TaskInstance& a, const TaskInstance& b) { return a == b; });

    m.def("parse_instance_line",
          [](const std::string& line, const SubtaskSpec& spec) {
              return format::parse_instance_line(line, spec);
          },
          py::arg("line"), py::arg("spec"));
    m.def("serialize_instance", &format::serialize_instance, py::arg("instance"));
    m.def("validate_instance", &validate_instance, py::arg("instance"), py::arg("spec"));
    m.def("restore_target", &restore_target, py::arg("instance"));
    m.def("read_instance_file", &format::read_instance_file, py::arg("path"), py::arg("spec"));
    m.def("write_instance_file", &format::write_instance_file, py::arg("path"),
          py::arg("instances"));

    m.def("symmetrize",
          [](const std::vector<std::pair<int, int>>& fwd,
             const std::vector<std::pair<int, int>>& bwd, const std::string& heuristic,
             int src_len, int tgt_len) {
              return pairs_from_links(align::symmetrize(links_from_pairs(fwd),
                                                        links_from_pairs(bwd),
                                                        align::heuristic_from_string(heuristic),
                                                        src_len, tgt_len));
          },
          py::arg("forward"), py::arg("backward"), py::arg("heuristic"), py::arg("src_len"),
          py::arg("tgt_len"));

    m.def("evaluate_alignment",
          [](const std::vector<std::pair<int, int>>& hyp,
             const std::vector<std::pair<int, int>>& gold,
             const std::optional<std::set<int>>& pronoun_sources) {
              std::function<bool(const AlignmentLink&)> pred;
              if (pronoun_sources)
                  pred = [idx = *pronoun_sources](const AlignmentLink& l) {
                      return idx.count(l.src) > 0;
                  };
              auto eval = align::evaluate_alignment(links_from_pairs(hyp), links_from_pairs(gold),
                                                    pred);
              py::dict out;
              py::dict all;
              all["precision"] = eval.all.precision;
              all["recall"] = eval.all.recall;
              all["f1"] = eval.all.f1;
              out["all"] = all;
              if (eval.pronouns) {
                  py::dict p;
                  p["precision"] = eval.pronouns->precision;
                  p["recall"] = eval.pronouns->recall;
                  p["f1"] = eval.pronouns->f1;
                  out["pronouns"] = p;
              }
              return out;
          },
          py::arg("hyp"), py::arg("gold"), py::arg("pronoun_sources") = py::none());

    py::class_<extract::AnnotatedSegment>(m, "AnnotatedSegment")
        .def(py::init<>())
        .def_readwrite("source", &extract::AnnotatedSegment::source)
        .def_readwrite("dep_labels", &extract::AnnotatedSegment::dep_labels)
        .def_readwrite("target", &extract::AnnotatedSegment::target)
        .def_property(
            "alignment",
            [](const extract::AnnotatedSegment& seg) { return pairs_from_links(seg.alignment); },
            [](extract::AnnotatedSegment& seg, const std::vector<std::pair<int, int>>& pairs) {
                seg.alignment = links_from_pairs(pairs);
            });

    m.def("find_source_pronouns", &extract::find_source_pronouns, py::arg("source"),
          py::arg("spec"));
    m.def("map_target_class",
          [](const std::vector<TaggedToken>& aligned, const SubtaskSpec& spec) {
              auto choice = extract::map_target_class(aligned, spec);
              return py::make_tuple(choice.cls, choice.index);
          },
          py::arg("aligned_tokens"), py::arg("spec"));
    m.def("insert_placeholder_unaligned", &extract::insert_placeholder_unaligned, py::arg("segment"),
          py::arg("src_idx"));
    m.def("extract_examples",
          [](const std::vector<extract::AnnotatedSegment>& segments, const SubtaskSpec& spec,
             bool subject_filter, bool lm_corpus_mode) {
              extract::ExtractOptions opts;
              opts.subject_filter = subject_filter;
              opts.lm_corpus_mode = lm_corpus_mode;
              return extract::extract_examples(segments, spec, opts);
          },
          py::arg("segments"), py::arg("spec"), py::arg("subject_filter") = true,
          py::arg("lm_corpus_mode") = false);
    m.def("class_frequency_table", &extract::class_frequency_table, py::arg("instances"));

    py::class_<lm::NGramModel>(m, "NGramModel")
        .def_static("train", &lm::NGramModel::train, py::arg("corpus"), py::arg("order") = 5,
                    py::arg("unk_threshold") = 1)
        .def_property_readonly("order", &lm::NGramModel::order)
        .def_property_readonly("smoothing",
                               [](const lm::NGramModel& m_) { return to_string(m_.smoothing()); })
        .def_property_readonly("vocab_size", &lm::NGramModel::vocab_size)
        .def("prediction_vocabulary", &lm::NGramModel::prediction_vocabulary)
        .def("cond_prob", &lm::NGramModel::cond_prob, py::arg("word"), py::arg("history"))
        .def("sequence_logprob", &lm::NGramModel::sequence_logprob, py::arg("lemmas"))
        .def("prefix_logprob", &lm::NGramModel::prefix_logprob, py::arg("lemmas"))
        .def("raw_count", &lm::NGramModel::raw_count, py::arg("ngram"))
        .def("save", &lm::NGramModel::save_file, py::arg("path"))
        .def_static("load", &lm::NGramModel::load_file, py::arg("path"));

    py::class_<baseline::Candidate>(m, "Candidate")
        .def(py::init([](std::vector<std::string> tokens, std::string cls) {
                 return baseline::Candidate{std::move(tokens), std::move(cls)};
             }),
             py::arg("tokens"), py::arg("cls"))
        .def_readwrite("tokens", &baseline::Candidate::tokens)
        .def_readwrite("cls", &baseline::Candidate::cls)
        .def("is_none", &baseline::Candidate::is_none)
        .def("display", &baseline::Candidate::display);

    py::class_<baseline::CandidateSet>(m, "CandidateSet")
        .def(py::init<>())
        .def_readwrite("pronoun_fillers", &baseline::CandidateSet::pronoun_fillers)
        .def_readwrite("other_fillers", &baseline::CandidateSet::other_fillers)
        .def_readwrite("include_none", &baseline::CandidateSet::include_none)
        .def("all", &baseline::CandidateSet::all);

    m.def("build_candidate_set", &baseline::build_candidate_set, py::arg("training"),
          py::arg("spec"), py::arg("top_k") = 20);
    m.def("candidate_set_to_json", &baseline::candidate_set_to_json, py::arg("candidates"));
    m.def("candidate_set_from_json", &baseline::candidate_set_from_json, py::arg("text"));

    py::class_<baseline::Prediction>(m, "Prediction")
        .def_readonly("filler", &baseline::Prediction::filler)
        .def_readonly("cls", &baseline::Prediction::cls)
        .def_readonly("none", &baseline::Prediction::none)
        .def("__repr__", [](const baseline::Prediction& p) {
            return "Prediction(" + p.filler + " -> " + p.cls + ")";
        });

    m.def("fill_placeholders",
          [](const lm::NGramModel& model, const TaskInstance& inst,
             const baseline::CandidateSet& cands, double none_penalty, const std::string& mode) {
              baseline::SearchMode sm = baseline::SearchMode::automatic;
              if (mode == "exhaustive") sm = baseline::SearchMode::exhaustive;
              else if (mode == "beam") sm = baseline::SearchMode::beam;
              else if (mode != "auto") throw Error("unknown search mode '" + mode + "'");
              return baseline::fill_placeholders(model, inst, cands, none_penalty, sm);
          },
          py::arg("model"), py::arg("instance"), py::arg("candidates"),
          py::arg("none_penalty") = 0.0, py::arg("mode") = "auto");
    m.def("default_penalty_grid", &baseline::default_penalty_grid);
    m.def("tune_none_penalty",
          [](const lm::NGramModel& model, const std::vector<TaskInstance>& dev,
             const baseline::CandidateSet& cands, const SubtaskSpec& spec,
             const std::optional<std::vector<double>>& grid) {
              auto result = baseline::tune_none_penalty(
                  model, dev, cands, spec, grid ? *grid : baseline::default_penalty_grid());
              py::dict out;
              out["penalty"] = result.penalty;
              out["macro_recall"] = result.macro_recall;
              py::list points;
              for (const auto& gp : result.grid) {
                  py::dict d;
                  d["penalty"] = gp.penalty;
                  d["macro_recall"] = gp.macro_recall;
                  d["none_count"] = gp.none_count;
                  points.append(d);
              }
              out["grid"] = points;
              return out;
          },
          py::arg("model"), py::arg("dev"), py::arg("candidates"), py::arg("spec"),
          py::arg("grid") = py::none());

    m.def("expected_random_macro_recall", &eval::expected_random_macro_recall, py::arg("spec"));
    m.def("macro_recall",
          [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
             const std::vector<std::string>& classes) {
              return eval::macro_recall(eval::confusion(gold, pred, classes));
          },
          py::arg("gold"), py::arg("pred"), py::arg("classes"));
    m.def("accuracy",
          [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
             const std::vector<std::string>& classes) {
              return eval::accuracy(eval::confusion(gold, pred, classes));
          },
          py::arg("gold"), py::arg("pred"), py::arg("classes"));
    m.def("score_labels",
          [](const std::vector<std::string>& gold, const std::vector<std::string>& pred,
             const SubtaskSpec& spec) {
              auto report = eval::score_labels(gold, pred, spec);
              py::dict out;
              out["macro_recall"] = report.macro_recall;
              out["accuracy"] = report.accuracy;
              out["examples"] = report.examples;
              out["correct"] = report.correct;
              out["absent_classes"] = report.absent_classes;
              py::list rows;
              for (const auto& cm : report.per_class) {
                  py::dict d;
                  d["class"] = cm.cls;
                  d["gold"] = cm.gold_count;
                  d["pred"] = cm.pred_count;
                  d["correct"] = cm.correct;
                  d["recall"] = cm.recall;
                  d["precision"] = cm.precision_defined ? py::cast(cm.precision) : py::none();
                  d["f1"] = cm.f1;
                  rows.append(d);
              }
              out["per_class"] = rows;
              return out;
          },
          py::arg("gold"), py::arg("pred"), py::arg("spec"));

#ifdef PRONPRED_VERSION
    m.attr("__version__") = PRONPRED_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
