"""End-to-end smoke checks for the python bindings."""

import math

import pytest

import pronpred

CANONICAL_LINE = (
    "ce OTHER\t"
    "ce|PRON qui|PRON\t"
    "It 's an idiotic debate . It has to stop .\t"
    "REPLACE_0 être|VER un|DET débat|NOM idiot|ADJ REPLACE_6 devoir|VER stopper|VER .|.\t"
    "0-0 1-1 2-2 3-4 4-3 6-5 7-6 8-6 9-7 10-8"
)


@pytest.fixture(scope="module")
def spec():
    return pronpred.builtin_spec("en-fr")


def test_version_and_specs(spec):
    assert pronpred.__version__ == "1.0.0"
    assert spec.direction == "en-fr"
    assert spec.classes[0] == "ce"
    assert spec.classes[-1] == "OTHER"
    assert len(spec.classes) == 8
    assert spec.is_source_pronoun("It")
    assert not spec.is_source_pronoun("dog")
    assert spec.class_of("Elle") == "elle"
    assert spec.class_of("banane") == "OTHER"
    sizes = {
        "en-fr": 8,
        "fr-en": 8,
        "en-de": 5,
        "de-en": 9,
    }
    for direction, n in sizes.items():
        assert len(pronpred.builtin_spec(direction).classes) == n


def test_instance_round_trip(spec):
    inst = pronpred.parse_instance_line(CANONICAL_LINE, spec)
    assert inst.labels == ["ce", "OTHER"]
    assert inst.placeholder_count() == 2
    assert inst.placeholder_positions() == [0, 5]
    assert inst.source[0] == "It"
    assert (0, 0) in inst.alignment
    assert pronpred.serialize_instance(inst) == CANONICAL_LINE
    assert pronpred.validate_instance(inst, spec) == []

    restored = [tok.lemma for tok in pronpred.restore_target(inst)]
    assert restored[0] == "ce"
    assert len(restored) == 9

    with pytest.raises(ValueError):
        pronpred.parse_instance_line("not a real line", spec)


def test_instance_files(tmp_path, spec):
    inst = pronpred.parse_instance_line(CANONICAL_LINE, spec)
    path = str(tmp_path / "instances.tsv")
    pronpred.write_instance_file(path, [inst, inst])
    back = pronpred.read_instance_file(path, spec)
    assert len(back) == 2
    assert back[0] == inst


def test_symmetrize_and_alignment_eval():
    fwd = [(0, 0), (1, 1)]
    bwd = [(0, 0), (2, 2)]
    assert pronpred.symmetrize(fwd, bwd, "intersection", 3, 3) == [(0, 0)]
    union = pronpred.symmetrize(fwd, bwd, "union", 3, 3)
    assert set(union) == {(0, 0), (1, 1), (2, 2)}
    grown = pronpred.symmetrize(fwd, bwd, "grow-diag-final", 3, 3)
    assert set(grown).issuperset({(0, 0)})
    with pytest.raises(RuntimeError):
        pronpred.symmetrize(fwd, bwd, "nonsense", 3, 3)

    scores = pronpred.evaluate_alignment(fwd, fwd)
    assert scores["all"]["precision"] == 1.0
    assert scores["all"]["recall"] == 1.0
    assert "pronouns" not in scores

    scores = pronpred.evaluate_alignment(fwd, bwd, pronoun_sources={0})
    assert scores["all"]["precision"] == 0.5
    assert scores["pronouns"]["precision"] == 1.0


def test_extraction(spec):
    seg = pronpred.AnnotatedSegment()
    seg.source = ["it", "be", "good", "."]
    seg.dep_labels = ["SBJ", "ROOT", "PRD", "P"]
    seg.target = [
        pronpred.TaggedToken("ce", "PRON"),
        pronpred.TaggedToken("être", "VER"),
        pronpred.TaggedToken("bon", "ADJ"),
        pronpred.TaggedToken(".", "SENT"),
    ]
    seg.alignment = [(0, 0), (1, 1), (2, 2), (3, 3)]

    assert pronpred.find_source_pronouns(seg.source, spec) == [0]
    assert pronpred.map_target_class([pronpred.TaggedToken("ce", "PRON")], spec) == ("ce", 0)

    instances = pronpred.extract_examples([seg], spec)
    assert len(instances) == 1
    assert instances[0].labels == ["ce"]
    assert pronpred.validate_instance(instances[0], spec) == []
    assert pronpred.class_frequency_table(instances) == {"ce": 1}

    with pytest.raises(IndexError):
        pronpred.insert_placeholder_unaligned(seg, 99)


def test_language_model(tmp_path):
    corpus = [["ce", "être", "bon", "."]] * 5 + [["il", "devoir", "partir", "."]] * 2
    model = pronpred.NGramModel.train(corpus, order=2, unk_threshold=0)
    assert model.order == 2
    vocab = model.prediction_vocabulary()
    assert vocab[0] == "</s>"
    assert vocab[1] == "<unk>"
    assert model.vocab_size == len(vocab)
    assert model.raw_count(["ce"]) == 5

    total = sum(model.cond_prob(w, ["être"]) for w in vocab)
    assert math.isclose(total, 1.0, abs_tol=1e-6)
    assert model.cond_prob("être", ["ce"]) > model.cond_prob("partir", ["ce"])
    assert model.sequence_logprob(["ce", "être", "bon", "."]) < 0.0

    path = str(tmp_path / "toy.lm")
    model.save(path)
    loaded = pronpred.NGramModel.load(path)
    assert loaded.order == model.order
    assert loaded.smoothing == model.smoothing
    assert loaded.sequence_logprob(["ce", "être"]) == model.sequence_logprob(["ce", "être"])

    with pytest.raises(ValueError):
        pronpred.NGramModel.train([], order=2)


def test_baseline_pipeline(spec):
    seg = pronpred.AnnotatedSegment()
    seg.source = ["it", "be", "good", "."]
    seg.dep_labels = ["SBJ", "ROOT", "PRD", "P"]
    seg.target = [
        pronpred.TaggedToken("ce", "PRON"),
        pronpred.TaggedToken("être", "VER"),
        pronpred.TaggedToken("bon", "ADJ"),
        pronpred.TaggedToken(".", "SENT"),
    ]
    seg.alignment = [(0, 0), (1, 1), (2, 2), (3, 3)]
    instances = pronpred.extract_examples([seg], spec)

    corpus = [["ce", "être", "bon", "."]] * 6 + [["il", "ronfler", "fort", "."]] * 3
    model = pronpred.NGramModel.train(corpus, order=3, unk_threshold=0)

    cands = pronpred.build_candidate_set(instances, spec)
    assert [c.cls for c in cands.pronoun_fillers] == [
        "ce", "elle", "elles", "il", "ils", "cela", "on",
    ]
    assert cands.include_none
    assert cands.all()[-1].is_none()

    round_trip = pronpred.candidate_set_from_json(pronpred.candidate_set_to_json(cands))
    assert [c.cls for c in round_trip.pronoun_fillers] == [c.cls for c in cands.pronoun_fillers]

    predictions = pronpred.fill_placeholders(model, instances[0], cands, none_penalty=-2.0)
    assert len(predictions) == 1
    assert predictions[0].cls == "ce"
    assert predictions[0].filler == "ce"
    assert not predictions[0].none

    tuned = pronpred.tune_none_penalty(model, instances, cands, spec)
    assert tuned["penalty"] in pronpred.default_penalty_grid()
    assert len(tuned["grid"]) == len(pronpred.default_penalty_grid())
    assert tuned["macro_recall"] == 100.0


def test_scoring(spec):
    en_de = pronpred.builtin_spec("en-de")
    assert pronpred.expected_random_macro_recall(spec) == 12.50
    assert pronpred.expected_random_macro_recall(en_de) == 20.00
    assert pronpred.expected_random_macro_recall(pronpred.builtin_spec("de-en")) == 11.11

    gold = ["er", "er", "sie", "es"]
    pred = ["er", "sie", "sie", "es"]
    assert pronpred.macro_recall(gold, pred, list(en_de.classes)) == 83.33
    assert pronpred.accuracy(gold, pred, list(en_de.classes)) == 75.00

    report = pronpred.score_labels(gold, pred, en_de)
    assert report["macro_recall"] == 83.33
    assert report["accuracy"] == 75.00
    assert report["examples"] == 4
    assert report["correct"] == 3
    assert report["absent_classes"] == ["man", "OTHER"]
    rows = {row["class"]: row for row in report["per_class"]}
    assert rows["er"]["recall"] == 50.0
    assert rows["er"]["precision"] == 100.0
    assert rows["man"]["precision"] is None

    with pytest.raises(ValueError):
        pronpred.macro_recall([], [], list(en_de.classes))
