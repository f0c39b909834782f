import json

import pytest

from momenta.exactalg import rat
from momenta.model import (ModelError, ModelSpec, PotentialTerm, SymmetryRule,
                           load_preset, parse_model, preset_path)
from momenta.words import Word, canonicalize

PRESETS = ["gaussian1", "quartic", "ggg", "gmgg", "ggmg", "mggg", "3matrix"]


def coeff_map(model):
    return {str(t.word): t.coeff for t in model.terms}


def test_presets_load_and_validate(preset):
    for name in PRESETS:
        model = preset(name)
        assert model.name == name
        assert model.sha256() == load_preset(name).sha256()


def test_preset_potentials(preset):
    assert coeff_map(preset("gaussian1")) == {}
    assert coeff_map(preset("quartic")) == {"AAAA": rat(1, 4)}
    assert coeff_map(preset("ggg")) == {
        "AAAA": rat(1, 4), "BBBB": rat(1, 4), "ABAB": rat(1, 2), "AABB": rat(1)}
    assert coeff_map(preset("gmgg")) == {
        "AAAA": rat(1, 4), "BBBB": rat(1, 4), "ABAB": rat(-1, 2),
        "AABB": rat(1)}
    assert coeff_map(preset("ggmg")) == {
        "AAAA": rat(1, 4), "BBBB": rat(1, 4), "ABAB": rat(1, 2),
        "AABB": rat(-1)}
    assert coeff_map(preset("mggg")) == {
        "AAAA": rat(-1, 4), "BBBB": rat(-1, 4), "ABAB": rat(1, 2),
        "AABB": rat(1)}
    assert coeff_map(preset("3matrix")) == {
        "AAA": rat(1, 3), "BBB": rat(1, 3), "CCC": rat(1, 3),
        "ABC": rat(1), "ACB": rat(1)}


def test_preset_generators(preset):
    assert [str(g) for g in preset("quartic").generators] == ["AA"]
    assert [str(g) for g in preset("ggg").generators] == ["AA"]
    assert [str(g) for g in preset("ggmg").generators] == ["AA", "AAAA"]
    assert [str(g) for g in preset("3matrix").generators] == ["A", "AB"]
    assert preset("ggg").generator_names() == ("m2",)
    assert preset("ggmg").generator_names() == ("m2", "m4")
    assert preset("3matrix").generator_names() == ("m1", "m2")


def test_symmetry_group_sizes(preset):
    # Swap plus the two sign flips close into a group of order 8.
    assert len(preset("ggg").group()) == 8
    # Cyclic rotation plus a transposition generate all relabelings.
    assert len(preset("3matrix").group()) == 6
    assert len(preset("quartic").group()) == 2


def test_orbit_representative_two_matrix(preset):
    model = preset("ggg")
    rep, sign, zero = model.orbit_representative(Word.parse("AB"))
    assert zero
    rep, sign, zero = model.orbit_representative(Word.parse("BBBB"))
    assert (str(rep), sign, zero) == ("AAAA", 1, False)
    rep, sign, zero = model.orbit_representative(Word.parse("BAAB"))
    assert (str(rep), sign, zero) == ("AABB", 1, False)
    rep, sign, zero = model.orbit_representative(Word.parse("AAB"))
    assert zero


def test_orbit_representative_three_matrix(preset):
    model = preset("3matrix")
    for text, want in [("B", "A"), ("BC", "AB"), ("BBC", "AAB"),
                       ("ACB", "ABC"), ("CAC", "AAB")]:
        rep, sign, zero = model.orbit_representative(Word.parse(text))
        assert (str(rep), sign, zero) == (want, 1, False), text
    # ABC and ACB are distinct cyclic classes joined by a transposition.
    assert canonicalize(Word.parse("ACB")) != canonicalize(Word.parse("ABC"))


def test_symmetry_validation_rejects_bad_rule():
    terms = [PotentialTerm(Word.parse("AAAA"), rat(1, 4)),
             PotentialTerm(Word.parse("ABAB"), rat(1, 2))]
    rule = SymmetryRule("swap", perm=[1, 0])
    with pytest.raises(ModelError):
        # BBBB is absent, so the swap is not a potential automorphism.
        ModelSpec("bad", 2, terms, [Word.parse("AA")], [rule])


def test_parse_model_errors():
    with pytest.raises(ModelError):
        parse_model("not json {")
    with pytest.raises(ModelError):
        parse_model(json.dumps({"name": "x", "matrices": 2, "terms": [
            {"word": "ABC", "coeff": "1"}], "generators": ["AA"],
            "symmetries": []}))
    with pytest.raises(ModelError):
        parse_model(json.dumps({"name": "x", "matrices": 2, "terms": [
            {"word": "AAAA", "coeff": "1"}, {"word": "AAAA", "coeff": "2"}],
            "generators": ["AA"], "symmetries": []}))
    with pytest.raises(ModelError):
        parse_model(json.dumps({"name": "x", "matrices": 2, "terms": [],
                                "generators": [""], "symmetries": []}))


def test_sha256_tracks_content(preset):
    a = preset("ggg").sha256()
    doc = preset("ggg").to_json()
    for term in doc["terms"]:
        if term["coeff"] == "1/4":
            term["coeff"] = "1/3"
    b = parse_model(json.dumps(doc)).sha256()
    assert a != b
    assert len(a) == 64


def test_preset_path_exists():
    for name in PRESETS:
        assert preset_path(name).endswith("%s.json" % name)


def test_to_json_round_trip(preset):
    for name in PRESETS:
        model = preset(name)
        again = parse_model(json.dumps(model.to_json()))
        assert again.sha256() == model.sha256()
