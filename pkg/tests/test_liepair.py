import pytest
from hypothesis import given, settings, strategies as st

from fcorr.coeffring import ParseError
from fcorr.liepair import (CORPUS, FrameNotUnimodular, NotIntegrable, load_scene,
                           scene_from_dict)
from fcorr.randgen import rand_form, rand_section, rng

from conftest import fixture_path

seeds = st.integers(0, 10 ** 6)


def test_corpus_validates(scenes):
    for name in CORPUS:
        assert scenes[name].diagnostics() == []


def test_negative_controls():
    with pytest.raises(NotIntegrable):
        load_scene(fixture_path("bad_structure.json")).validate()
    with pytest.raises(FrameNotUnimodular):
        load_scene(fixture_path("bad_det.json")).validate()
    kinds = {k for k, _ in load_scene(fixture_path("bad_bracket.json")).diagnostics()}
    assert kinds == {FrameNotUnimodular, NotIntegrable}
    with pytest.raises(ParseError):
        load_scene(fixture_path("malformed.json"))


def test_diagnostic_names_pair():
    msgs = [m for _, m in load_scene(fixture_path("bad_structure.json")).diagnostics()]
    assert any("[V1, V2]" in m for m in msgs)


def test_json_roundtrip(scenes):
    for s in scenes.values():
        assert scene_from_dict(s.to_dict()).to_json() == s.to_json()


def test_contact3_bott_and_brackets(scenes):
    s = scenes["contact3"]
    fpart, bpart = s.zz_bracket[0][1]
    assert fpart[0] == 1 and not any(bpart)


@settings(max_examples=25, deadline=None)
@given(seed=seeds)
def test_dF_squared(seed, scenes):
    r = rng(seed)
    for s in scenes.values():
        w = rand_form(r, s, r.randint(0, s.f))
        assert not s.d_F(s.d_F(w))


@settings(max_examples=15, deadline=None)
@given(seed=seeds)
def test_dB_squared(seed, scenes):
    r = rng(seed)
    for s in scenes.values():
        m, n = r.randint(0, 2), r.randint(0, 1)
        t = rand_section(r, s, m, n, r.randint(0, s.f))
        assert s.d_B(s.d_B(t)) == 0


def test_dB_leibniz_on_functions(scenes):
    s = scenes["tilt3"]
    r = rng(3)
    f, g = rand_form(r, s, 0), rand_form(r, s, 0)
    assert s.d_F(f * g) == s.d_F(f) * g + f * s.d_F(g)
