import numpy as np
import pytest

from ringcav.cavity import DIR_LEFT, DIR_RIGHT
from ringcav.statespec import (
    InitialStateSpec,
    StateSpecError,
    StateTerm,
    parse_mode,
    parse_terms,
    spec_from_config_text,
)


def test_parse_mode():
    assert parse_mode("0r").m == 0 and parse_mode("0r").dir == DIR_RIGHT
    assert parse_mode("-3l").m == -3 and parse_mode("-3l").dir == DIR_LEFT
    assert parse_mode("+2r").m == 2
    with pytest.raises(StateSpecError):
        parse_mode("abc")
    with pytest.raises(StateSpecError):
        parse_mode("2x")


def test_parse_terms_basic():
    terms = parse_terms("0.5 * e g ; 0.5+0.5j * g e @ 0l:1 -1r:1")
    assert len(terms) == 2
    assert terms[0].coeff == 0.5 and terms[0].atom1 == "e"
    assert terms[1].coeff == 0.5 + 0.5j
    assert terms[1].photons[0][0].label == "0l"
    assert terms[1].photons[1][0].m == -1


def test_parse_terms_default_coeff_and_count():
    terms = parse_terms("e g @ 0r")
    assert terms[0].coeff == 1.0
    assert terms[0].photons == ((parse_mode("0r"), 1),)


def test_excitation_counting():
    assert StateTerm(1.0, "e", "g").excitation == 1
    assert StateTerm(1.0, "e", "e").excitation == 2
    assert StateTerm(1.0, "g", "g", ((parse_mode("0r"), 2),)).excitation == 2


def test_mixed_excitation_rejected():
    spec = InitialStateSpec(terms=parse_terms("e g ; e e"))
    with pytest.raises(StateSpecError, match="mix excitation"):
        spec.resolve_terms()


def test_duplicate_mode_in_term_rejected():
    with pytest.raises(StateSpecError, match="twice"):
        StateTerm(1.0, "g", "g", ((parse_mode("0r"), 1), (parse_mode("0r"), 1)))


@pytest.mark.parametrize("name,n_terms,excitation", [
    ("e1g2", 1, 1), ("symmetric", 2, 1), ("antisymmetric", 2, 1),
    ("photon(0,r)", 1, 1), ("ee", 1, 2), ("eq37", 2, 2), ("gg2r", 1, 2),
    ("oneone", 1, 2), ("nOOn", 2, 2), ("bell_x_photon", 2, 2),
    ("corr", 2, 2), ("mix(0.3)", 2, 2),
])
def test_presets_resolve(name, n_terms, excitation):
    spec = InitialStateSpec(preset=name)
    terms = spec.resolve_terms()
    assert len(terms) == n_terms
    assert terms[0].excitation == excitation


def test_unknown_preset():
    with pytest.raises(StateSpecError, match="unknown"):
        InitialStateSpec(preset="nope").resolve_terms()


def test_mix_weights():
    terms = InitialStateSpec(preset="mix(0.25)").resolve_terms()
    assert terms[0].coeff == pytest.approx(0.5)
    assert terms[1].coeff == pytest.approx(np.sqrt(0.75))
    with pytest.raises(StateSpecError):
        InitialStateSpec(preset="mix(1.5)").resolve_terms()


def test_spec_from_config_text_prefers_terms():
    spec = spec_from_config_text("e1g2", "e g ; g e")
    assert spec.preset is None and len(spec.terms) == 2
    spec = spec_from_config_text("symmetric", None)
    assert spec.preset == "symmetric"
    with pytest.raises(StateSpecError):
        spec_from_config_text(None, None)


def test_text_round_trip():
    spec = InitialStateSpec(terms=parse_terms("0.6 * e g @ 0l:1 ; 0.8 * g e @ 1r:1"))
    again = parse_terms(spec.text())
    assert again == spec.terms
