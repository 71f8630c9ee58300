"""Initial-state specifications: named presets and explicit term lists.

A state is a sum of terms, each "coeff * |atom1 atom2> (x) |photons>",
all sharing one total excitation number (1 or 2). The text syntax used
in config files is

    terms = 0.7071 * e g @ 0l:1 ; 0.7071 * g e @ 0r:1

where "@ mode:count ..." lists photon occupations and a mode is written
as the rung index followed by r/l (e.g. "0r", "-2l").
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .cavity import DIR_LEFT, DIR_RIGHT, ModeId


class StateSpecError(ValueError):
    """Malformed or physically inconsistent initial-state specification."""


@dataclass(frozen=True)
class StateTerm:
    coeff: complex
    atom1: str  # 'e' or 'g'
    atom2: str
    photons: tuple[tuple[ModeId, int], ...] = ()

    def __post_init__(self):
        if self.atom1 not in ("e", "g") or self.atom2 not in ("e", "g"):
            raise StateSpecError(f"atom states must be 'e' or 'g', got {self.atom1!r}, {self.atom2!r}")
        seen = set()
        for mode, count in self.photons:
            if count < 1:
                raise StateSpecError(f"photon count must be >= 1, got {count} in mode {mode.label}")
            if mode in seen:
                raise StateSpecError(f"mode {mode.label} listed twice in one term")
            seen.add(mode)

    @property
    def excitation(self) -> int:
        return (self.atom1 == "e") + (self.atom2 == "e") + sum(c for _, c in self.photons)


@dataclass(frozen=True)
class InitialStateSpec:
    """Either a named preset (possibly parameterised) or explicit terms."""

    preset: str | None = None
    terms: tuple[StateTerm, ...] = field(default_factory=tuple)

    def resolve_terms(self) -> tuple[StateTerm, ...]:
        terms = _preset_terms(self.preset) if self.preset else self.terms
        if not terms:
            raise StateSpecError("initial state has no terms")
        excs = {t.excitation for t in terms}
        if len(excs) != 1:
            raise StateSpecError(f"terms mix excitation numbers {sorted(excs)}")
        exc = excs.pop()
        if exc not in (1, 2):
            raise StateSpecError(f"total excitation number must be 1 or 2, got {exc}")
        return terms

    @property
    def excitation(self) -> int:
        return self.resolve_terms()[0].excitation

    def text(self) -> str:
        if self.preset:
            return self.preset
        return " ; ".join(_term_text(t) for t in self.terms)


_MODE_RE = re.compile(r"^([+-]?\d+)([rl])$")


def parse_mode(token: str) -> ModeId:
    match = _MODE_RE.match(token.strip())
    if not match:
        raise StateSpecError(f"cannot parse mode {token!r} (expected e.g. '0r', '-2l')")
    return ModeId(int(match.group(1)), DIR_RIGHT if match.group(2) == "r" else DIR_LEFT)


def _term_text(term: StateTerm) -> str:
    coeff = term.coeff
    cs = f"{coeff.real:.12g}" if coeff.imag == 0 else f"{coeff.real:.12g}{coeff.imag:+.12g}j"
    out = f"{cs} * {term.atom1} {term.atom2}"
    if term.photons:
        out += " @ " + " ".join(f"{m.label}:{c}" for m, c in term.photons)
    return out


def parse_terms(text: str) -> tuple[StateTerm, ...]:
    """Parse the 'coeff * a1 a2 @ mode:count ...' term-list syntax."""
    terms = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "*" in chunk:
            coeff_text, rest = chunk.split("*", 1)
            try:
                coeff = complex(coeff_text.strip().replace(" ", ""))
            except ValueError as exc:
                raise StateSpecError(f"bad coefficient {coeff_text.strip()!r}") from exc
        else:
            coeff, rest = 1.0 + 0.0j, chunk
        if "@" in rest:
            atoms_text, photon_text = rest.split("@", 1)
        else:
            atoms_text, photon_text = rest, ""
        atom_tokens = atoms_text.split()
        if len(atom_tokens) != 2:
            raise StateSpecError(f"expected two atom states in {chunk!r}")
        photons = []
        for ptok in photon_text.split():
            if ":" in ptok:
                mode_text, count_text = ptok.rsplit(":", 1)
                try:
                    count = int(count_text)
                except ValueError as exc:
                    raise StateSpecError(f"bad photon count in {ptok!r}") from exc
            else:
                mode_text, count = ptok, 1
            photons.append((parse_mode(mode_text), count))
        terms.append(StateTerm(complex(coeff), atom_tokens[0], atom_tokens[1], tuple(photons)))
    if not terms:
        raise StateSpecError(f"no terms found in {text!r}")
    return tuple(terms)


_MODE_0R = ModeId(0, DIR_RIGHT)
_MODE_0L = ModeId(0, DIR_LEFT)

#: Named presets and their excitation sector.
PRESET_SECTORS = {
    "e1g2": 1, "symmetric": 1, "antisymmetric": 1, "photon": 1,
    "ee": 2, "eq37": 2, "gg2r": 2, "oneone": 2, "nOOn": 2,
    "bell_x_photon": 2, "corr": 2, "mix": 2,
}

_PRESET_RE = re.compile(r"^([A-Za-z0-9_]+)(?:\(([^)]*)\))?$")


def _preset_terms(name: str) -> tuple[StateTerm, ...]:
    match = _PRESET_RE.match(name.strip())
    if not match:
        raise StateSpecError(f"cannot parse preset name {name!r}")
    base, args = match.group(1), match.group(2)

    if base == "e1g2":
        return (StateTerm(1.0, "e", "g"),)
    if base == "symmetric":
        return (StateTerm(1.0, "e", "g"), StateTerm(1.0, "g", "e"))
    if base == "antisymmetric":
        return (StateTerm(1.0, "e", "g"), StateTerm(-1.0, "g", "e"))
    if base == "photon":
        if not args:
            raise StateSpecError("preset photon(m,dir) needs arguments, e.g. photon(0,r)")
        parts = [p.strip() for p in args.split(",")]
        if len(parts) == 2:
            mode = parse_mode(parts[0] + parts[1])
        else:
            mode = parse_mode(parts[0])
        return (StateTerm(1.0, "g", "g", ((mode, 1),)),)
    if base == "ee":
        return (StateTerm(1.0, "e", "e"),)
    if base == "eq37":
        return (
            StateTerm(1.0, "e", "g", ((_MODE_0L, 1),)),
            StateTerm(1.0, "e", "g", ((_MODE_0R, 1),)),
        )
    if base == "gg2r":
        return (StateTerm(1.0, "g", "g", ((_MODE_0R, 2),)),)
    if base == "oneone":
        return (StateTerm(1.0, "g", "g", ((_MODE_0R, 1), (_MODE_0L, 1))),)
    if base == "nOOn":
        return (
            StateTerm(1.0, "g", "g", ((_MODE_0L, 2),)),
            StateTerm(1.0, "g", "g", ((_MODE_0R, 2),)),
        )
    if base == "bell_x_photon":
        return (
            StateTerm(1.0, "e", "g", ((_MODE_0L, 1),)),
            StateTerm(1.0, "g", "e", ((_MODE_0L, 1),)),
        )
    if base == "corr":
        return (
            StateTerm(1.0, "e", "g", ((_MODE_0L, 1),)),
            StateTerm(1.0, "g", "e", ((_MODE_0R, 1),)),
        )
    if base == "mix":
        if not args:
            raise StateSpecError("preset mix(p) needs the b12 weight p, e.g. mix(0.3)")
        try:
            p = float(args)
        except ValueError as exc:
            raise StateSpecError(f"bad mix() argument {args!r}") from exc
        if not 0.0 <= p <= 1.0:
            raise StateSpecError(f"mix(p) needs 0 <= p <= 1, got {p}")
        return (
            StateTerm(math.sqrt(p), "e", "e"),
            StateTerm(math.sqrt(1.0 - p), "e", "g", ((_MODE_0L, 1),)),
        )
    raise StateSpecError(f"unknown initial-state preset {name!r}")


def spec_from_config_text(preset: str | None, terms_text: str | None) -> InitialStateSpec:
    """Build the spec from the [initial] section: terms win over preset."""
    if terms_text:
        return InitialStateSpec(terms=parse_terms(terms_text))
    if preset:
        spec = InitialStateSpec(preset=preset.strip())
        spec.resolve_terms()  # validate eagerly
        return spec
    raise StateSpecError("initial state needs either a preset or a terms list")
