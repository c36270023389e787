"""Concrete algebras, automorphisms and twisted modules, plus model files.

Shipped models: the free fermion with its parity automorphism and its
zero-mode-carrying twisted module; the rank-1 Heisenberg algebra with the
sign flip and its half-integer-moded twisted module; the rank-3 Heisenberg
algebra with a unipotent Gram isometry (used for Jordan/derivation checks
and, viewed as a module over itself, for the log-decomposition checks).

Module basis keys are integer tuples: the fermion-type twisted module uses
(sector, occ) with occ strictly decreasing positive ints (psi_{-k}); the
boson-type one uses a weakly decreasing tuple of odd ints o = 2k standing
for h(-k), k in Z + 1/2.
"""

from __future__ import annotations

import configparser
import importlib.resources
from fractions import Fraction

from .automorphism import Automorphism, orthogonal_automorphism, \
    parity_automorphism
from .scalars import (HALF_SQRT2, CyclotomicLevelError, Scalar, Vec,
                      cyclotomic_level)
from .twisted import TwistedModule, UnipotentViewModule
from .vosa import FermionAlgebra, HeisenbergAlgebra

F0 = Fraction(0)
F1 = Fraction(1)
FH = Fraction(1, 2)


def build_free_fermion(fault=None) -> FermionAlgebra:
    if cyclotomic_level() < 8:
        raise CyclotomicLevelError("free fermion models need level >= 8 for 2^(-1/2)")
    return FermionAlgebra(fault=fault)


def build_heisenberg(gram, names=None, fault=None) -> HeisenbergAlgebra:
    return HeisenbergAlgebra(gram, names=names, fault=fault)


# ---------------------------------------------------------------------------
# fermion-type twisted module (integer-moded, two-dimensional vacuum pair)
# ---------------------------------------------------------------------------

def _fermion_twisted_basis(max_deg, order="weight-lex"):
    def occs(start, budget):
        yield ()
        k = min(start, budget)
        while k >= 1:
            for rest in occs(k - 1, budget - k):
                yield (k,) + rest
            k -= 1
    keys = [(s, occ) for occ in occs(int(max_deg), int(max_deg))
            for s in (0, 1)]
    if order == "weight-lex":
        keys.sort(key=lambda k: (sum(k[1]), k))
    elif order == "weight-revlex":
        keys.sort(key=lambda k: (sum(k[1]), tuple(reversed(k[1])), k[0]))
    else:
        raise ValueError("unknown basis order %r" % order)
    return keys


def build_ramond_module(fermion: FermionAlgebra, parity: Automorphism,
                        zero_mode_sign: int = 1, fault=None,
                        crosscheck=True) -> TwistedModule:
    """Integer-moded twisted fermion module with psi_0^2 = 1/2 on a parity pair."""
    zscale = HALF_SQRT2 * zero_mode_sign
    if fault == "zero-mode-scale":
        zscale = HALF_SQRT2 * 2

    def gen_action(gidx, n, key) -> Vec:
        p = Fraction(n) + FH
        if p.denominator != 1:
            return Vec.zero()
        p = int(p)
        sector, occ = key
        sgn = -1 if fault == "twisted-seed-sign" and p > 0 else 1
        if p > 0:
            if p not in occ:
                return Vec.zero()
            pos = occ.index(p)
            return Vec.basis((sector, occ[:pos] + occ[pos + 1:])).scale(
                Scalar.rational((-1) ** pos * sgn))
        if p < 0:
            c = -p
            if c in occ:
                return Vec.zero()
            pos = sum(1 for f in occ if f > c)
            return Vec.basis((sector, occ[:pos] + (c,) + occ[pos:])).scale(
                Scalar.rational((-1) ** pos))
        # zero mode: anticommute through occ, then flip the vacuum pair
        z = zscale
        if fault == "zero-mode-sector-sign" and sector == 1:
            z = -zscale   # breaks psi_0^2 = 1/2
        flip = Vec.basis((1 - sector, occ)).scale(z)
        return flip.scale(Fraction((-1) ** len(occ)))

    deg = lambda key: sum(key[1])
    flip = 1 if fault == "vacuum-parity" else 0
    par = lambda key: (key[0] + len(key[1]) + flip) % 2
    gsc = lambda key: Scalar.rational((-1) ** par(key))
    return TwistedModule("ramond", fermion, parity, gen_action,
                         _fermion_twisted_basis, deg, par, gsc,
                         crosscheck=crosscheck)


# ---------------------------------------------------------------------------
# boson-type twisted module (half-integer-moded, one-dimensional vacuum)
# ---------------------------------------------------------------------------

def _boson_twisted_basis(max_deg, order="weight-lex"):
    top = int(2 * Fraction(max_deg))

    def occs(start, budget):
        yield ()
        o = min(start, budget)
        if o % 2 == 0:
            o -= 1
        while o >= 1:
            for rest in occs(o, budget - o):
                yield (o,) + rest
            o -= 2
    keys = list(occs(top, top))
    if order == "weight-lex":
        keys.sort(key=lambda k: (sum(k), k))
    elif order == "weight-revlex":
        keys.sort(key=lambda k: (sum(k), tuple(reversed(k))))
    else:
        raise ValueError("unknown basis order %r" % order)
    return keys


def build_z2_twisted_boson(boson: HeisenbergAlgebra, minus1: Automorphism,
                           fault=None, crosscheck=True) -> TwistedModule:
    """Half-integer-moded twisted module of the rank-1 Heisenberg algebra."""
    if len(boson.gens) != 1:
        raise ValueError("half-integer moding is built for rank 1")

    def gen_action(gidx, n, key) -> Vec:
        o = 2 * Fraction(n)
        if o.denominator != 1:
            return Vec.zero()
        o = int(o)
        if o % 2 == 0:
            return Vec.zero()
        if o < 0:
            c = -o
            pos = sum(1 for f in key if f > c)
            return Vec.basis(key[:pos] + (c,) + key[pos:])
        k = Fraction(o, 2)
        if fault == "twisted-bracket-sign":
            k = -k
        count = key.count(o)
        if not count:
            return Vec.zero()
        pos = key.index(o)
        return Vec.basis(key[:pos] + key[pos + 1:]).scale(
            Scalar.rational(k * count))

    deg = lambda key: Fraction(sum(key), 2)
    par = lambda key: 0
    gsc = lambda key: Scalar.rational((-1) ** len(key))
    return TwistedModule("z2boson", boson, minus1, gen_action,
                         _boson_twisted_basis, deg, par, gsc,
                         crosscheck=crosscheck)


def build_unipotent_toy(heis3: HeisenbergAlgebra, unip: Automorphism):
    """The rank-3 algebra viewed as a module twisted by its unipotent isometry."""
    return UnipotentViewModule("heis3-unipotent-view", heis3, unip)


# ---------------------------------------------------------------------------
# model files
# ---------------------------------------------------------------------------

GRAM3 = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
UNIPOTENT3 = [[1, Fraction(-1, 2), 1], [0, 1, 0], [0, -1, 1]]


def _parse_matrix(text):
    return [[Fraction(x.strip()) for x in row.split(",")]
            for row in text.split(";")]


class ModelBundle:
    """Everything one model file defines: algebra, automorphisms, twisted modules."""

    def __init__(self, model_id, algebra, automorphisms, twisted):
        self.id = model_id
        self.algebra = algebra
        self.automorphisms = automorphisms
        self.twisted = twisted


def load_model_file(path_or_text, fault=None) -> ModelBundle:
    cp = configparser.ConfigParser()
    if "\n" in str(path_or_text):
        cp.read_string(path_or_text)
    else:
        with open(path_or_text) as fh:
            cp.read_string(fh.read())
    m = cp["model"]
    level = int(m.get("level", cyclotomic_level()))
    if level != cyclotomic_level():
        raise CyclotomicLevelError(
            "model requires cyclotomic level %d but the engine is configured "
            "at %d" % (level, cyclotomic_level()))
    kind = m["kind"]
    if kind == "fermion":
        algebra = build_free_fermion(fault=fault)
    elif kind == "heisenberg":
        gram = _parse_matrix(m["gram"])
        names = [s.strip() for s in m["names"].split(",")] if "names" in m else None
        algebra = build_heisenberg(gram, names=names, fault=fault)
    else:
        raise ValueError("unknown algebra kind %r" % kind)

    autos = {}
    twisted = {}
    for section in cp.sections():
        if section.startswith("automorphism "):
            name = section.split(" ", 1)[1]
            body = cp[section]
            if body.get("kind") == "parity":
                autos[name] = parity_automorphism(algebra)
                autos[name].name = name
            else:
                autos[name] = orthogonal_automorphism(
                    algebra, _parse_matrix(body["matrix"]), name=name)
    for section in cp.sections():
        if section.startswith("twisted "):
            name = section.split(" ", 1)[1]
            body = cp[section]
            g = autos[body["automorphism"]]
            cons = body["construction"]
            if cons == "clifford-zero-mode":
                mod = build_ramond_module(
                    algebra, g, zero_mode_sign=int(body.get("zero-mode-sign", 1)),
                    fault=fault)
            elif cons == "half-integer-modes":
                mod = build_z2_twisted_boson(algebra, g, fault=fault)
            elif cons == "unipotent-view":
                mod = build_unipotent_toy(algebra, g)
            else:
                raise ValueError("unknown twisted construction %r" % cons)
            mod.name = name
            twisted[name] = mod
    return ModelBundle(m["id"], algebra, autos, twisted)


def shipped_model_text(filename: str) -> str:
    ref = importlib.resources.files("vertextwist") / "modelfiles" / filename
    return ref.read_text()


SHIPPED_FILES = ("fermion.model", "boson1.model", "heis3-unipotent.model")


class Registry:
    """Lazily built id -> object map over the shipped model files."""

    def __init__(self, fault=None):
        self.fault = fault
        self._bundles = None

    def bundles(self):
        if self._bundles is None:
            self._bundles = [load_model_file(shipped_model_text(f), self.fault)
                             for f in SHIPPED_FILES]
        return self._bundles

    def algebra(self, model_id):
        for b in self.bundles():
            if b.id == model_id:
                return b
        raise KeyError("unknown model id %r" % model_id)

    def twisted(self, twisted_id):
        for b in self.bundles():
            if twisted_id in b.twisted:
                return b.twisted[twisted_id]
        raise KeyError("unknown twisted module id %r" % twisted_id)

    def resolve(self, any_id):
        """Return ('algebra', bundle) or ('twisted', module) for an id."""
        for b in self.bundles():
            if b.id == any_id:
                return "algebra", b
        for b in self.bundles():
            if any_id in b.twisted:
                return "twisted", b.twisted[any_id]
        raise KeyError("unknown model id %r" % any_id)
