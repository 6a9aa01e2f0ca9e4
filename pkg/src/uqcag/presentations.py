"""Chevalley and creation/annihilation (CAG) presentations of sl(n+1|m).

Deformed presentations are emitted in rational form: the Cartan part is
carried by group-like generators k_i, kbar_i (Chevalley) or L_i, Lbar_i
(CAG) together with inverse and commutation relations, never by exponents.
Classical presentations use h_i and the plain hatted generators, which share
the e/f/ap/am symbols with the deformed ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

from .scalar import ONE, Q, QBAR, Scalar, qpow
from .superfree import Element, GeneratorSymbol, br, symbol

__all__ = [
    "AlgebraSpec",
    "Relation",
    "Presentation",
    "Root",
    "Gens",
    "theta",
    "theta_pair",
    "q_index",
    "cartan_matrix",
    "build_presentation",
    "cag_from_chevalley",
    "H_from_chevalley",
    "L_from_chevalley",
    "chevalley_from_cag",
    "triple_relations",
    "gl_relations",
    "cag_substitution",
    "chevalley_substitution",
    "QDIFF_INV",
]

QDIFF_INV = (Q - QBAR).inverse()


@dataclass(frozen=True)
class AlgebraSpec:
    n: int
    m: int
    deformed: bool = True

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("n and m must be non-negative")
        if self.n + self.m < 1:
            raise ValueError("unsupported spec: n + m must be at least 1")
        if self.n + self.m > 100:
            raise ValueError("rank too large")

    @property
    def rank(self) -> int:
        return self.n + self.m

    @property
    def indices(self) -> range:
        return range(1, self.rank + 1)

    @property
    def odd_node(self) -> int | None:
        """Index of the odd simple root, n+1, when m >= 1."""
        return self.n + 1 if self.m >= 1 else None

    def classical(self) -> "AlgebraSpec":
        return AlgebraSpec(self.n, self.m, False)

    def quantum(self) -> "AlgebraSpec":
        return AlgebraSpec(self.n, self.m, True)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "deformed": self.deformed}


def theta(i: int, spec: AlgebraSpec) -> int:
    if not 0 <= i <= spec.rank:
        raise IndexError(f"index {i} outside [0; {spec.rank}]")
    return 0 if i <= spec.n else 1


def theta_pair(i: int, j: int, spec: AlgebraSpec) -> int:
    return (theta(i, spec) + theta(j, spec)) % 2


def _sgn(p: int) -> int:
    return -1 if p % 2 else 1


def q_index(i: int, spec: AlgebraSpec) -> Scalar:
    """q_i = q^(1 - 2 theta_i)."""
    return Q if theta(i, spec) == 0 else QBAR


def cartan_matrix(spec: AlgebraSpec) -> list[list[int]]:
    r = spec.rank
    rows = []
    for i in range(1, r + 1):
        s = _sgn(theta_pair(i - 1, i, spec))
        row = []
        for j in range(1, r + 1):
            a = (1 + s) * (i == j) - s * (i == j - 1) - (i - 1 == j)
            row.append(a)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class Root:
    """epsilon_i - epsilon_j for basis labels i != j in [0; n+m]."""

    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("a root needs distinct labels")

    @property
    def positive(self) -> bool:
        return self.i < self.j

    @classmethod
    def of_cag(cls, i: int, sign: int) -> "Root":
        # a_i^- carries eps_0 - eps_i, a_i^+ carries eps_i - eps_0
        return cls(0, i) if sign < 0 else cls(i, 0)

    def __str__(self):
        return f"eps_{self.i} - eps_{self.j}"


class Gens:
    """Generator elements with parities fixed by the spec."""

    def __init__(self, spec: AlgebraSpec):
        self.spec = spec

    def _check(self, i):
        if i not in self.spec.indices:
            raise IndexError(f"index {i} outside [1; {self.spec.rank}]")

    def sym(self, family: str, i: int, j: int | None = None) -> GeneratorSymbol:
        sp = self.spec
        if family == "E":
            return symbol("E", i, j, parity=theta_pair(i, j, sp))
        self._check(i)
        if family in ("e", "f"):
            p = theta_pair(i - 1, i, sp)
        elif family in ("ap", "am"):
            p = theta(i, sp)
        else:
            p = 0
        return symbol(family, i, parity=p)

    def el(self, family, i, j=None) -> Element:
        return Element.sym(self.sym(family, i, j))

    def e(self, i):
        return self.el("e", i)

    def f(self, i):
        return self.el("f", i)

    def h(self, i):
        return self.el("h", i)

    def H(self, i):
        return self.el("H", i)

    def k(self, i, power: int = 1):
        return self.el("k" if power > 0 else "kbar", i)

    def kbar(self, i):
        return self.el("kbar", i)

    def L(self, i, power: int = 1):
        return self.el("L" if power > 0 else "Lbar", i)

    def Lbar(self, i):
        return self.el("Lbar", i)

    def ap(self, i):
        return self.el("ap", i)

    def am(self, i):
        return self.el("am", i)

    def a(self, i, eta: int):
        return self.ap(i) if eta > 0 else self.am(i)

    def E(self, i, j):
        return self.el("E", i, j)


@dataclass(frozen=True)
class Relation:
    label: str
    element: Element
    provenance: str
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def lhs_minus_rhs(self) -> Element:
        return self.element

    def to_dict(self) -> dict:
        return {"label": self.label, "expression": str(self.element), "provenance": self.provenance}


@dataclass(frozen=True)
class Presentation:
    spec: AlgebraSpec
    kind: str
    generators: tuple[GeneratorSymbol, ...]
    relations: tuple[Relation, ...]
    dropped: tuple[str, ...] = field(default=())

    def alphabet(self) -> dict[str, GeneratorSymbol]:
        return {g.name: g for g in self.generators}

    def by_label(self, label: str) -> Relation:
        for r in self.relations:
            if r.label == label:
                return r
        raise KeyError(label)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.relations:
            out[r.provenance] = out.get(r.provenance, 0) + 1
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spec": self.spec.to_dict(),
            "generators": [{"name": g.name, "parity": g.parity} for g in self.generators],
            "relations": [r.to_dict() for r in self.relations],
            "dropped_trivial": list(self.dropped),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


# -- translations ------------------------------------------------------------


def cag_from_chevalley(i: int, sign: int, spec: AlgebraSpec) -> Element:
    """a_i^- (sign < 0) or a_i^+ (sign > 0) as nested brackets of e's or f's."""
    g = Gens(spec)
    g._check(i)
    if sign < 0:
        x = g.e(1)
        for j in range(2, i + 1):
            x = br(x, g.e(j), q_index(j - 1, spec).bar() if spec.deformed else ONE)
    else:
        x = g.f(1)
        for j in range(2, i + 1):
            x = br(g.f(j), x, q_index(j - 1, spec) if spec.deformed else ONE)
    return x


def H_from_chevalley(i: int, spec: AlgebraSpec) -> Element:
    g = Gens(spec)
    g._check(i)
    x = Element.zero()
    for p in range(1, i + 1):
        x = x + g.h(p).scale(_sgn(theta(p - 1, spec)))
    return x


def L_from_chevalley(i: int, sign: int, spec: AlgebraSpec) -> Element:
    """L_i = k_1 k_2^(+-1) ... k_i^(+-1) (sign > 0) or its inverse."""
    g = Gens(spec)
    g._check(i)
    x = Element.one()
    for p in range(1, i + 1):
        x = x * g.k(p, sign * _sgn(theta(p - 1, spec)))
    return x


def chevalley_from_cag(kind: str, i: int, spec: AlgebraSpec) -> Element:
    """e_i, f_i, h_i (and k_i, kbar_i when deformed) in CAG generators."""
    g = Gens(spec)
    g._check(i)
    s = _sgn(theta(i - 1, spec))
    if not spec.deformed:
        if kind == "e":
            return g.am(1) if i == 1 else br(g.ap(i - 1), g.am(i))
        if kind == "f":
            return g.ap(1) if i == 1 else br(g.ap(i), g.am(i - 1))
        if kind == "h":
            if i == 1:
                return br(g.am(1), g.ap(1))
            return (br(g.am(i), g.ap(i)) - br(g.am(i - 1), g.ap(i - 1))).scale(s)
        raise ValueError(f"unknown classical Chevalley family {kind!r}")
    if kind == "e":
        if i == 1:
            return g.am(1)
        return (br(g.am(i), g.ap(i - 1)) * g.L(i - 1)).scale(-s)
    if kind == "f":
        if i == 1:
            return g.ap(1)
        return (g.Lbar(i - 1) * br(g.am(i - 1), g.ap(i))).scale(-s)
    if kind == "h":
        if i == 1:
            return g.H(1)
        return (g.H(i) - g.H(i - 1)).scale(s)
    if kind in ("k", "kbar"):
        sign = 1 if kind == "k" else -1
        if i == 1:
            return g.L(1, sign)
        sign *= s
        return g.L(i - 1, -sign) * g.L(i, sign)
    raise ValueError(f"unknown Chevalley family {kind!r}")


def cag_substitution(spec: AlgebraSpec) -> dict[int, Element]:
    """Symbol-key map sending CAG generators to Chevalley expressions."""
    g = Gens(spec)
    out = {}
    for i in spec.indices:
        out[g.sym("am", i).key] = cag_from_chevalley(i, -1, spec)
        out[g.sym("ap", i).key] = cag_from_chevalley(i, +1, spec)
        if spec.deformed:
            out[g.sym("L", i).key] = L_from_chevalley(i, 1, spec)
            out[g.sym("Lbar", i).key] = L_from_chevalley(i, -1, spec)
        out[g.sym("H", i).key] = H_from_chevalley(i, spec)
    return out


def chevalley_substitution(spec: AlgebraSpec) -> dict[int, Element]:
    """Symbol-key map sending Chevalley generators to CAG expressions."""
    g = Gens(spec)
    out = {}
    kinds = ("e", "f", "h", "k", "kbar") if spec.deformed else ("e", "f", "h")
    for i in spec.indices:
        for kind in kinds:
            out[g.sym(kind, i).key] = chevalley_from_cag(kind, i, spec)
    return out


# -- relation builders ---------------------------------------------------------


class _Collector:
    def __init__(self):
        self.relations: list[Relation] = []
        self.dropped: list[str] = []

    def add(self, label: str, element: Element, provenance: str, **meta):
        if element.is_zero():
            self.dropped.append(label)
        else:
            self.relations.append(Relation(label, element, provenance, meta))


def _grouplike_relations(c: _Collector, g: Gens, fam: str, prov: str):
    spec = g.spec
    syms = []
    for i in spec.indices:
        syms += [(fam, i, 1), (fam, i, -1)]
    elems = {s: (g.k(s[1], s[2]) if fam == "k" else g.L(s[1], s[2])) for s in syms}
    names = {s: (fam if s[2] > 0 else fam + "bar") + f"_{s[1]}" for s in syms}
    for a in range(len(syms)):
        for b in range(a + 1, len(syms)):
            x, y = syms[a], syms[b]
            if x[1] == y[1]:
                continue
            c.add(f"{prov}:comm[{names[x]},{names[y]}]", br(elems[x], elems[y]), prov, i=x[1], j=y[1], si=x[2], sj=y[2])
    for i in spec.indices:
        one = Element.one()
        c.add(f"inv:{fam}_{i}{fam}bar_{i}", elems[(fam, i, 1)] * elems[(fam, i, -1)] - one, "inv", i=i)
        c.add(f"inv:{fam}bar_{i}{fam}_{i}", elems[(fam, i, -1)] * elems[(fam, i, 1)] - one, "inv", i=i)


def _serre(c: _Collector, g: Gens, x, tag: str, deformed: bool):
    """Serre relations for one family x in {e, f}; tag is the label letter."""
    spec = g.spec
    r = spec.rank
    n1 = spec.odd_node
    gen = g.e if x == "e" else g.f
    pa, pb, pc = ("22a", "22b", "22c") if x == "e" else ("22d", "22e", "22f")
    if not deformed:
        pa, pb, pc = "12a", "12c", "12e"
    for i in range(1, r + 1):
        for j in range(i + 2, r + 1):
            c.add(f"{pa}:[{tag}_{i},{tag}_{j}]", br(gen(i), gen(j)), pa)
    if n1 is not None:
        c.add(f"{pa if deformed else '12b'}:{tag}_{n1}^2", gen(n1) * gen(n1), pa if deformed else "12b")
    if deformed:
        for i in range(1, r + 1):
            if i == n1:
                continue
            for j in (i - 1, i + 1):
                if 1 <= j <= r:
                    el = br(gen(i), br(gen(i), gen(j), QBAR), Q)
                    c.add(f"{pb}:[{tag}_{i},[{tag}_{i},{tag}_{j}]]", el, pb)
        if n1 is not None and spec.n >= 1 and spec.m >= 2:
            n = spec.n
            for inner, outer, nm in ((Q, QBAR, "q"), (QBAR, Q, "qbar")):
                el = br(gen(n + 1), br(br(gen(n), gen(n + 1), inner), gen(n + 2), outer))
                c.add(f"{pc}:{{{tag}_{n1},[[{tag}_{n},{tag}_{n1}]_{nm},{tag}_{n + 2}]}}", el, pc)
    else:
        for i in range(1, r):
            # the doubled generator must be even for a plain double commutator
            if i != n1:
                c.add(f"12c:[{tag}_{i},[{tag}_{i},{tag}_{i + 1}]]", br(gen(i), br(gen(i), gen(i + 1))), "12c")
            if i + 1 != n1:
                c.add(f"12d:[{tag}_{i + 1},[{tag}_{i + 1},{tag}_{i}]]", br(gen(i + 1), br(gen(i + 1), gen(i))), "12d")
        if n1 is not None and spec.n >= 1 and spec.m >= 2:
            n = spec.n
            el = br(br(gen(n1), gen(n)), br(gen(n1), gen(n + 2)))
            c.add(f"12e:{{[{tag}_{n1},{tag}_{n}],[{tag}_{n1},{tag}_{n + 2}]}}", el, "12e")
            el = br(gen(n1), br(br(gen(n), gen(n1)), gen(n + 2)))
            c.add(f"12f:{{{tag}_{n1},[[{tag}_{n},{tag}_{n1}],{tag}_{n + 2}]}}", el, "12f")


def _chevalley_deformed(spec: AlgebraSpec) -> _Collector:
    g = Gens(spec)
    c = _Collector()
    A = cartan_matrix(spec)
    _grouplike_relations(c, g, "k", "21a")
    for i in spec.indices:
        for j in spec.indices:
            a = A[i - 1][j - 1]
            c.add(f"23:k_{i}e_{j}", g.k(i) * g.e(j) - (g.e(j) * g.k(i)).scale(qpow(a)), "23")
            c.add(f"23:k_{i}f_{j}", g.k(i) * g.f(j) - (g.f(j) * g.k(i)).scale(qpow(-a)), "23")
            c.add(f"23:kbar_{i}e_{j}", g.kbar(i) * g.e(j) - (g.e(j) * g.kbar(i)).scale(qpow(-a)), "23")
            c.add(f"23:kbar_{i}f_{j}", g.kbar(i) * g.f(j) - (g.f(j) * g.kbar(i)).scale(qpow(a)), "23")
    for i in spec.indices:
        for j in spec.indices:
            el = br(g.e(i), g.f(j))
            if i == j:
                el = el - (g.k(i) - g.kbar(i)).scale(QDIFF_INV)
            c.add(f"21c:[e_{i},f_{j}]", el, "21c")
    _serre(c, g, "e", "e", True)
    _serre(c, g, "f", "f", True)
    return c


def _chevalley_classical(spec: AlgebraSpec) -> _Collector:
    g = Gens(spec)
    c = _Collector()
    A = cartan_matrix(spec)
    for i in spec.indices:
        for j in spec.indices:
            if i < j:
                c.add(f"11:[h_{i},h_{j}]", br(g.h(i), g.h(j)), "11")
            a = A[i - 1][j - 1]
            c.add(f"11:[h_{i},e_{j}]", br(g.h(i), g.e(j)) - g.e(j).scale(a), "11")
            c.add(f"11:[h_{i},f_{j}]", br(g.h(i), g.f(j)) + g.f(j).scale(a), "11")
    for i in spec.indices:
        for j in spec.indices:
            el = br(g.e(i), g.f(j))
            if i == j:
                el = el - g.h(i)
            c.add(f"11:[e_{i},f_{j}]", el, "11")
    _serre(c, g, "e", "e", False)
    _serre(c, g, "f", "f", False)
    return c


def _cag_deformed(spec: AlgebraSpec) -> _Collector:
    g = Gens(spec)
    c = _Collector()
    _grouplike_relations(c, g, "L", "38a")
    r = spec.rank
    for i in spec.indices:
        for j in spec.indices:
            w = 1 + _sgn(theta(i, spec)) * (i == j)
            for eta, nm in ((1, "ap"), (-1, "am")):
                a = g.a(j, eta)
                c.add(f"39:L_{i}{nm}_{j}", g.L(i) * a - (a * g.L(i)).scale(qpow(-eta * w)), "39", i=i, j=j, eta=eta, power=1)
                c.add(f"39:Lbar_{i}{nm}_{j}", g.Lbar(i) * a - (a * g.Lbar(i)).scale(qpow(eta * w)), "39", i=i, j=j, eta=eta, power=-1)
    for i in spec.indices:
        el = br(g.am(i), g.ap(i)) - (g.L(i) - g.Lbar(i)).scale(QDIFF_INV)
        c.add(f"38c:[am_{i},ap_{i}]", el, "38c", i=i)
    for xi in (1, -1):
        for eta in (1, -1):
            for i in spec.indices:
                if not 1 <= i + xi <= r:
                    continue
                for k in spec.indices:
                    w = xi * (1 + _sgn(theta(i, spec)) * (i == k))
                    el = br(br(g.a(i, eta), g.a(i + xi, -eta)), g.a(k, eta), qpow(w))
                    if k == i + xi:
                        coeff = eta ** theta(k, spec)
                        el = el - (g.L(k, -xi * eta) * g.a(i, eta)).scale(coeff)
                    label = f"38d:xi={'+' if xi > 0 else '-'},eta={'+' if eta > 0 else '-'},i={i},k={k}"
                    c.add(label, el, "38d", xi=xi, eta=eta, i=i, k=k)
    for eta, nm in ((1, "ap"), (-1, "am")):
        if r >= 2:
            c.add(f"38e:[{nm}_1,{nm}_2]_q", br(g.a(1, eta), g.a(2, eta), Q), "38e", i=1, j=2, eta=eta)
        c.add(f"38e:[{nm}_1,{nm}_1]", br(g.a(1, eta), g.a(1, eta)), "38e", i=1, j=1, eta=eta)
    return c


def _cag_classical(spec: AlgebraSpec) -> _Collector:
    g = Gens(spec)
    c = _Collector()
    r = spec.rank
    for eta, nm in ((1, "ap"), (-1, "am")):
        if r >= 2:
            c.add(f"18a:[{nm}_1,{nm}_2]", br(g.a(1, eta), g.a(2, eta)), "18a", i=1, j=2, eta=eta)
        c.add(f"18a:[{nm}_1,{nm}_1]", br(g.a(1, eta), g.a(1, eta)), "18a", i=1, j=1, eta=eta)
    for label, el, prov, meta in _triple(spec, g, near_only=True):
        c.add(label, el, prov, **meta)
    return c


def _triple(spec: AlgebraSpec, g: Gens, near_only: bool) -> Iterator[tuple[str, Element, str, dict]]:
    tb, tc = ("18b", "18c") if near_only else ("17b", "17c")
    for i in spec.indices:
        for j in spec.indices:
            if near_only and abs(i - j) > 1:
                continue
            inner = br(g.ap(i), g.am(j))
            for k in spec.indices:
                el = br(inner, g.ap(k))
                if j == k:
                    el = el - g.ap(i)
                if i == j:
                    el = el - g.ap(k).scale(_sgn(theta(i, spec)))
                yield f"{tb}:i={i},j={j},k={k}", el, tb, {"i": i, "j": j, "k": k}
                el = br(inner, g.am(k))
                if i == k:
                    el = el + g.am(j).scale(_sgn(theta_pair(i, j, spec) * theta(k, spec)))
                if i == j:
                    el = el + g.am(k).scale(_sgn(theta(i, spec)))
                yield f"{tc}:i={i},j={j},k={k}", el, tc, {"i": i, "j": j, "k": k}


def triple_relations(spec: AlgebraSpec) -> list[Relation]:
    """The full classical triple-relation set over all i, j, k."""
    g = Gens(spec)
    c = _Collector()
    for eta, nm in ((1, "ap"), (-1, "am")):
        for i in spec.indices:
            for j in spec.indices:
                c.add(f"17a:[{nm}_{i},{nm}_{j}]", br(g.a(i, eta), g.a(j, eta)), "17a", i=i, j=j, eta=eta)
    for label, el, prov, meta in _triple(spec, g, near_only=False):
        c.add(label, el, prov, **meta)
    return c.relations


def gl_relations(spec: AlgebraSpec) -> list[Relation]:
    """Supercommutation relations of the matrix units e_ij of gl(n+1|m)."""
    g = Gens(spec)
    r = spec.rank
    out = []
    for i in range(r + 1):
        for j in range(r + 1):
            for k in range(r + 1):
                for l in range(r + 1):
                    el = br(g.E(i, j), g.E(k, l))
                    if j == k:
                        el = el - g.E(i, l)
                    if i == l:
                        el = el + g.E(k, j).scale(_sgn(theta_pair(i, j, spec) * theta_pair(k, l, spec)))
                    if not el.is_zero():
                        out.append(Relation(f"6:[E_{i}_{j},E_{k}_{l}]", el, "6"))
    return out


def _generators(kind: str, spec: AlgebraSpec) -> tuple[GeneratorSymbol, ...]:
    g = Gens(spec)
    if kind == "chevalley":
        fams = ("e", "f", "k", "kbar") if spec.deformed else ("e", "f", "h")
    else:
        fams = ("ap", "am", "L", "Lbar") if spec.deformed else ("ap", "am")
    return tuple(g.sym(f, i) for f in fams for i in spec.indices)


def build_presentation(kind: str, spec: AlgebraSpec) -> Presentation:
    if kind not in ("chevalley", "cag"):
        raise ValueError(f"unknown presentation kind {kind!r}")
    if kind == "chevalley":
        c = _chevalley_deformed(spec) if spec.deformed else _chevalley_classical(spec)
    else:
        c = _cag_deformed(spec) if spec.deformed else _cag_classical(spec)
    name = f"{kind}-{'deformed' if spec.deformed else 'classical'}"
    return Presentation(spec, name, _generators(kind, spec), tuple(c.relations), tuple(c.dropped))
