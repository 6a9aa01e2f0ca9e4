"""Matrix representations used as independent oracles.

``classical_rep`` is the defining representation of gl(n+1|m) by matrix
units; it is faithful on the Lie superalgebra.  ``quantum_vector_rep`` is the
(n+m+1)-dimensional vector representation of the deformed algebra, found by
searching sign constants until every deformed Chevalley relation vanishes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .presentations import (
    AlgebraSpec,
    Gens,
    Relation,
    build_presentation,
    cag_from_chevalley,
    gl_relations,
    theta,
    theta_pair,
    triple_relations,
)
from .scalar import ONE, ZERO, Scalar, qpow
from .superfree import Element, symbol_for_key

__all__ = [
    "GradedMatrix",
    "RepAssignment",
    "UnassignedSymbolError",
    "NoVectorRepresentationError",
    "classical_rep",
    "quantum_vector_rep",
    "evaluate",
    "span_dimension",
    "matrix_bracket",
    "rank",
    "graded_kron",
    "tensor_square_rep",
]


class UnassignedSymbolError(KeyError):
    pass


class NoVectorRepresentationError(RuntimeError):
    pass


@dataclass(frozen=True)
class GradedMatrix:
    """Sparse exact d x d matrix over Scalars; index i has parity parities[i]."""

    parities: tuple[int, ...]
    entries: Mapping[tuple[int, int], Scalar] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.parities)

    @classmethod
    def zero(cls, parities) -> "GradedMatrix":
        return cls(tuple(parities), {})

    @classmethod
    def identity(cls, parities) -> "GradedMatrix":
        return cls(tuple(parities), {(i, i): ONE for i in range(len(parities))})

    @classmethod
    def unit(cls, parities, i: int, j: int, c: Scalar = ONE) -> "GradedMatrix":
        return cls(tuple(parities), {(i, j): c} if not c.is_zero() else {})

    @classmethod
    def diagonal(cls, parities, diag: Iterable[Scalar]) -> "GradedMatrix":
        return cls(tuple(parities), {(i, i): c for i, c in enumerate(diag) if not c.is_zero()})

    def __getitem__(self, ij) -> Scalar:
        return self.entries.get(ij, ZERO)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        d = dict(self.entries)
        for ij, c in other.entries.items():
            s = d.get(ij, ZERO) + c
            if s.is_zero():
                d.pop(ij, None)
            else:
                d[ij] = s
        return GradedMatrix(self.parities, d)

    def __neg__(self):
        return GradedMatrix(self.parities, {ij: -c for ij, c in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedMatrix":
        c = c if isinstance(c, Scalar) else Scalar(c)
        if c.is_zero():
            return GradedMatrix(self.parities, {})
        return GradedMatrix(self.parities, {ij: v * c for ij, v in self.entries.items()})

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        rows: dict[int, list] = {}
        for (k, j), c in other.entries.items():
            rows.setdefault(k, []).append((j, c))
        d: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in rows.get(k, ()):
                s = d.get((i, j))
                d[(i, j)] = a * b if s is None else s + a * b
        return GradedMatrix(self.parities, {ij: c for ij, c in d.items() if not c.is_zero()})

    __mul__ = __matmul__

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.parities == other.parities and dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash((self.parities, frozenset(self.entries.items())))

    def parity_set(self) -> set[int]:
        return {(self.parities[i] + self.parities[j]) % 2 for (i, j) in self.entries}

    def is_homogeneous(self) -> bool:
        return len(self.parity_set()) <= 1

    def parity(self) -> int:
        ps = self.parity_set()
        if len(ps) > 1:
            raise ValueError("matrix is not homogeneous")
        return ps.pop() if ps else 0

    def to_rows(self) -> list[list[str]]:
        return [[str(self[(i, j)]) for j in range(self.dim)] for i in range(self.dim)]

    def to_json(self) -> str:
        return json.dumps(self.to_rows())

    def __str__(self):
        return "\n".join(" ".join(row) for row in self.to_rows())


def matrix_bracket(a: GradedMatrix, b: GradedMatrix, x: Scalar = ONE) -> GradedMatrix:
    sign = -1 if (a.parity() & b.parity()) else 1
    return a @ b - (b @ a).scale(x * sign)


@dataclass
class RepAssignment:
    spec: AlgebraSpec
    kind: str
    images: dict[int, GradedMatrix]
    validated: bool = False
    constants: dict[str, list[int]] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)
    basis_parities: tuple[int, ...] | None = None

    @property
    def parities(self) -> tuple[int, ...]:
        if self.basis_parities is not None:
            return self.basis_parities
        return tuple(theta(i, self.spec) for i in range(self.spec.rank + 1))

    def image(self, key: int) -> GradedMatrix:
        try:
            return self.images[key]
        except KeyError:
            raise UnassignedSymbolError(f"{symbol_for_key(key).name} is not assigned") from None

    def validate(self, relations: Iterable[Relation]) -> list[str]:
        """Evaluate relations; return the labels that fail to vanish."""
        return [r.label for r in relations if not evaluate(r.element, self).is_zero()]


def evaluate(x: Element, rep: RepAssignment) -> GradedMatrix:
    par = rep.parities
    total = GradedMatrix.zero(par)
    cache: dict[tuple, GradedMatrix] = {(): GradedMatrix.identity(par)}
    for w, c in x.terms.items():
        for cut in range(len(w), -1, -1):
            if w[:cut] in cache:
                break
        m = cache[w[:cut]]
        for i in range(cut, len(w)):
            m = m @ rep.image(w[i])
            cache[w[: i + 1]] = m
        total = total + m.scale(c)
    return total


def _units(spec: AlgebraSpec):
    par = tuple(theta(i, spec) for i in range(spec.rank + 1))

    def E(i, j, c=ONE):
        return GradedMatrix.unit(par, i, j, c)

    return par, E


def _sgn(p: int) -> int:
    return -1 if p % 2 else 1


def classical_rep(spec: AlgebraSpec, validate: bool = True) -> RepAssignment:
    spec = spec.classical()
    g = Gens(spec)
    par, E = _units(spec)
    r = spec.rank
    images: dict[int, GradedMatrix] = {}
    for i in range(r + 1):
        for j in range(r + 1):
            images[g.sym("E", i, j).key] = E(i, j)
    for i in spec.indices:
        images[g.sym("e", i).key] = E(i - 1, i)
        images[g.sym("f", i).key] = E(i, i - 1)
        images[g.sym("h", i).key] = E(i - 1, i - 1) - E(i, i).scale(_sgn(theta_pair(i - 1, i, spec)))
        images[g.sym("ap", i).key] = E(i, 0)
        images[g.sym("am", i).key] = E(0, i)
        images[g.sym("H", i).key] = E(0, 0) - E(i, i).scale(_sgn(theta(i, spec)))
    rep = RepAssignment(spec, "classical", images)
    if validate:
        rels = (
            gl_relations(spec)
            + list(build_presentation("chevalley", spec).relations)
            + list(build_presentation("cag", spec).relations)
            + triple_relations(spec)
        )
        rep.failures = rep.validate(rels)
        rep.validated = not rep.failures
    return rep


def _quantum_images(spec: AlgebraSpec, c_e, c_f) -> dict[int, GradedMatrix]:
    g = Gens(spec)
    par, E = _units(spec)
    r = spec.rank
    images: dict[int, GradedMatrix] = {}
    for i in spec.indices:
        images[g.sym("e", i).key] = E(i - 1, i, Scalar(c_e[i - 1]))
        images[g.sym("f", i).key] = E(i, i - 1, Scalar(c_f[i - 1]))
        hw = [0] * (r + 1)
        hw[i - 1] += 1
        hw[i] -= _sgn(theta_pair(i - 1, i, spec))
        images[g.sym("h", i).key] = GradedMatrix.diagonal(par, [Scalar(x) for x in hw])
        images[g.sym("k", i).key] = GradedMatrix.diagonal(par, [qpow(x) for x in hw])
        images[g.sym("kbar", i).key] = GradedMatrix.diagonal(par, [qpow(-x) for x in hw])
        Hw = [0] * (r + 1)
        Hw[0] += 1
        Hw[i] -= _sgn(theta(i, spec))
        images[g.sym("H", i).key] = GradedMatrix.diagonal(par, [Scalar(x) for x in Hw])
        images[g.sym("L", i).key] = GradedMatrix.diagonal(par, [qpow(x) for x in Hw])
        images[g.sym("Lbar", i).key] = GradedMatrix.diagonal(par, [qpow(-x) for x in Hw])
    return images


def quantum_vector_rep(spec: AlgebraSpec) -> RepAssignment:
    """Search c_i, c'_i in {+1, -1} (all +1 first) for a validated vector rep."""
    spec = spec.quantum()
    r = spec.rank
    g = Gens(spec)
    rels = build_presentation("chevalley", spec).relations
    for signs in itertools.product((1, -1), repeat=2 * r):
        c_e, c_f = signs[:r], signs[r:]
        rep = RepAssignment(spec, "quantum-vector", _quantum_images(spec, c_e, c_f))
        # cheap relations first so wrong signs are rejected early
        if rep.validate(sorted(rels, key=lambda x: x.element.degree())):
            continue
        for i in spec.indices:
            rep.images[g.sym("am", i).key] = evaluate(cag_from_chevalley(i, -1, spec), rep)
            rep.images[g.sym("ap", i).key] = evaluate(cag_from_chevalley(i, +1, spec), rep)
        rep.validated = True
        rep.constants = {"c_e": list(c_e), "c_f": list(c_f)}
        return rep
    raise NoVectorRepresentationError(f"no vector representation found for {spec}")


def rank(vectors: list[list[Scalar]]) -> int:
    """Exact rank by fraction-free-ish Gaussian elimination over Q(q)."""
    rows = [list(v) for v in vectors if any(not c.is_zero() for c in v)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rk = 0
    for col in range(ncols):
        pivot = next((r for r in range(rk, len(rows)) if not rows[r][col].is_zero()), None)
        if pivot is None:
            continue
        rows[rk], rows[pivot] = rows[pivot], rows[rk]
        p = rows[rk]
        inv = p[col].inverse()
        for r in range(rk + 1, len(rows)):
            c = rows[r][col]
            if c.is_zero():
                continue
            f = c * inv
            rows[r] = [a - f * b for a, b in zip(rows[r], p)]
        rk += 1
    return rk


def span_dimension(elements: Iterable[Element], rep: RepAssignment) -> int:
    d = rep.spec.rank + 1
    vecs = []
    for x in elements:
        m = evaluate(x, rep)
        vecs.append([m[(i, j)] for i in range(d) for j in range(d)])
    return rank(vecs)


def graded_kron(a: GradedMatrix, b: GradedMatrix) -> GradedMatrix:
    """Matrix of a (x) b on V (x) W with the Koszul sign (a x b)(v x w) = (-1)^(|b||v|) av x bw."""
    pb = b.parity()
    pa_, pw = a.parities, b.parities
    dw = len(pw)
    par = tuple((x + y) % 2 for x in pa_ for y in pw)
    d = {}
    for (i, k), x in a.entries.items():
        s = -1 if (pb and pa_[k]) else 1
        for (j, l), y in b.entries.items():
            c = x * y
            d[(i * dw + j, k * dw + l)] = c if s > 0 else -c
    return GradedMatrix(par, d)


# coproduct forms on Chevalley generators: "left" means e x K + 1 x e for e
# and f x 1 + Kbar x f for f; "right" the mirrored choice.  K = k_i^(p_i) with
# one exponent per index, because the Cartan matrix is symmetrised by signs.
_FORMS = [(ef, ff) for ef in ("left", "right") for ff in ("left", "right")]


def tensor_square_rep(spec: AlgebraSpec, base: RepAssignment | None = None) -> RepAssignment:
    """V (x) V through a coproduct whose convention is chosen by validation.

    The vector representation annihilates every product of two raising (or
    two lowering) operators, so it cannot see Serre-type relations; the
    tensor square can.  The coproduct is only a device to build this oracle:
    a candidate is accepted only if every deformed Chevalley relation vanishes.
    """
    spec = spec.quantum()
    base = base or quantum_vector_rep(spec)
    g = Gens(spec)
    par = base.parities
    one = GradedMatrix.identity(par)
    rels = sorted(build_presentation("chevalley", spec).relations, key=lambda x: x.element.degree())
    # the symmetrising signs (+1 up to the odd node, -1 after) come first
    sym = tuple(1 if i <= spec.n + 1 else -1 for i in spec.indices)
    powers = [sym] + [p for p in itertools.product((1, -1), repeat=spec.rank) if p != sym]
    for pw, (e_form, f_form) in itertools.product(powers, _FORMS):
        images: dict[int, GradedMatrix] = {}
        for i in spec.indices:
            e, f = base.image(g.sym("e", i).key), base.image(g.sym("f", i).key)
            k, kb = base.image(g.sym("k", i).key), base.image(g.sym("kbar", i).key)
            K, Kb = (k, kb) if pw[i - 1] > 0 else (kb, k)
            if e_form == "left":
                images[g.sym("e", i).key] = graded_kron(e, K) + graded_kron(one, e)
            else:
                images[g.sym("e", i).key] = graded_kron(e, one) + graded_kron(K, e)
            if f_form == "left":
                images[g.sym("f", i).key] = graded_kron(f, one) + graded_kron(Kb, f)
            else:
                images[g.sym("f", i).key] = graded_kron(f, Kb) + graded_kron(one, f)
            images[g.sym("k", i).key] = graded_kron(k, k)
            images[g.sym("kbar", i).key] = graded_kron(kb, kb)
            for fam in ("L", "Lbar"):
                m = base.image(g.sym(fam, i).key)
                images[g.sym(fam, i).key] = graded_kron(m, m)
        rep = RepAssignment(spec, "tensor-square", images, basis_parities=tuple((x + y) % 2 for x in par for y in par))
        if rep.validate(rels):
            continue
        for i in spec.indices:
            rep.images[g.sym("am", i).key] = evaluate(cag_from_chevalley(i, -1, spec), rep)
            rep.images[g.sym("ap", i).key] = evaluate(cag_from_chevalley(i, +1, spec), rep)
        rep.validated = True
        rep.constants = {"coproduct": [e_form, f_form], "powers": list(pw)}
        return rep
    raise NoVectorRepresentationError(f"no tensor-square representation found for {spec}")
