"""Classical Fock modules of order p for the nondeformed CAGs.

States are ordered creation monomials (a_1^+)^r_1 ... (a_N^+)^r_N |0> with
a_i^+ = e_i0 and a_i^- = e_0i inside U(gl(n+1|m)).  A generator acts by
commuting it through the monomial with the matrix-unit supercommutators
until it reaches the vacuum, which has gl weight (p, 0, ..., 0) and is
killed by every e_0i and every e_ij with i != j >= 1.  States orthogonal to
the vacuum under every chain of annihilators (zero-norm states) are divided
out by an exact rank computation.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .presentations import AlgebraSpec, theta

__all__ = [
    "FockState",
    "FockModule",
    "HamiltonianSpec",
    "HamiltonianConstraintError",
    "StateNotInBasisError",
    "build_fock",
    "act",
    "hamiltonian",
    "cartan_hamiltonian",
    "hamiltonian_forms_check",
    "spectrum",
    "ladder_check",
    "supercommutation_check",
    "brute_force_dimension",
    "valid_energies",
]

Vector = dict  # word (tuple of creation indices) -> Fraction


class HamiltonianConstraintError(ValueError):
    """The energies violate sum_i (-1)^theta_i eps_i = 0."""


class StateNotInBasisError(KeyError):
    pass


@dataclass(frozen=True)
class FockState:
    occupation: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.occupation)

    def word(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.occupation, start=1) for _ in range(r))

    def __str__(self):
        return "|" + ",".join(map(str, self.occupation)) + ">"


@dataclass(frozen=True)
class HamiltonianSpec:
    energies: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "energies", tuple(Fraction(e) for e in self.energies))

    def validate(self, spec: AlgebraSpec):
        if len(self.energies) != spec.rank:
            raise HamiltonianConstraintError(f"need {spec.rank} energies, got {len(self.energies)}")
        s = sum(e if theta(i, spec) == 0 else -e for i, e in enumerate(self.energies, start=1))
        if s != 0:
            raise HamiltonianConstraintError(
                f"[48] energy constraint sum_i (-1)^theta_i eps_i = 0 violated (sum is {s})"
            )


def _q(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _frac(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _word_of(occupation: Sequence[int]) -> tuple[int, ...]:
    return FockState(tuple(occupation)).word()


class _Induced:
    """Straightening in the module freely generated by the creation operators."""

    def __init__(self, spec: AlgebraSpec, p: int):
        self.spec = spec
        self.p = p
        self.theta = [theta(i, spec) for i in range(spec.rank + 1)]
        self.cache: dict = {}

    def weight(self, a: int) -> int:
        return self.p if a == 0 else 0

    def normal(self, c: int, word: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
        """Insert creation index c in front of an ordered word; (sign, word) or None if it squares an odd mode."""
        if self.theta[c] and c in word:
            return None
        sign = 1
        pos = 0
        while pos < len(word) and word[pos] < c:
            if self.theta[c] and self.theta[word[pos]]:
                sign = -sign
            pos += 1
        return sign, word[:pos] + (c,) + word[pos:]

    def act(self, a: int, b: int, word: tuple[int, ...]) -> Vector:
        """e_ab applied to the ordered monomial ``word`` on the vacuum."""
        key = (a, b, word)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        out: Vector = {}

        def add(w, x):
            y = out.get(w, 0) + x
            if y:
                out[w] = y
            else:
                out.pop(w, None)

        if not word:
            if a == b:
                if self.weight(a):
                    add((), Fraction(self.weight(a)))
            elif b == 0:
                add((a,), Fraction(1))
        else:
            c, rest = word[0], word[1:]
            th = self.theta
            # [e_ab, e_c0} = delta_bc e_a0 - (-1)^(theta_ab theta_c) delta_0a e_cb
            if b == c:
                if a == 0:
                    for w, x in self.act(0, 0, rest).items():
                        add(w, x)
                else:
                    n = self.normal(a, rest)
                    if n is not None:
                        add(n[1], Fraction(n[0]))
            if a == 0:
                s = -1 if (th[b] * th[c]) % 2 else 1
                for w, x in self.act(c, b, rest).items():
                    add(w, -s * x)
            s = -1 if ((th[a] + th[b]) * th[c]) % 2 else 1
            for w, x in self.act(a, b, rest).items():
                n = self.normal(c, w)
                if n is not None:
                    add(n[1], s * n[0] * x)
        self.cache[key] = out
        return out

    def act_vector(self, a: int, b: int, v: Vector) -> Vector:
        out: Vector = {}
        for w, x in v.items():
            for u, y in self.act(a, b, w).items():
                z = out.get(u, 0) + x * y
                if z:
                    out[u] = z
                else:
                    out.pop(u, None)
        return out


def _occupations(spec: AlgebraSpec, total: int) -> list[tuple[int, ...]]:
    """Occupation vectors with the given total, odd modes capped at 1, in lexicographic order."""
    r = spec.rank
    caps = [total if theta(i, spec) == 0 else 1 for i in range(1, r + 1)]
    out = [occ for occ in itertools.product(*(range(c + 1) for c in caps)) if sum(occ) == total]
    return sorted(out, reverse=True)


@dataclass
class FockModule:
    spec: AlgebraSpec
    p: int
    cutoff: int
    basis: list[FockState]
    action: dict[str, flint.fmpq_mat] = field(default_factory=dict)
    nulls: dict[int, int] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, s: FockState | Sequence[int]) -> int:
        occ = s.occupation if isinstance(s, FockState) else tuple(s)
        for k, b in enumerate(self.basis):
            if b.occupation == occ:
                return k
        raise StateNotInBasisError(str(FockState(occ)))

    def matrix(self, name: str) -> flint.fmpq_mat:
        return self.action[name]

    def interior(self) -> list[int]:
        """Basis indices whose raised images stay inside the cutoff."""
        return [k for k, b in enumerate(self.basis) if b.total < self.cutoff]

    def to_dict(self, hspec: HamiltonianSpec | None = None) -> dict:
        d = {
            "spec": self.spec.to_dict(),
            "order_p": self.p,
            "cutoff": self.cutoff,
            "dimension": self.dim,
            "basis": [list(b.occupation) for b in self.basis],
            "null_states_removed": {str(k): v for k, v in self.nulls.items()},
            "action": {name: _rows(m) for name, m in self.action.items()},
        }
        if hspec is not None:
            d["energies"] = [str(e) for e in hspec.energies]
            d["spectrum"] = [str(e) for e in spectrum(self, hspec)]
        return d

    def to_json(self, hspec: HamiltonianSpec | None = None, **kw) -> str:
        return json.dumps(self.to_dict(hspec), **kw)

    def spectrum_csv(self, hspec: HamiltonianSpec) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["state", *[f"r_{i}" for i in self.spec.indices], "energy"])
        for b, e in zip(self.basis, spectrum(self, hspec)):
            w.writerow([str(b), *b.occupation, str(e)])
        return buf.getvalue()


def _rows(m: flint.fmpq_mat) -> list[list[str]]:
    return [[str(m[i, j]) for j in range(m.ncols())] for i in range(m.nrows())]


def _vacuum_pairing(ind: _Induced, word: tuple[int, ...], r: int) -> list[Fraction]:
    """Vacuum coefficients of every annihilator chain e_0j1 ... e_0jN applied to the state."""
    v = {word: Fraction(1)}
    vecs = [v]
    for _ in range(len(word)):
        vecs = [ind.act_vector(0, j, x) for x in vecs for j in range(1, r + 1)]
    return [x.get((), Fraction(0)) for x in vecs]


def build_fock(spec: AlgebraSpec, p: int, cutoff: int | None = None) -> FockModule:
    """The Fock module of order p, truncated at total occupation ``cutoff`` (default p + 1)."""
    if spec.deformed:
        raise ValueError("Fock modules are built for the nondeformed algebra; pass spec.classical()")
    if p < 1:
        raise ValueError("order p must be a positive integer")
    cutoff = p + 1 if cutoff is None else cutoff
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    r = spec.rank
    ind = _Induced(spec, p)
    basis: list[FockState] = []
    levels: dict[int, tuple[list[int], flint.fmpq_mat]] = {}
    nulls = {}
    for N in range(cutoff + 1):
        cands = _occupations(spec, N)
        rows = [_vacuum_pairing(ind, _word_of(o), r) for o in cands]
        width = len(rows[0]) if rows else 0
        kept: list[int] = []
        kept_rows: list[list[Fraction]] = []
        rank = 0
        for k, row in enumerate(rows):
            trial = kept_rows + [row]
            rk = flint.fmpq_mat(len(trial), width, [_q(x) for rw in trial for x in rw]).rank()
            if rk > rank:
                kept.append(k)
                kept_rows.append(row)
                rank = rk
        nulls[N] = len(cands) - len(kept)
        start = len(basis)
        basis.extend(FockState(cands[k]) for k in kept)
        if kept:
            levels[N] = (list(range(start, len(basis))), flint.fmpq_mat(len(kept), width, [_q(x) for rw in kept_rows for x in rw]))

    module = FockModule(spec, p, cutoff, basis, nulls=nulls)

    def coords(v: Vector, N: int) -> list[tuple[int, Fraction]]:
        """Coordinates of an induced vector of level N in the quotient basis."""
        if not v or N not in levels:
            return []
        idx, B = levels[N]
        target = _vacuum_pairing_vector(ind, v, N, r)
        if not any(target):
            return []
        # c B = target has a unique solution because B has full row rank
        G = B * B.transpose()
        rhs = B * flint.fmpq_mat(len(target), 1, [_q(x) for x in target])
        c = G.solve(rhs)
        back = c.transpose() * B
        if [back[0, j] for j in range(back.ncols())] != [_q(x) for x in target]:
            raise ArithmeticError("image is not in the span of the kept states")
        return [(idx[k], _frac(c[k, 0])) for k in range(len(idx)) if c[k, 0] != 0]

    d = module.dim
    gens = {}
    for i in spec.indices:
        gens[f"ap_{i}"] = (i, 0)
        gens[f"am_{i}"] = (0, i)
    for name, (a, b) in gens.items():
        m = flint.fmpq_mat(d, d)
        for col, s in enumerate(basis):
            N = s.total + (1 if b == 0 else -1)
            for row, x in coords(ind.act(a, b, s.word()), N):
                m[row, col] = _q(x)
        module.action[name] = m
    for i in spec.indices:
        sign = -1 if theta(i, spec) else 1
        m = flint.fmpq_mat(d, d)
        for col, s in enumerate(basis):
            m[col, col] = (p - s.total) - sign * s.occupation[i - 1]
        module.action[f"H_{i}"] = m
    module._induced = ind
    return module


def _vacuum_pairing_vector(ind: _Induced, v: Vector, N: int, r: int) -> list[Fraction]:
    vecs = [dict(v)]
    for _ in range(N):
        vecs = [ind.act_vector(0, j, x) for x in vecs for j in range(1, r + 1)]
    return [x.get((), Fraction(0)) for x in vecs]


def act(g: str, s: FockState | Sequence[int], module: FockModule) -> dict[FockState, Fraction]:
    """Image of a basis state under a_i^+ ("ap_i"), a_i^- ("am_i") or H_i ("H_i")."""
    if g not in module.action:
        raise KeyError(f"unknown generator {g!r}")
    col = module.index(s)
    m = module.action[g]
    return {
        module.basis[row]: _frac(m[row, col])
        for row in range(module.dim)
        if m[row, col] != 0
    }


def _bracket(a, b, sign: int = 1):
    return a * b - b * a if sign > 0 else a * b + b * a


def hamiltonian(module: FockModule, hspec: HamiltonianSpec) -> flint.fmpq_mat:
    """H = sum_i eps_i [[a_i^+, a_i^-]] computed from the action matrices.

    On a truncated module the product a^+ a^- is exact on every state while
    a^- a^+ is exact only below the cutoff; use interior states for checks.
    """
    spec = module.spec
    hspec.validate(spec)
    H = flint.fmpq_mat(module.dim, module.dim)
    for i, e in zip(spec.indices, hspec.energies):
        if e == 0:
            continue
        sign = -1 if theta(i, spec) else 1
        ap, am = module.action[f"ap_{i}"], module.action[f"am_{i}"]
        H = H + _bracket(ap, am, sign) * _q(e)
    return H


def cartan_hamiltonian(module: FockModule, hspec: HamiltonianSpec) -> flint.fmpq_mat:
    """sum_i eps_i H_i with the diagonal H_i = [[a_i^-, a_i^+]]."""
    hspec.validate(module.spec)
    H = flint.fmpq_mat(module.dim, module.dim)
    for i, e in zip(module.spec.indices, hspec.energies):
        H = H + module.action[f"H_{i}"] * _q(e)
    return H


def hamiltonian_forms_check(module: FockModule, hspec: HamiltonianSpec) -> dict:
    """Compare sum eps_i [[a_i^+, a_i^-]] with sum eps_i H_i.

    With H_i = [[a_i^-, a_i^+]] the two differ by 2 sum_{i<=n} eps_i H_i
    under the energy constraint; the report says whether they coincide and
    whether the difference is exactly that operator.
    """
    H49 = hamiltonian(module, hspec)
    H48 = cartan_hamiltonian(module, hspec)
    spec = module.spec
    expected = flint.fmpq_mat(module.dim, module.dim)
    for i, e in zip(spec.indices, hspec.energies):
        if theta(i, spec) == 0:
            expected = expected + module.action[f"H_{i}"] * _q(2 * e)
    return {"equal": H49 == H48, "difference_is_2_sum_even": H48 - H49 == expected}


def spectrum(module: FockModule, hspec: HamiltonianSpec) -> list[Fraction]:
    """Diagonal of H on the basis (H is diagonal: it counts occupations weighted by eps)."""
    H = hamiltonian(module, hspec)
    return [_frac(H[k, k]) for k in range(module.dim)]


def _columns_equal(a: flint.fmpq_mat, b: flint.fmpq_mat, cols: Iterable[int]) -> bool:
    return all(a[i, j] == b[i, j] for j in cols for i in range(a.nrows()))


def ladder_check(module: FockModule, hspec: HamiltonianSpec) -> dict:
    """[H, a_i^+-] = +-eps_i a_i^+- on interior states, exactly."""
    H = hamiltonian(module, hspec)
    spec = module.spec
    cols = module.interior()
    inner = [k for k in cols if module.basis[k].total + 1 < module.cutoff]
    # H is only exact where a^- a^+ stays inside the truncation
    results = {}
    for i, e in zip(spec.indices, hspec.energies):
        for eta, name in ((1, f"ap_{i}"), (-1, f"am_{i}")):
            A = module.action[name]
            lhs = H * A - A * H
            rhs = A * _q(eta * e)
            use = inner if eta > 0 else [k for k in cols if module.basis[k].total >= 1]
            results[name] = _columns_equal(lhs, rhs, use)
    return {"ok": all(results.values()), "checks": results, "interior_states": len(inner)}


def supercommutation_check(module: FockModule) -> dict:
    """a_i^+ a_j^+ = (-1)^(theta_i theta_j) a_j^+ a_i^+ as matrices (and likewise for a^-)."""
    spec = module.spec
    out = {}
    for fam in ("ap", "am"):
        for i in spec.indices:
            for j in spec.indices:
                if j < i:
                    continue
                A, B = module.action[f"{fam}_{i}"], module.action[f"{fam}_{j}"]
                sign = -1 if theta(i, spec) and theta(j, spec) else 1
                lhs = A * B
                rhs = B * A * sign
                out[f"{fam}_{i},{fam}_{j}"] = lhs == rhs
    return {"ok": all(out.values()), "checks": out}


def brute_force_dimension(spec: AlgebraSpec, p: int, cutoff: int | None = None) -> int:
    """Count degree-p monomials x_0^(p-N) x_1^r_1 ... in n+1 even and m odd variables with N <= cutoff.

    This is the dimension of the p-th supersymmetric power of the defining
    module, enumerated directly without any straightening.
    """
    cutoff = p + 1 if cutoff is None else cutoff
    r = spec.rank
    count = 0
    for exps in itertools.product(range(p + 1), repeat=r):
        if any(theta(i, spec) and x > 1 for i, x in enumerate(exps, start=1)):
            continue
        N = sum(exps)
        if N <= p and N <= cutoff:
            count += 1
    return count


def valid_energies(spec: AlgebraSpec, candidates: Iterable[Sequence] | None = None, limit: int = 3) -> list[HamiltonianSpec]:
    """Distinct energy vectors satisfying the constraint, drawn from a small integer grid."""
    if candidates is None:
        candidates = itertools.product(range(-2, 3), repeat=spec.rank)
    out = []
    for c in candidates:
        h = HamiltonianSpec(tuple(c))
        try:
            h.validate(spec)
        except HamiltonianConstraintError:
            continue
        out.append(h)
        if len(out) >= limit:
            break
    return out
