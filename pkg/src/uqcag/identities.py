"""Graded q-bracket identities checked over free placeholders a, b, c.

Each identity is expanded as LHS - RHS in the free algebra on three symbols
of prescribed parity.  Where an identity assumes a vanishing bracket, the
difference is reduced modulo the single swap rule that hypothesis induces;
one rule of length two has no self-overlaps, so that rule system is
confluent and a nonzero normal form disproves the identity.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping

from .rewrite import orient_elements, reduce
from .scalar import ONE, Q, QBAR, Scalar
from .status import Status, VerificationStatus
from .superfree import Element, br, free_symbol

__all__ = [
    "IDENTITIES",
    "PreconditionError",
    "check_bracket_identity",
    "plain_bracket",
    "parity_assignments",
    "param_grid",
]

PARAM_VALUES = (Q, QBAR, ONE)


class PreconditionError(ValueError):
    pass


def plain_bracket(a: Element, b: Element, x: Scalar = ONE) -> Element:
    """Ungraded q-commutator ab - x ba."""
    return a * b - (b * a).scale(x)


def _sign(p: int) -> int:
    return -1 if p % 2 else 1


def _i29(a, b, c, par, P):
    # if [[a,b]] = 0 then [[ [[a,c]]_q, b ]]_p = [[ a, [[c,b]]_p ]]_q
    return br(br(a, c, P["q"]), b, P["p"]) - br(a, br(c, b, P["p"]), P["q"])


def _i30(a, b, c, par, P):
    # if [[a,b]] = 0 then [[a,[[b,c]]_q]]_p = (-1)^(ab) [[b,[[a,c]]_p]]_q
    s = _sign(par[0] * par[1])
    return br(a, br(b, c, P["q"]), P["p"]) - br(b, br(a, c, P["p"]), P["q"]).scale(s)


def _i31(a, b, c, par, P):
    x = P["x"]
    xb = x.bar()
    lhs = br(b, br(a, br(b, c, x), x)).scale(x + xb)
    rhs = br(a, br(b, br(b, c, x), xb), x * x) - br(br(b, br(b, a, x), xb), c, x * x)
    return lhs - rhs


def _i32(a, b, c, par, P):
    x = P["x"]
    xb = x.bar()
    lhs = br(a, br(br(b, a, x), c, x)).scale(x + xb)
    rhs = br(b, br(a, br(a, c, x), xb), x * x) - br(br(a, br(a, b, x), xb), c, x * x)
    return lhs - rhs


def _i33(a, b, c, par, P):
    x = P["x"]
    return plain_bracket(a, b * c, x) - (plain_bracket(a, b) * c + b * plain_bracket(a, c, x))


def _i36(a, b, c, par, P):
    x = P["x"]
    s = _sign(par[1] * par[2])
    return br(br(a, b, x), c) - (br(br(a, c), b, x).scale(s) + br(a, br(b, c), x))


def _i42(a, b, c, par, P):
    x, y, z, r, s, t = (P[k] for k in "xyzrst")
    sign = _sign(par[0] * par[1])
    return br(a, br(b, c, x), y) - (br(br(a, b, z), c, t) + br(b, br(a, c, r), s).scale(z * sign))


def _i42_constraint(P):
    x, y, z, r, s, t = (P[k] for k in "xyzrst")
    if x != z * s or y != z * r or t != z * s * r:
        raise PreconditionError("I42 needs x = z s, y = z r, t = z s r")


# id -> (builder, parameter names, hypothesis pair or None, placeholders forced even)
IDENTITIES: dict[str, tuple[Callable, tuple[str, ...], tuple[int, int] | None, tuple[int, ...]]] = {
    "I29": (_i29, ("p", "q"), (0, 1), ()),
    "I30": (_i30, ("p", "q"), (0, 1), ()),
    "I31": (_i31, ("x",), (0, 2), (1,)),
    "I32": (_i32, ("x",), (1, 2), (0,)),
    "I33": (_i33, ("x",), None, ()),
    "I36": (_i36, ("x",), None, ()),
    "I42": (_i42, ("x", "y", "z", "r", "s", "t"), None, ()),
}


def parity_assignments(identity_id: str):
    """All parity triples compatible with the identity's hypotheses."""
    forced = IDENTITIES[identity_id][3]
    for par in itertools.product((0, 1), repeat=3):
        if all(par[i] == 0 for i in forced):
            yield par


def param_grid(identity_id: str):
    """Parameter assignments drawn from {q, qbar, 1} (constraint-respecting for I42)."""
    names = IDENTITIES[identity_id][1]
    if identity_id == "I42":
        for vals in itertools.product(PARAM_VALUES, repeat=6):
            P = dict(zip(names, vals))
            try:
                _i42_constraint(P)
            except PreconditionError:
                continue
            yield P
        return
    for vals in itertools.product(PARAM_VALUES, repeat=len(names)):
        yield dict(zip(names, vals))


def check_bracket_identity(identity_id: str, parities, params: Mapping[str, Scalar]) -> VerificationStatus:
    if identity_id not in IDENTITIES:
        raise KeyError(f"unknown identity {identity_id!r}")
    build, names, hyp, forced = IDENTITIES[identity_id]
    par = tuple(int(p) % 2 for p in parities)
    if len(par) != 3:
        raise PreconditionError("need one parity per placeholder a, b, c")
    for i in forced:
        if par[i]:
            raise PreconditionError(f"{identity_id} requires placeholder {'abc'[i]} to be even")
    missing = set(names) - set(params)
    if missing:
        raise PreconditionError(f"{identity_id} needs parameters {sorted(missing)}")
    P = {k: (v if isinstance(v, Scalar) else Scalar(v)) for k, v in params.items()}
    if identity_id == "I42":
        _i42_constraint(P)
    syms = [Element.sym(free_symbol(i, par[i])) for i in range(3)]
    diff = build(*syms, par, P)
    if hyp is None:
        if diff.is_zero():
            return VerificationStatus(Status.PROVED_ZERO, 0, [], "expansion")
        return VerificationStatus(Status.FAILED, 0, [], "expansion", "nonzero difference", diff)
    u, v = syms[hyp[0]], syms[hyp[1]]
    rules = orient_elements([(f"hyp:[{'abc'[hyp[0]]},{'abc'[hyp[1]]}]", br(u, v))])
    red = reduce(diff, rules, trace=True)
    if red.result.is_zero():
        return VerificationStatus(Status.PROVED_ZERO, red.steps, red.trace, "hypothesis-rewrite")
    return VerificationStatus(
        Status.FAILED, red.steps, red.trace, "hypothesis-rewrite",
        "nonzero normal form modulo the (confluent) hypothesis rule", red.result,
    )
