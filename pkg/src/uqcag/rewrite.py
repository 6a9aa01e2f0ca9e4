"""Ideal membership by rewriting: orientation, reduction, bounded completion.

Words are handled internally in *rank space*: each symbol key is mapped to an
integer rank so that the word order is simply ``(len(w), w)``.  With the
default order the rank of a symbol is its key, so no translation happens.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .presentations import Presentation
from .scalar import ONE, Scalar
from .status import OracleIncoherence, Status, VerificationStatus
from .superfree import FAMILIES, Element, format_word, symbol_for_key

__all__ = [
    "WordOrder",
    "RewriteRule",
    "RuleSystem",
    "Reduction",
    "TraceStep",
    "UnorientableRelationError",
    "AlphabetMismatchError",
    "orient",
    "orient_elements",
    "reduce",
    "complete",
    "verify_relation",
    "replay_trace",
    "replay_certificate",
    "DEFAULT_MAX_STEPS",
    "DEFAULT_MAX_DEGREE",
    "DEFAULT_MAX_NEW_RULES",
]

DEFAULT_MAX_STEPS = 100_000
DEFAULT_MAX_DEGREE = 8
DEFAULT_MAX_NEW_RULES = 10_000


class UnorientableRelationError(ValueError):
    pass


class AlphabetMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class WordOrder:
    """Degree-lexicographic order over a family precedence (lowest first).

    ``precedence=None`` is the default order given by symbol keys:
    free < E < ap < f < h < H < k/kbar < L/Lbar < e < am, indices ascending.
    A precedence entry may be a tuple of families sharing one key bucket
    (("k", "kbar") or ("L", "Lbar")); such a level keeps the default
    interleaving by index, so inverse pairs stay adjacent.
    """

    precedence: Optional[tuple] = None

    def __post_init__(self):
        if self.precedence is None:
            return
        levels = tuple(tuple(x) if isinstance(x, (tuple, list)) else (x,) for x in self.precedence)
        flat = [f for lv in levels for f in lv]
        unknown = set(flat) - set(FAMILIES)
        if unknown:
            raise ValueError(f"unknown families {sorted(unknown)}")
        if len(set(flat)) != len(flat):
            raise ValueError("precedence lists a family twice")
        for lv in levels:
            if len({FAMILIES[f][0] for f in lv}) != 1:
                raise ValueError(f"families {lv} do not share a key bucket")
        object.__setattr__(self, "precedence", tuple(lv[0] if len(lv) == 1 else lv for lv in levels))
        object.__setattr__(self, "_level", {f: n for n, lv in enumerate(levels) for f in lv})
        object.__setattr__(self, "_bucket", [FAMILIES[lv[0]][0] for lv in levels])

    @property
    def is_default(self) -> bool:
        return self.precedence is None

    def covers(self, key: int) -> bool:
        return self.is_default or symbol_for_key(key).family in self._level

    def rank(self, key: int) -> int:
        if self.precedence is None:
            return key
        return (self._level[symbol_for_key(key).family] << 16) | (key & 0xFFFF)

    def unrank(self, r: int) -> int:
        if self.precedence is None:
            return r
        return (self._bucket[r >> 16] << 16) | (r & 0xFFFF)

    def word_key(self, word: Sequence[int]) -> tuple:
        return (len(word), tuple(self.rank(k) for k in word))

    def compare(self, u: Sequence[int], v: Sequence[int]) -> int:
        a, b = self.word_key(u), self.word_key(v)
        return (a > b) - (a < b)

    def to_dict(self):
        if self.precedence is None:
            return {"precedence": "default"}
        return {"precedence": [list(x) if isinstance(x, tuple) else x for x in self.precedence]}


@dataclass
class RewriteRule:
    """lhs -> rhs in rank space; rhs is a list of (word, coefficient)."""

    lhs: tuple
    rhs: list
    label: str
    derived: bool = False
    certificate: Optional[dict] = None

    def equation_terms(self) -> dict:
        d = {w: -c for w, c in self.rhs}
        d[self.lhs] = ONE
        return d


@dataclass
class TraceStep:
    step: int
    rule: str
    position: int
    word: tuple
    coeff: Scalar

    def to_dict(self, order: WordOrder | None = None) -> dict:
        w = self.word if order is None else tuple(order.unrank(r) for r in self.word)
        return {"step": self.step, "rule": self.rule, "position": self.position, "word": format_word(w), "coeff": str(self.coeff)}


@dataclass
class Reduction:
    result: Element
    trace: list
    steps: int
    partial: bool


class RuleSystem:
    def __init__(self, order: WordOrder | None = None, generators: Iterable[int] = (), name: str = ""):
        self.order = order or WordOrder()
        self.generators = frozenset(generators)
        self.name = name
        self.rules: list[RewriteRule] = []
        self.index: dict[tuple, RewriteRule] = {}
        self.lengths: list[int] = []
        self.firsts: set[int] = set()
        self.pending: list[RewriteRule] = []  # rules whose lhs was already taken
        self.archive: dict[str, RewriteRule] = {}
        self.degree_bound: Optional[int] = None
        self.completion_log: list[dict] = []
        self.stats: dict = {}
        self.partial = False

    # -- construction -------------------------------------------------------

    def copy(self) -> "RuleSystem":
        other = RuleSystem(self.order, self.generators, self.name)
        for r in self.rules:
            other._install(r)
        other.pending = list(self.pending)
        other.archive = dict(self.archive)
        other.degree_bound = self.degree_bound
        other.completion_log = list(self.completion_log)
        other.stats = dict(self.stats)
        other.partial = self.partial
        return other

    def _install(self, rule: RewriteRule) -> bool:
        self.archive[rule.label] = rule
        if rule.lhs in self.index:
            self.pending.append(rule)
            return False
        self.rules.append(rule)
        self.index[rule.lhs] = rule
        if len(rule.lhs) not in self.lengths:
            self.lengths.append(len(rule.lhs))
            self.lengths.sort()
        if rule.lhs:
            self.firsts.add(rule.lhs[0])
        return True

    def _retire(self, rule: RewriteRule):
        self.rules.remove(rule)
        del self.index[rule.lhs]
        self.lengths = sorted({len(r.lhs) for r in self.rules})
        self.firsts = {r.lhs[0] for r in self.rules if r.lhs}

    @classmethod
    def from_rules(cls, rules: Iterable[tuple], order: WordOrder | None = None, generators: Iterable[int] = ()) -> "RuleSystem":
        """Build from (lhs word, rhs Element, label) triples in key space."""
        sys_ = cls(order, generators)
        gens = set(generators)
        for lhs, rhs, label in rules:
            lhs_r = tuple(sys_.order.rank(k) for k in lhs)
            rhs_r = sys_._to_rank(rhs)
            for w in rhs_r:
                if (len(w), w) >= (len(lhs_r), lhs_r):
                    raise UnorientableRelationError(f"{label}: rhs word not smaller than lhs")
            sys_._install(RewriteRule(lhs_r, list(rhs_r.items()), label))
            gens.update(lhs)
            gens.update(rhs.symbols())
        sys_.generators = frozenset(gens)
        return sys_

    # -- translation ------------------------------------------------------------

    def _to_rank(self, x: Element) -> dict:
        if self.order.is_default:
            return dict(x.terms)
        rk = self.order.rank
        return {tuple(rk(k) for k in w): c for w, c in x.terms.items()}

    def _from_rank(self, terms: dict) -> Element:
        if self.order.is_default:
            return Element(terms)
        ur = self.order.unrank
        return Element({tuple(ur(r) for r in w): c for w, c in terms.items()})

    def rule_view(self, rule: RewriteRule) -> tuple[tuple, Element]:
        ur = self.order.unrank
        return tuple(ur(r) for r in rule.lhs), self._from_rank(dict(rule.rhs))

    # -- matching ---------------------------------------------------------------

    def match(self, w: tuple, rightmost: bool = False):
        n = len(w)
        positions = range(n - 1, -1, -1) if rightmost else range(n)
        idx = self.index
        firsts = self.firsts
        lengths = self.lengths
        if () in idx:
            return 0, idx[()]
        for i in positions:
            if w[i] not in firsts:
                continue
            for L in lengths:
                if i + L > n:
                    break
                r = idx.get(w[i : i + L])
                if r is not None:
                    return i, r
        return None

    # -- export -------------------------------------------------------------------

    def summary(self) -> dict:
        unresolved = [e for e in self.completion_log if e["outcome"] not in ("resolved", "new-rule")]
        return {
            "rules": len(self.rules),
            "derived_rules": sum(1 for r in self.rules if r.derived),
            "pending": len(self.pending),
            "degree_bound": self.degree_bound,
            "unresolved_overlaps": len(unresolved),
            "partial": self.partial,
            **self.stats,
        }

    def rules_text(self) -> list[str]:
        out = []
        for r in self.rules:
            lhs, rhs = self.rule_view(r)
            out.append(f"{r.label}: {format_word(lhs)} -> {rhs}")
        return out

    def __len__(self):
        return len(self.rules)


# -- orientation ---------------------------------------------------------------


def _leading(terms: dict):
    return max(terms, key=lambda w: (len(w), w))


def orient(pres: Presentation, order: WordOrder | None = None) -> RuleSystem:
    return orient_elements(
        ((rel.label, rel.element) for rel in pres.relations),
        order,
        (g.key for g in pres.generators),
        pres.kind,
    )


def orient_elements(items: Iterable[tuple[str, Element]], order: WordOrder | None = None, generators: Iterable[int] = (), name: str = "") -> RuleSystem:
    """One rule per (label, element) pair; the leading word becomes the lhs."""
    system = RuleSystem(order or WordOrder(), generators, name)
    gens = set(system.generators)
    for label, el in items:
        _orient_into(system, el, label)
        gens |= el.symbols()
    system.generators = frozenset(gens)
    return system


def _orient_into(system: RuleSystem, el: Element, label: str, derived=False, certificate=None) -> RewriteRule:
    if el.is_zero():
        raise UnorientableRelationError(f"relation {label} is zero and has no leading word")
    for k in el.symbols():
        if not system.order.covers(k):
            raise UnorientableRelationError(
                f"relation {label}: symbol {symbol_for_key(k).name} is not ranked by the word order"
            )
    terms = system._to_rank(el)
    lead = _leading(terms)
    c = terms.pop(lead)
    inv = -c.inverse()
    rule = RewriteRule(lead, [(w, v * inv) for w, v in terms.items()], label, derived, certificate)
    system._install(rule)
    return rule


# -- reduction -----------------------------------------------------------------


def _neg(w: tuple) -> tuple:
    return (-len(w), tuple(-r for r in w))


def _reduce_terms(terms: dict, system: RuleSystem, max_steps: int, record: bool, rightmost=False):
    terms = dict(terms)
    heap = [(_neg(w), w) for w in terms]
    heapq.heapify(heap)
    normal: dict = {}
    trace: list = []
    steps = 0
    partial = False
    match = system.match
    while heap:
        _, w = heapq.heappop(heap)
        c = terms.pop(w, None)
        if c is None:
            continue
        m = match(w, rightmost)
        if m is None:
            normal[w] = c
            continue
        if steps >= max_steps:
            partial = True
            normal[w] = c
            for _, w2 in heap:
                c2 = terms.pop(w2, None)
                if c2 is not None:
                    normal[w2] = c2
            break
        steps += 1
        pos, rule = m
        if record:
            trace.append(TraceStep(steps, rule.label, pos, w, c))
        pre, post = w[:pos], w[pos + len(rule.lhs) :]
        for rw, rc in rule.rhs:
            nw = pre + rw + post
            nc = c * rc
            old = terms.get(nw)
            if old is None:
                terms[nw] = nc
                heapq.heappush(heap, (_neg(nw), nw))
            else:
                s = old + nc
                if s.is_zero():
                    del terms[nw]
                else:
                    terms[nw] = s
    return normal, trace, steps, partial


def reduce(x: Element, rules: RuleSystem, max_steps: int = DEFAULT_MAX_STEPS, trace: bool = False, rightmost: bool = False) -> Reduction:
    """Normal form of x modulo the rule system (leftmost-shortest match)."""
    normal, tr, steps, partial = _reduce_terms(rules._to_rank(x), rules, max_steps, trace, rightmost)
    return Reduction(rules._from_rank(normal), tr, steps, partial)


def replay_trace(x: Element, trace: list, rules: RuleSystem) -> Element:
    """Subtract the recorded multiples of rule equations from x; equals the normal form when sound."""
    terms = rules._to_rank(x)
    acc = Element(terms)
    for st in trace:
        rule = rules.archive[st.rule]
        pre, post = st.word[: st.position], st.word[st.position + len(rule.lhs) :]
        eq = {pre + w + post: c * st.coeff for w, c in rule.equation_terms().items()}
        acc = acc - Element(eq)
    return rules._from_rank(acc.terms)


# -- completion ----------------------------------------------------------------


def _overlaps(a: tuple, b: tuple):
    """Proper overlaps: suffix of a equals prefix of b."""
    for k in range(min(len(a), len(b)) - 1, 0, -1):
        if a[-k:] == b[:k]:
            yield k


def _spoly(ra: RewriteRule, rb: RewriteRule, k: int) -> dict:
    # word = a + b[k:] = a[:-k] + b
    tail = rb.lhs[k:]
    head = ra.lhs[: len(ra.lhs) - k]
    d: dict = {}
    for words, sign in (([(w + tail, c) for w, c in ra.rhs]), 1), (([(head + w, c) for w, c in rb.rhs]), -1):
        for nw, c in words:
            c = c if sign > 0 else -c
            s = d.get(nw)
            d[nw] = c if s is None else s + c
    return {w: c for w, c in d.items() if not c.is_zero()}


def complete(
    rules: RuleSystem,
    max_degree: int = DEFAULT_MAX_DEGREE,
    max_new_rules: int = DEFAULT_MAX_NEW_RULES,
    max_steps: int = DEFAULT_MAX_STEPS,
    certificates: bool = False,
) -> RuleSystem:
    """Bounded critical-pair completion; returns a new RuleSystem."""
    system = rules.copy()
    system.degree_bound = max_degree
    log = system.completion_log
    counter = [0]
    new_rules = 0
    resolved = 0
    queue: list = []
    seq = [0]
    alive: set[str] = set()

    def push_pairs(r: RewriteRule):
        for other in list(system.rules):
            for a, b in ((r, other), (other, r)) if other is not r else ((r, r),):
                for k in _overlaps(a.lhs, b.lhs):
                    deg = len(a.lhs) + len(b.lhs) - k
                    seq[0] += 1
                    heapq.heappush(queue, (deg, seq[0], a.label, b.label, k))

    def add_equation(terms: dict, label_hint: str, cert: Optional[dict]) -> Optional[RewriteRule]:
        """Reduce an equation; orient and install it if nonzero; interreduce."""
        nonlocal new_rules
        normal, tr, _, partial = _reduce_terms(terms, system, max_steps, certificates)
        if partial:
            log.append({"outcome": "partial-reduction", "source": label_hint})
            system.partial = True
            return None
        if not normal:
            return None
        counter[0] += 1
        lead = _leading(normal)
        c = normal.pop(lead)
        inv = -c.inverse()
        if cert is not None and certificates:
            cert = dict(cert, trace=tr, scale=c)
        rule = RewriteRule(lead, [(w, v * inv) for w, v in normal.items()], f"cp{counter[0]}", True, cert)
        # interreduce: retire rules whose lhs contains the new lhs
        victims = [r for r in system.rules if _contains(r.lhs, lead)]
        system._install(rule)
        alive.add(rule.label)
        new_rules += 1
        for v in victims:
            system._retire(v)
            alive.discard(v.label)
            requeue.append(v)
        push_pairs(rule)
        return rule

    requeue: list[RewriteRule] = []
    # initial interreduction, then duplicates left pending by orient
    for r in list(system.rules):
        others = [o for o in system.rules if o is not r and _contains(r.lhs, o.lhs)]
        if others:
            system._retire(r)
            requeue.append(r)
    requeue.extend(system.pending)
    system.pending = []
    for r in system.rules:
        alive.add(r.label)
    for i, a in enumerate(system.rules):
        for b in system.rules[i:]:
            for x, y in ((a, b), (b, a)) if a is not b else ((a, a),):
                for k in _overlaps(x.lhs, y.lhs):
                    seq[0] += 1
                    heapq.heappush(queue, (len(x.lhs) + len(y.lhs) - k, seq[0], x.label, y.label, k))

    def drain_requeue():
        while requeue:
            r = requeue.pop(0)
            add_equation(r.equation_terms(), r.label, {"kind": "interreduce", "source": r.label})

    drain_requeue()
    budget_hit = False
    while queue:
        deg, _, la, lb, k = heapq.heappop(queue)
        if la not in alive or lb not in alive:
            continue
        ra, rb = system.archive[la], system.archive[lb]
        if deg > max_degree or budget_hit:
            log.append({
                "outcome": "skipped-budget" if budget_hit else "skipped-degree",
                "pair": [la, lb],
                "overlap": format_word(tuple(system.order.unrank(r) for r in ra.lhs + rb.lhs[k:])),
                "degree": deg,
            })
            continue
        before = new_rules
        add_equation(
            _spoly(ra, rb, k),
            f"{la}|{lb}",
            {"kind": "overlap", "pair": [la, lb], "k": k},
        )
        drain_requeue()
        if new_rules == before:
            resolved += 1
        else:
            log.append({"outcome": "new-rule", "pair": [la, lb], "degree": deg, "rule": f"cp{counter[0]}"})
        if new_rules >= max_new_rules:
            budget_hit = True
            system.partial = True
    system.stats = {"resolved_overlaps": resolved, "new_rules": new_rules}
    return system


def _contains(big: tuple, small: tuple) -> bool:
    if len(small) > len(big):
        return False
    L = len(small)
    for i in range(len(big) - L + 1):
        if big[i : i + L] == small:
            return True
    return False


def replay_certificate(system: RuleSystem, rule: RewriteRule) -> bool:
    """Recompute a derived rule from its certificate and check it exactly."""
    cert = rule.certificate
    if cert is None or "trace" not in cert:
        return False
    if cert["kind"] == "overlap":
        ra, rb = system.archive[cert["pair"][0]], system.archive[cert["pair"][1]]
        start = _spoly(ra, rb, cert["k"])
    else:
        start = system.archive[cert["source"]].equation_terms()
    acc = Element(start)
    for st in cert["trace"]:
        r = system.archive[st.rule]
        pre, post = st.word[: st.position], st.word[st.position + len(r.lhs) :]
        acc = acc - Element({pre + w + post: c * st.coeff for w, c in r.equation_terms().items()})
    expected = Element(rule.equation_terms()).scale(cert["scale"])
    return acc == expected


# -- verification ----------------------------------------------------------------


def verify_relation(
    target: Element,
    rules: RuleSystem,
    rep_oracle=None,
    max_steps: int = DEFAULT_MAX_STEPS,
    trace: bool = False,
) -> VerificationStatus:
    """ProvedZero / RepConsistent / Failed / Inconclusive for one target.

    ``rep_oracle`` is a validated RepAssignment or a sequence of them.
    """
    extra = target.symbols() - rules.generators
    if rules.generators and extra:
        names = sorted(symbol_for_key(k).name for k in extra)
        raise AlphabetMismatchError(f"symbols {names} are not in the rule system's alphabet")
    red = reduce(target, rules, max_steps, trace)
    reps = [] if rep_oracle is None else (list(rep_oracle) if isinstance(rep_oracle, (list, tuple)) else [rep_oracle])
    nonzero = []
    if reps:
        from .matrep import evaluate

        nonzero = [rep.kind for rep in reps if not evaluate(target, rep).is_zero()]
    if red.result.is_zero() and not red.partial:
        if nonzero:
            raise OracleIncoherence(f"target reduced to zero but its {nonzero[0]} image is nonzero: {target}")
        return VerificationStatus(Status.PROVED_ZERO, red.steps, red.trace, "rewrite")
    detail = "step budget exhausted" if red.partial else "nonzero normal form"
    method = "+".join(rep.kind for rep in reps)
    if nonzero:
        return VerificationStatus(Status.FAILED, red.steps, red.trace, method, f"nonzero {nonzero[0]} image", red.result)
    if reps:
        return VerificationStatus(Status.REP_CONSISTENT, red.steps, red.trace, method, detail, red.result)
    return VerificationStatus(Status.INCONCLUSIVE, red.steps, red.trace, "rewrite", detail, red.result)


def trace_to_json(trace: list, order: WordOrder | None = None) -> str:
    return json.dumps([t.to_dict(order) for t in trace])
