"""The Z2-graded free associative algebra over ``Scalar``.

Generator symbols are interned and identified by an integer key whose
natural order is the default word order: family precedence first, then
indices.  A word is a tuple of keys, an :class:`Element` a finitely
supported map word -> Scalar.  Words compare degree-first, then
lexicographically, i.e. by ``(len(w), w)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .scalar import ONE, ZERO, Scalar, parse_scalar

__all__ = [
    "FAMILIES",
    "GeneratorSymbol",
    "Element",
    "MixedParityError",
    "StarUndefinedError",
    "ElementParseError",
    "symbol",
    "symbol_for_key",
    "free_symbol",
    "word_parity",
    "word_key",
    "graded_bracket",
    "br",
    "star_map",
    "substitute",
    "format_word",
    "parse_element",
]

Word = tuple  # tuple[int, ...]

# family -> (precedence bucket, bar flag, number of indices)
# k/kbar and L/Lbar share a bucket so that inverse pairs are adjacent.
FAMILIES: dict[str, tuple[int, int, int]] = {
    "free": (0, 0, 1),
    "E": (1, 0, 2),
    "ap": (2, 0, 1),
    "f": (3, 0, 1),
    "h": (4, 0, 1),
    "H": (5, 0, 1),
    "k": (6, 0, 1),
    "kbar": (6, 1, 1),
    "L": (7, 0, 1),
    "Lbar": (7, 1, 1),
    "e": (8, 0, 1),
    "am": (9, 0, 1),
}
_BUCKET_FAMILY = {(b, bar): fam for fam, (b, bar, _) in FAMILIES.items()}

_STAR = {
    "e": "f",
    "f": "e",
    "k": "kbar",
    "kbar": "k",
    "L": "Lbar",
    "Lbar": "L",
    "ap": "am",
    "am": "ap",
    "h": "h",
    "H": "H",
    "E": "E",
}

_FREE_NAMES = "abcd"


class MixedParityError(ValueError):
    """A bracket argument is not homogeneous."""


class StarUndefinedError(KeyError):
    pass


class ElementParseError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSymbol:
    family: str
    index: tuple[int, ...]
    parity: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if len(self.index) != FAMILIES[self.family][2]:
            raise ValueError(f"family {self.family} takes {FAMILIES[self.family][2]} indices")
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if any(not 0 <= i < 128 for i in self.index):
            raise ValueError("indices must lie in [0, 128)")

    @property
    def key(self) -> int:
        bucket, bar, _ = FAMILIES[self.family]
        i = self.index[0]
        j = self.index[1] if len(self.index) > 1 else 0
        return ((((bucket << 7) | i) << 7 | j) << 1 | bar) << 1 | self.parity

    @property
    def name(self) -> str:
        if self.family == "free":
            i = self.index[0]
            return _FREE_NAMES[i] if i < len(_FREE_NAMES) else f"x{i}"
        if self.family == "E":
            return f"E_{self.index[0]}_{self.index[1]}"
        return f"{self.family}_{self.index[0]}"

    def star(self) -> "GeneratorSymbol":
        if self.family not in _STAR:
            raise StarUndefinedError(f"{self.name} has no star image")
        if self.family == "E":
            return symbol("E", self.index[1], self.index[0], parity=self.parity)
        return symbol(_STAR[self.family], *self.index, parity=self.parity)

    def __str__(self):
        return self.name


_REGISTRY: dict[int, GeneratorSymbol] = {}


def symbol(family: str, *index: int, parity: int = 0) -> GeneratorSymbol:
    s = GeneratorSymbol(family, tuple(index), parity)
    _REGISTRY.setdefault(s.key, s)
    return s


def free_symbol(i: int, parity: int = 0) -> GeneratorSymbol:
    return symbol("free", i, parity=parity)


def symbol_for_key(key: int) -> GeneratorSymbol:
    s = _REGISTRY.get(key)
    if s is None:
        parity = key & 1
        bar = (key >> 1) & 1
        j = (key >> 2) & 127
        i = (key >> 9) & 127
        fam = _BUCKET_FAMILY[(key >> 16, bar)]
        idx = (i, j) if FAMILIES[fam][2] == 2 else (i,)
        s = symbol(fam, *idx, parity=parity)
    return s


def word_parity(w: Word) -> int:
    p = 0
    for k in w:
        p ^= k & 1
    return p


def word_key(w: Word):
    """Default degree-lexicographic sort key."""
    return (len(w), w)


def format_word(w: Word) -> str:
    return " ".join(symbol_for_key(k).name for k in w)


class Element:
    """Immutable linear combination of words with Scalar coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, Union[Scalar, int]] | None = None):
        d = {}
        if terms:
            for w, c in terms.items():
                c = c if isinstance(c, Scalar) else Scalar(c)
                if not c.is_zero():
                    d[tuple(w)] = c
        self.terms: dict[Word, Scalar] = d
        self._hash = None

    @classmethod
    def _wrap(cls, d: dict) -> "Element":
        e = object.__new__(cls)
        e.terms = d
        e._hash = None
        return e

    @classmethod
    def sym(cls, s: GeneratorSymbol) -> "Element":
        return cls._wrap({(s.key,): ONE})

    @classmethod
    def word(cls, w: Iterable, coeff: Scalar = ONE) -> "Element":
        w = tuple(x.key if isinstance(x, GeneratorSymbol) else x for x in w)
        return cls._wrap({w: coeff}) if not coeff.is_zero() else cls._wrap({})

    @classmethod
    def const(cls, c: Union[Scalar, int]) -> "Element":
        c = c if isinstance(c, Scalar) else Scalar(c)
        return cls._wrap({(): c}) if not c.is_zero() else cls._wrap({})

    @classmethod
    def one(cls) -> "Element":
        return cls._wrap({(): ONE})

    @classmethod
    def zero(cls) -> "Element":
        return cls._wrap({})

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.items())

    def items(self) -> list[tuple[Word, Scalar]]:
        """Terms in decreasing default word order."""
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]), reverse=True)

    def coefficient(self, w: Word) -> Scalar:
        return self.terms.get(tuple(w), ZERO)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def symbols(self) -> set[int]:
        return {k for w in self.terms for k in w}

    def parities(self) -> set[int]:
        return {word_parity(w) for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.parities()) <= 1

    def parity(self) -> int:
        ps = self.parities()
        if len(ps) > 1:
            raise MixedParityError(f"element {self} has mixed parity")
        return ps.pop() if ps else 0

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Element):
            if isinstance(other, (Scalar, int)):
                other = Element.const(other)
            else:
                return NotImplemented
        d = dict(self.terms)
        for w, c in other.terms.items():
            s = d.get(w)
            if s is None:
                d[w] = c
            else:
                s = s + c
                if s.is_zero():
                    del d[w]
                else:
                    d[w] = s
        return Element._wrap(d)

    __radd__ = __add__

    def __neg__(self):
        return Element._wrap({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            if isinstance(other, (Scalar, int)):
                other = Element.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Union[Scalar, int]) -> "Element":
        c = c if isinstance(c, Scalar) else Scalar(c)
        if c.is_zero():
            return Element.zero()
        if c == ONE:
            return self
        return Element._wrap({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        if not isinstance(other, Element):
            return NotImplemented
        d: dict = {}
        for wa, ca in self.terms.items():
            for wb, cb in other.terms.items():
                w = wa + wb
                c = ca * cb
                s = d.get(w)
                d[w] = c if s is None else s + c
        return Element._wrap({w: c for w, c in d.items() if not c.is_zero()})

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        result = Element.one()
        for _ in range(k):
            result = result * self
        return result

    def map_coefficients(self, f) -> "Element":
        return Element({w: f(c) for w, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (Scalar, int)):
            other = Element.const(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- text -------------------------------------------------------------

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"Element('{self}')"


def graded_bracket(a: Element, b: Element, x: Union[Scalar, int] = ONE) -> Element:
    """``ab - (-1)**(deg a * deg b) * x * ba``."""
    x = x if isinstance(x, Scalar) else Scalar(x)
    sign = -1 if (a.parity() & b.parity()) else 1
    return a * b - (b * a).scale(x * sign)


br = graded_bracket


def star_map(a: Element) -> Element:
    """Antilinear antiinvolution: reverses words, stars symbols, bars coefficients."""
    d = {}
    for w, c in a.terms.items():
        d[tuple(symbol_for_key(k).star().key for k in reversed(w))] = c.bar()
    return Element._wrap(d)


def substitute(a: Element, mapping: Mapping[int, Element]) -> Element:
    """Algebra morphism sending symbol keys to elements; other symbols fixed."""
    cache: dict[int, Element] = {}

    def image(k: int) -> Element:
        e = cache.get(k)
        if e is None:
            e = mapping.get(k)
            if e is None:
                e = Element._wrap({(k,): ONE})
            cache[k] = e
        return e

    total = Element.zero()
    prefix_cache: dict[Word, Element] = {(): Element.one()}
    for w, c in a.terms.items():
        # reuse products of shared prefixes
        for cut in range(len(w), -1, -1):
            if w[:cut] in prefix_cache:
                break
        prod = prefix_cache[w[:cut]]
        for i in range(cut, len(w)):
            prod = prod * image(w[i])
            prefix_cache[w[: i + 1]] = prod
        total = total + prod.scale(c)
    return total


# -- text ------------------------------------------------------------------


def format_element(a: Element) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for w, c in a.items():
        text = format_word(w)
        if w and c == ONE:
            body, neg = text, False
        elif w and c == -ONE:
            body, neg = text, True
        else:
            body, neg = (f"[{c}] {text}" if w else f"[{c}]"), False
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f" - {body}" if neg else f" + {body}")
    return "".join(parts)


class _ElementParser:
    def __init__(self, text: str, alphabet: Mapping[str, GeneratorSymbol]):
        self.s = text
        self.i = 0
        self.alphabet = alphabet

    def error(self, msg):
        raise ElementParseError(f"{msg} at offset {self.i} in {self.s!r}")

    def skip(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.s[self.i] if self.i < len(self.s) else ""

    def expect(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.i += 1

    def parse(self) -> Element:
        e = self.expr()
        if self.peek():
            self.error("trailing input")
        return e

    def expr(self) -> Element:
        total = Element.zero()
        sign = 1
        if self.peek() in "+-" and self.peek():
            sign = -1 if self.s[self.i] == "-" else 1
            self.i += 1
        total = self.term().scale(sign)
        while self.peek() and self.peek() in "+-":
            sign = -1 if self.s[self.i] == "-" else 1
            self.i += 1
            total = total + self.term().scale(sign)
        return total

    def term(self) -> Element:
        factors = []
        while True:
            ch = self.peek()
            if not ch or ch in "+-),;":
                break
            factors.append(self.factor())
        if not factors:
            self.error("empty term")
        result = factors[0]
        for f in factors[1:]:
            result = result * f
        return result

    def raw_until(self, closers: str) -> str:
        depth = 0
        start = self.i
        while self.i < len(self.s):
            ch = self.s[self.i]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                if depth == 0 and ch in closers:
                    return self.s[start : self.i]
                depth -= 1
            self.i += 1
        self.error("unterminated scalar")

    def factor(self) -> Element:
        ch = self.peek()
        if ch == "[":
            self.i += 1
            text = self.raw_until("]")
            self.i += 1
            return Element.const(parse_scalar(text))
        if ch == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit():
            start = self.i
            while self.i < len(self.s) and self.s[self.i].isdigit():
                self.i += 1
            return Element.const(int(self.s[start : self.i]))
        if ch.isalpha():
            start = self.i
            while self.i < len(self.s) and (self.s[self.i].isalnum() or self.s[self.i] == "_"):
                self.i += 1
            name = self.s[start : self.i]
            if name == "br" and self.peek() == "(":
                return self.bracket()
            if name not in self.alphabet:
                self.i = start
                self.error(f"unknown symbol {name!r}")
            return Element.sym(self.alphabet[name])
        self.error(f"unexpected {ch!r}")

    def bracket(self) -> Element:
        self.expect("(")
        a = self.expr()
        self.expect(",")
        b = self.expr()
        x = ONE
        if self.peek() == ";":
            self.i += 1
            x = parse_scalar(self.raw_until(")"))
        self.expect(")")
        return graded_bracket(a, b, x)


def parse_element(text: str, alphabet: Mapping[str, GeneratorSymbol] | Iterable[GeneratorSymbol]) -> Element:
    """Parse the textual element syntax.

    Terms are juxtaposed factors; a factor is a symbol name, an integer, a
    bracketed scalar ``[q^2 - 1]``, a parenthesised expression, or a graded
    q-bracket ``br(a, b; x)`` (``br(a, b)`` means x = 1).
    """
    if not isinstance(alphabet, Mapping):
        alphabet = {s.name: s for s in alphabet}
    return _ElementParser(text, alphabet).parse()
