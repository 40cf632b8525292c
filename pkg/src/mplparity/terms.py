"""Symbolic generators and linear combinations for the depth-reduction engine.

A generator over ambient variables z_1..z_N is a product of

  * Ber factors ber_k(z_{i,N}) (Bernoulli polynomial in log(-z_{i,N}),
    weight k >= 1, argument always running to the last variable), at most
    one per start index, and
  * Li factors Li_{n_1..n_s}(x_1..x_s) whose arguments are consecutive
    products z_{i,j} = z_i ... z_j, possibly inverted.

The canonical form demands the Li arguments, read left to right across all
factors, to be disjoint, totally ordered and inversion-free; intermediate
generators may carry inverted suffix arguments and (in closed formulas)
reversed argument orders.  Coefficients are exact Fractions throughout;
the engine only ever produces integers in this basis, which is asserted
rather than assumed.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, NamedTuple

from .rationals import bernoulli_number


class RewriteError(ValueError):
    pass


class ConsProd(NamedTuple):
    """Consecutive product z_{start} ... z_{end}, or its reciprocal."""

    start: int
    end: int
    inverted: bool = False

    def check(self, ambient: int) -> None:
        if not (1 <= self.start <= self.end <= ambient):
            raise ValueError(f"bad span {self} for ambient {ambient}")

    def text(self) -> str:
        core = "*".join(f"z{i}" for i in range(self.start, self.end + 1))
        return f"1/({core})" if self.inverted and self.end > self.start else (
            f"1/{core}" if self.inverted else core
        )


class LiFactor(NamedTuple):
    indices: tuple[int, ...]
    args: tuple[ConsProd, ...]

    @property
    def weight(self) -> int:
        return sum(self.indices)

    @property
    def depth(self) -> int:
        return len(self.indices)

    def has_inverted(self) -> bool:
        return any(a.inverted for a in self.args)


class Generator(NamedTuple):
    ambient: int
    bers: tuple[tuple[int, int], ...]  # sorted (start, weight), weight >= 1
    lis: tuple[LiFactor, ...]


def gen_weight(g: Generator) -> int:
    return sum(k for _, k in g.bers) + sum(f.weight for f in g.lis)


def gen_depth(g: Generator) -> int:
    return sum(f.depth for f in g.lis)


def gen_sort_key(g: Generator):
    return (
        gen_weight(g),
        gen_depth(g),
        g.bers,
        tuple((f.indices, tuple((a.start, a.end, a.inverted) for a in f.args)) for f in g.lis),
    )


def make_generator(ambient: int, bers: Iterable[tuple[int, int]], lis: Iterable[LiFactor]) -> Generator:
    bs = sorted(bers)
    starts = [s for s, _ in bs]
    if len(set(starts)) != len(starts):
        raise RewriteError("two Ber factors with the same start index")
    for s, k in bs:
        if not (1 <= s <= ambient) or k < 1:
            raise ValueError(f"bad Ber factor ({s},{k}) for ambient {ambient}")
    ls = sorted(lis, key=lambda f: (f.args[0].start, f.args[0].end))
    for f in ls:
        if len(f.indices) != len(f.args) or not f.indices:
            raise ValueError(f"malformed Li factor {f}")
        if any(n < 1 for n in f.indices):
            raise ValueError(f"nonpositive Li index in {f}")
        for a in f.args:
            a.check(ambient)
    return Generator(ambient, tuple(bs), tuple(ls))


def unit_generator(ambient: int) -> Generator:
    return Generator(ambient, (), ())


def validate_generator(g: Generator, depth_bound: int, weight: int) -> bool:
    """Strict canonical-form check: Li argument spans disjoint, increasing,
    inversion-free; total depth <= depth_bound; total weight == weight."""
    if gen_weight(g) != weight or gen_depth(g) > depth_bound:
        return False
    for s, k in g.bers:
        if k < 1 or not (1 <= s <= g.ambient):
            return False
    prev_end = 0
    for f in g.lis:
        for a in f.args:
            if a.inverted:
                return False
            if not (prev_end < a.start <= a.end <= g.ambient):
                return False
            prev_end = a.end
    return True


class LinComb:
    """Rational linear combination of generators over one ambient list."""

    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: int, terms: dict[Generator, Fraction] | None = None) -> None:
        self.ambient = ambient
        self.terms: dict[Generator, Fraction] = {}
        if terms:
            for g, c in terms.items():
                self.add_term(g, c)

    def add_term(self, g: Generator, c) -> None:
        if g.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        c = Fraction(c)
        if c == 0:
            return
        new = self.terms.get(g, Fraction(0)) + c
        if new == 0:
            self.terms.pop(g, None)
        else:
            self.terms[g] = new

    @staticmethod
    def zero(ambient: int) -> "LinComb":
        return LinComb(ambient)

    @staticmethod
    def single(g: Generator, c=1) -> "LinComb":
        return LinComb(g.ambient, {g: Fraction(c)})

    def __add__(self, other: "LinComb") -> "LinComb":
        out = LinComb(self.ambient, dict(self.terms))
        for g, c in other.terms.items():
            out.add_term(g, c)
        return out

    def __sub__(self, other: "LinComb") -> "LinComb":
        out = LinComb(self.ambient, dict(self.terms))
        for g, c in other.terms.items():
            out.add_term(g, -c)
        return out

    def scale(self, c) -> "LinComb":
        c = Fraction(c)
        out = LinComb(self.ambient)
        if c == 0:
            return out
        for g, k in self.terms.items():
            out.terms[g] = k * c
        return out

    def mul_generator(self, h: Generator, c=1) -> "LinComb":
        """Product with a single generator (Ber starts must not collide)."""
        out = LinComb(self.ambient)
        for g, k in self.terms.items():
            out.add_term(generator_product(g, h), k * Fraction(c))
        return out

    def map_terms(self, fn) -> "LinComb":
        """fn(generator, coeff) -> LinComb contribution; results are summed."""
        out = LinComb(self.ambient)
        for g, c in self.terms.items():
            piece = fn(g, c)
            for g2, c2 in piece.terms.items():
                out.add_term(g2, c2)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinComb)
            and self.ambient == other.ambient
            and self.terms == other.terms
        )

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def max_depth(self) -> int:
        return max((gen_depth(g) for g in self.terms), default=0)

    def weights(self) -> set[int]:
        return {gen_weight(g) for g in self.terms}

    def all_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: gen_sort_key(kv[0]))

    def __repr__(self) -> str:
        return f"LinComb(N={self.ambient}, {len(self.terms)} terms)"


def generator_product(g: Generator, h: Generator) -> Generator:
    if g.ambient != h.ambient:
        raise ValueError("ambient mismatch in product")
    return make_generator(g.ambient, g.bers + h.bers, g.lis + h.lis)


def normalize(c: LinComb) -> LinComb:
    """Drop zero coefficients and merge equal generators.  LinComb maintains
    this invariant on construction, so this is idempotent by design; kept as
    an explicit operation for callers that build term dicts directly."""
    return LinComb(c.ambient, dict(c.terms))


# ---------------------------------------------------------------------------
# local rewrite rules


def ber_generator(ambient: int, start: int, weight: int) -> Generator:
    return make_generator(ambient, [(start, weight)], [])


def li_generator(ambient: int, indices, args) -> Generator:
    return make_generator(ambient, [], [LiFactor(tuple(indices), tuple(args))])


def invert_depth1(n: int, arg: ConsProd, ambient: int) -> LinComb:
    """Replacement for the symbol Li_n(1/x):

        Li_n(1/x) = (-1)^n ( -Li_n(x) - ber_n(x) )

    The Ber factor requires x to run to the last ambient variable.
    """
    if arg.end != ambient:
        raise RewriteError(f"Ber factor argument {arg} must run to z_{ambient}")
    plain = ConsProd(arg.start, arg.end, False)
    sign = Fraction((-1) ** (n + 1))
    out = LinComb(ambient)
    out.add_term(li_generator(ambient, (n,), (plain,)), sign)
    out.add_term(ber_generator(ambient, plain.start, n), sign)
    return out


def stuffle_swap_depth2(n1: int, n2: int, a1: ConsProd, a2: ConsProd, ambient: int) -> LinComb:
    """Quasi-shuffle rewrite of the reversed symbol Li_{n2,n1}(x2, x1):

        Li_{n2,n1}(x2,x1) = Li_{n1}(x1) Li_{n2}(x2)
                            - Li_{n1,n2}(x1,x2) - Li_{n1+n2}(x1*x2)

    x1, x2 must be adjacent consecutive products (x1 immediately left of x2)
    so that x1*x2 is again a consecutive product.
    """
    if a1.inverted or a2.inverted:
        raise RewriteError("stuffle swap expects plain arguments")
    if a1.end + 1 != a2.start:
        raise RewriteError(f"arguments {a1}, {a2} are not adjacent")
    merged = ConsProd(a1.start, a2.end, False)
    out = LinComb(ambient)
    out.add_term(
        make_generator(ambient, [], [LiFactor((n1,), (a1,)), LiFactor((n2,), (a2,))]), 1
    )
    out.add_term(li_generator(ambient, (n1, n2), (a1, a2)), -1)
    out.add_term(li_generator(ambient, (n1 + n2,), (merged,)), -1)
    return out


def expand_reversed_factors(lc: LinComb) -> LinComb:
    """Rewrite depth-2 Li factors whose two arguments appear in decreasing
    span order (closed-formula compaction) via the quasi-shuffle."""

    def fix(g: Generator, c: Fraction) -> LinComb:
        for idx, f in enumerate(g.lis):
            if f.depth == 2 and not f.has_inverted() and f.args[0].start > f.args[1].start:
                rest = make_generator(g.ambient, g.bers, g.lis[:idx] + g.lis[idx + 1:])
                swapped = stuffle_swap_depth2(
                    f.indices[1], f.indices[0], f.args[1], f.args[0], g.ambient
                )
                return expand_reversed_factors(swapped.mul_generator(rest, c))
        return LinComb(g.ambient, {g: c})

    return lc.map_terms(fix)


# ---------------------------------------------------------------------------
# Ber -> log expansion


class LogGenerator(NamedTuple):
    """(i*pi)^ipi * prod log^{p}(-z_{start..N}) * prod Li factors."""

    ambient: int
    ipi: int
    logs: tuple[tuple[int, int], ...]  # (start, power), sorted, power >= 1
    lis: tuple[LiFactor, ...]


class LogExpansion:
    __slots__ = ("ambient", "terms")

    def __init__(self, ambient: int, terms: dict[LogGenerator, Fraction] | None = None) -> None:
        self.ambient = ambient
        self.terms: dict[LogGenerator, Fraction] = {}
        if terms:
            for g, c in terms.items():
                self.add_term(g, c)

    def add_term(self, g: LogGenerator, c) -> None:
        c = Fraction(c)
        if c == 0:
            return
        new = self.terms.get(g, Fraction(0)) + c
        if new == 0:
            self.terms.pop(g, None)
        else:
            self.terms[g] = new

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LogExpansion)
            and self.ambient == other.ambient
            and self.terms == other.terms
        )

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __repr__(self) -> str:
        return f"LogExpansion(N={self.ambient}, {len(self.terms)} terms)"


def _ber_log_pieces(k: int) -> list[tuple[int, int, Fraction]]:
    """ber_k(x) = sum over even j of c_j * (i*pi)^j * log^{k-j}(-x) with
    c_j = (2^{1-j}-1) B_j 2^j / j! / (k-j)!  (B_1(1/2) = 0 kills odd j)."""
    out = []
    fact = [1] * (k + 1)
    for i in range(2, k + 1):
        fact[i] = fact[i - 1] * i
    for j in range(0, k + 1, 2):
        c = (Fraction(2) ** (1 - j) - 1) * bernoulli_number(j) * (2 ** j)
        c /= fact[j] * fact[k - j]
        out.append((j, k - j, c))
    return out


def expand_ber_to_logs(lc: LinComb) -> LogExpansion:
    """Equivalent expansion over (i*pi)^k0 * prod log^{k_i}(-z_{i,N}) * Li's.

    Powers of 2*pi*i appear as rational multiples of (i*pi)^j; even powers
    can be rendered as zeta(2)-powers at display time.
    """
    out = LogExpansion(lc.ambient)
    for g, coeff in lc.terms.items():
        pieces = [(0, (), coeff)]
        for start, k in g.bers:
            nxt = []
            for ipi, logs, c in pieces:
                for j, p, cj in _ber_log_pieces(k):
                    logs2 = logs + ((start, p),) if p else logs
                    nxt.append((ipi + j, logs2, c * cj))
            pieces = nxt
        for ipi, logs, c in pieces:
            merged: dict[int, int] = {}
            for s, p in logs:
                merged[s] = merged.get(s, 0) + p
            key = LogGenerator(
                lc.ambient, ipi, tuple(sorted(merged.items())), g.lis
            )
            out.add_term(key, c)
    return out


# ---------------------------------------------------------------------------
# serialization


def consprod_to_dict(a: ConsProd) -> dict:
    return {"start": a.start, "end": a.end, "inverted": a.inverted}


def lincomb_to_dict(lc: LinComb) -> dict:
    return {
        "ambient": lc.ambient,
        "terms": [
            {
                "coeff": str(c),
                "bers": [{"start": s, "weight": k} for s, k in g.bers],
                "lis": [
                    {
                        "indices": list(f.indices),
                        "args": [consprod_to_dict(a) for a in f.args],
                    }
                    for f in g.lis
                ],
            }
            for g, c in lc.sorted_items()
        ],
    }


def lincomb_from_dict(data: dict) -> LinComb:
    amb = data["ambient"]
    out = LinComb(amb)
    for t in data["terms"]:
        bers = [(b["start"], b["weight"]) for b in t["bers"]]
        lis = [
            LiFactor(
                tuple(f["indices"]),
                tuple(ConsProd(a["start"], a["end"], a["inverted"]) for a in f["args"]),
            )
            for f in t["lis"]
        ]
        out.add_term(make_generator(amb, bers, lis), Fraction(t["coeff"]))
    return out


def lincomb_to_json(lc: LinComb, **extra) -> str:
    doc = dict(extra)
    doc.update(lincomb_to_dict(lc))
    return json.dumps(doc, indent=1, sort_keys=False)


def lincomb_to_text(lc: LinComb) -> str:
    if lc.is_zero():
        return "0"
    bits = []
    for g, c in lc.sorted_items():
        factors = [f"ber_{k}(" + ConsProd(s, g.ambient).text() + ")" for s, k in g.bers]
        for f in g.lis:
            idx = ",".join(map(str, f.indices))
            args = ", ".join(a.text() for a in f.args)
            factors.append(f"Li_{{{idx}}}({args})")
        if not factors:
            factors = ["1"]
        mag = abs(c)
        coeff = "" if mag == 1 else f"{mag}*"
        term = coeff + "*".join(factors)
        bits.append(("- " if c < 0 else "+ ") + term)
    text = " ".join(bits)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _span_latex(a: ConsProd) -> str:
    core = (
        f"z_{{{a.start}}}"
        if a.start == a.end
        else " ".join(f"z_{{{i}}}" for i in range(a.start, a.end + 1))
    )
    return f"\\tfrac{{1}}{{{core}}}" if a.inverted else core


def lincomb_to_latex(lc: LinComb) -> str:
    if lc.is_zero():
        return "0"
    bits = []
    for g, c in lc.sorted_items():
        factors = [
            f"\\operatorname{{ber}}_{{{k}}}\\!\\left({_span_latex(ConsProd(s, g.ambient))}\\right)"
            for s, k in g.bers
        ]
        for f in g.lis:
            idx = ",".join(map(str, f.indices))
            args = ", ".join(_span_latex(a) for a in f.args)
            factors.append(f"\\operatorname{{Li}}_{{{idx}}}\\!\\left({args}\\right)")
        if not factors:
            factors = ["1"]
        mag = abs(c)
        coeff = "" if mag == 1 else (
            f"\\tfrac{{{mag.numerator}}}{{{mag.denominator}}}" if mag.denominator != 1 else str(mag)
        )
        bits.append(("-" if c < 0 else "+") + coeff + " ".join(factors))
    text = " ".join(bits)
    return text[1:] if text.startswith("+") else text
