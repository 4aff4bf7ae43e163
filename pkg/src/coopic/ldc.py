"""Linear deterministic model of the interference channel with conferencing.

Each user sends ``q`` bit levels, named ``a1..aq`` for user 1 and ``b1..bq``
for user 2, top level first. Receiver i sees

    y_i = S^(q - n_ii) x_i  XOR  S^(q - n_ij) x_j

so the top ``n`` levels of a user land on rows ``q-n+1 .. q`` of a receiver.
Every quantity is kept as a GF(2) linear form over the message bits, stored
as an ``int`` bitmask: bit ``l-1`` is ``a_l`` and bit ``q+l-1`` is ``b_l``.
"""
from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .bounds import StrategyOrder

__all__ = [
    "LdcChannel",
    "LdcScheme",
    "Cooperation",
    "CoopMode",
    "SchemeError",
    "CheckResult",
    "SearchResult",
    "check_scheme",
    "search_raw",
    "cut_set_bound",
    "gf2_rank",
    "parse_channel",
    "parse_scheme",
    "format_scheme",
]

MAX_SEARCH_LEVELS = 6
MAX_SEARCH_COOP = 2


class SchemeError(ValueError):
    """The scheme is malformed or breaks a cooperation rule."""


# GF(2) helpers on int bitmasks.


class _XorBasis:
    """Incremental row-echelon basis keyed by leading bit."""

    __slots__ = ("_rows",)

    def __init__(self, vectors: Iterable[int] = ()) -> None:
        self._rows: Dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self._rows.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if v:
            self._rows[v.bit_length() - 1] = v
            return True
        return False

    def spans(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self._rows)


def gf2_rank(vectors: Iterable[int]) -> int:
    return len(_XorBasis(vectors))


# Channel and scheme descriptions.


@dataclass(frozen=True)
class LdcChannel:
    """Level counts; ``n_ij`` is user j seen at receiver i, ``k12`` runs from receiver 1 to 2."""

    q: int
    n11: int
    n12: int
    n21: int
    n22: int
    k12: int = 0
    k21: int = 0

    def __post_init__(self) -> None:
        for name in ("q", "n11", "n12", "n21", "n22", "k12", "k21"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ValueError(f"{name} must be an integer, got {v!r}")
        if self.q < 1:
            raise ValueError(f"q must be >= 1, got {self.q}")
        for name in ("n11", "n12", "n21", "n22"):
            v = getattr(self, name)
            if not 0 <= v <= self.q:
                raise ValueError(f"{name} must lie in [0, q={self.q}], got {v}")
        if self.k12 < 0 or self.k21 < 0:
            raise ValueError("cooperation budgets must be >= 0")

    def level_bit(self, user: int, level: int) -> int:
        if not 1 <= level <= self.q:
            raise ValueError(f"level {level} outside 1..{self.q}")
        return 1 << (level - 1 + (self.q if user == 2 else 0))

    def received_rows(self, receiver: int) -> List[int]:
        """Rows of y_receiver, top first, as forms over all 2q message bits."""
        own, cross = (self.n11, self.n12) if receiver == 1 else (self.n22, self.n21)
        other = 3 - receiver
        rows = []
        for r in range(1, self.q + 1):
            form = 0
            for user, n in ((receiver, own), (other, cross)):
                level = r - (self.q - n)
                if level >= 1:
                    form |= self.level_bit(user, level)
            rows.append(form)
        return rows

    def coop_budget(self, sender: int) -> int:
        return self.k12 if sender == 1 else self.k21

    def bit_name(self, index: int) -> str:
        user, level = divmod(index, self.q)
        return f"{'ab'[user]}{level + 1}"

    def to_spec(self) -> str:
        return ",".join(f"{k}={getattr(self, k)}" for k in ("q", "n11", "n12", "n21", "n22", "k12", "k21"))


class CoopMode(enum.Enum):
    RAW = "raw"
    DECODED = "decoded"


@dataclass(frozen=True)
class Cooperation:
    """Functionals one receiver sends to the other.

    In RAW mode each functional is a tuple of received-row indices (1 = top)
    to XOR together; in DECODED mode a tuple of bit names such as ``"a3"``.
    """

    mode: CoopMode = CoopMode.RAW
    functionals: Tuple[Tuple, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "functionals", tuple(tuple(f) for f in self.functionals))
        for f in self.functionals:
            if not f:
                raise SchemeError("empty cooperation functional")

    def __len__(self) -> int:
        return len(self.functionals)


@dataclass(frozen=True)
class LdcScheme:
    placement1: FrozenSet[int]
    placement2: FrozenSet[int]
    coop1: Cooperation = field(default_factory=Cooperation)
    coop2: Cooperation = field(default_factory=Cooperation)
    order: StrategyOrder = StrategyOrder.ONE_ROUND

    def __post_init__(self) -> None:
        object.__setattr__(self, "placement1", frozenset(self.placement1))
        object.__setattr__(self, "placement2", frozenset(self.placement2))

    def placement(self, user: int) -> FrozenSet[int]:
        return self.placement1 if user == 1 else self.placement2

    def coop(self, sender: int) -> Cooperation:
        return self.coop1 if sender == 1 else self.coop2


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    rates: Tuple[int, int] = (0, 0)
    failed_receiver: Optional[int] = None
    undecoded: Tuple[str, ...] = ()

    @property
    def sum_rate(self) -> int:
        return self.rates[0] + self.rates[1]


# Scheme checking.


def _placement_mask(ch: LdcChannel, scheme: LdcScheme) -> int:
    mask = 0
    for user in (1, 2):
        for level in scheme.placement(user):
            mask |= ch.level_bit(user, level)
    return mask


def _parse_bit(ch: LdcChannel, name: str) -> int:
    m = re.fullmatch(r"([ab])(\d+)", name.strip())
    if not m:
        raise SchemeError(f"bad bit name {name!r}; expected a1..a{ch.q} or b1..b{ch.q}")
    return ch.level_bit(1 if m.group(1) == "a" else 2, int(m.group(2)))


def _coop_forms(ch: LdcChannel, scheme: LdcScheme, sender: int, mask: int) -> Tuple[List[int], List[int]]:
    """Forms carried by a cooperation message, plus the bits a DECODED sender must know."""
    coop = scheme.coop(sender)
    rows = ch.received_rows(sender)
    forms, needed = [], []
    for f in coop.functionals:
        form = 0
        if coop.mode is CoopMode.RAW:
            for r in f:
                if isinstance(r, bool) or not isinstance(r, int) or not 1 <= r <= ch.q:
                    raise SchemeError(f"row index {r!r} outside 1..{ch.q}")
                form ^= rows[r - 1]
        else:
            for name in f:
                bit = _parse_bit(ch, name)
                if not bit & mask:
                    raise SchemeError(f"decoded functional references {name}, which carries no message bit")
                form ^= bit
                needed.append(bit)
        forms.append(form & mask)
    return forms, needed


def _own_bits(ch: LdcChannel, mask: int, user: int) -> List[int]:
    lo = 0 if user == 1 else ch.q
    return [1 << i for i in range(lo, lo + ch.q) if mask >> i & 1]


def _missing(ch: LdcChannel, basis: _XorBasis, bits: Iterable[int]) -> Tuple[str, ...]:
    return tuple(ch.bit_name(b.bit_length() - 1) for b in bits if not basis.spans(b))


def check_scheme(ch: LdcChannel, scheme: LdcScheme) -> CheckResult:
    """Decode at each receiver in the declared order.

    One round: both receivers send RAW functionals at once. Two rounds in
    order j-i-j: receiver j sends RAW functionals, receiver i decodes with
    them and may forward DECODED functionals of bits it can already
    resolve, and receiver j decodes last.
    """
    for sender in (1, 2):
        if len(scheme.coop(sender)) > ch.coop_budget(sender):
            raise SchemeError(
                f"receiver {sender} sends {len(scheme.coop(sender))} functionals, budget is {ch.coop_budget(sender)}"
            )
    mask = _placement_mask(ch, scheme)
    rows = {rx: [r & mask for r in ch.received_rows(rx)] for rx in (1, 2)}
    forms, needed = {}, {}
    for sender in (1, 2):
        forms[sender], needed[sender] = _coop_forms(ch, scheme, sender, mask)

    if scheme.order is StrategyOrder.ONE_ROUND:
        for sender in (1, 2):
            if scheme.coop(sender).mode is not CoopMode.RAW:
                raise SchemeError("a one-round scheme can only forward RAW functionals")
        stages = [1, 2]
    else:
        first = 1 if scheme.order is StrategyOrder.TWO_ROUND_1_2_1 else 2
        middle = 3 - first
        if scheme.coop(first).mode is not CoopMode.RAW:
            raise SchemeError(f"receiver {first} sends first and has nothing decoded yet; its functionals must be RAW")
        stages = [middle, first]

    for rx in stages:
        basis = _XorBasis(rows[rx] + forms[3 - rx])
        missing = _missing(ch, basis, _own_bits(ch, mask, rx))
        if missing:
            return CheckResult(False, failed_receiver=rx, undecoded=missing)
        if scheme.order is not StrategyOrder.ONE_ROUND and rx == stages[0]:
            unresolved = _missing(ch, basis, needed[rx])
            if unresolved:
                raise SchemeError(f"receiver {rx} forwards {', '.join(unresolved)} before it can decode them")
    return CheckResult(True, (len(scheme.placement1), len(scheme.placement2)))


# Exhaustive RAW search.


@dataclass(frozen=True)
class SearchResult:
    sum_rate: int
    rates: Tuple[int, int]
    witness: LdcScheme
    upper_bound: int


def cut_set_bound(ch: LdcChannel) -> int:
    """min(n11 + n22 + k12 + k21, rank of the full 2q x 2q GF(2) channel matrix)."""
    rank = gf2_rank(ch.received_rows(1) + ch.received_rows(2))
    return min(ch.n11 + ch.n22 + ch.k12 + ch.k21, rank)


def _row_functionals(q: int, dim: int) -> Iterator[Tuple[int, ...]]:
    """Tuples of ``dim`` distinct nonzero row subsets, as bitmasks over rows."""
    yield from itertools.combinations(range(1, 1 << q), dim)


def _rows_of(subset: int) -> Tuple[int, ...]:
    return tuple(i + 1 for i in range(subset.bit_length()) if subset >> i & 1)


def _best_raw_help(ch: LdcChannel, receiver: int, mask: int) -> Optional[Tuple[Tuple[int, ...], ...]]:
    """RAW functionals from the other receiver that let ``receiver`` decode its bits, or None."""
    own = _own_bits(ch, mask, receiver)
    base = _XorBasis(r & mask for r in ch.received_rows(receiver))
    if not _missing(ch, base, own):
        return ()
    sender = 3 - receiver
    budget = min(ch.coop_budget(sender), ch.q)
    if budget == 0:
        return None
    sender_rows = [r & mask for r in ch.received_rows(sender)]
    seen = set()
    for combo in _row_functionals(ch.q, budget):
        forms = []
        for subset in combo:
            form = 0
            for i in range(ch.q):
                if subset >> i & 1:
                    form ^= sender_rows[i]
            forms.append(form)
        # Functionals with the same span of forms help equally.
        key = frozenset(_span(forms))
        if key in seen:
            continue
        seen.add(key)
        basis = _XorBasis(base._rows.values())
        for form in forms:
            basis.add(form)
        if not _missing(ch, basis, own):
            return tuple(_rows_of(s) for s in combo)
    return None


def _span(forms: Sequence[int]) -> List[int]:
    out = [0]
    for f in forms:
        out += [f ^ x for x in out]
    return out


def search_raw(ch: LdcChannel, max_bits_per_user: Optional[int] = None) -> SearchResult:
    """Best one-round sum rate over bit placements and RAW functionals.

    With a fixed placement, receiver 1 only depends on what receiver 2
    forwards and vice versa, so the two cooperation messages are searched
    independently. Placements are visited by decreasing total size and the
    first feasible one is returned.
    """
    if ch.q > MAX_SEARCH_LEVELS or ch.k12 > MAX_SEARCH_COOP or ch.k21 > MAX_SEARCH_COOP:
        raise ValueError(
            f"search is limited to q <= {MAX_SEARCH_LEVELS} and k12, k21 <= {MAX_SEARCH_COOP}; got {ch.to_spec()}"
        )
    cap = ch.q if max_bits_per_user is None else max(0, min(int(max_bits_per_user), ch.q))
    levels = range(1, ch.q + 1)
    subsets = [frozenset(c) for r in range(cap + 1) for c in itertools.combinations(levels, r)]
    pairs = sorted(
        itertools.product(subsets, subsets),
        key=lambda p: (-(len(p[0]) + len(p[1])), -len(p[0]), sorted(p[0]), sorted(p[1])),
    )
    bound = cut_set_bound(ch)
    for p1, p2 in pairs:
        if len(p1) + len(p2) > bound:
            continue
        scheme = LdcScheme(p1, p2)
        mask = _placement_mask(ch, scheme)
        help_to_1 = _best_raw_help(ch, 1, mask)
        if help_to_1 is None:
            continue
        help_to_2 = _best_raw_help(ch, 2, mask)
        if help_to_2 is None:
            continue
        witness = LdcScheme(p1, p2, Cooperation(CoopMode.RAW, help_to_2), Cooperation(CoopMode.RAW, help_to_1))
        result = check_scheme(ch, witness)
        if not result.ok:  # pragma: no cover
            raise AssertionError("search produced a witness that does not check")
        return SearchResult(result.sum_rate, result.rates, witness, bound)
    raise AssertionError("the empty placement is always feasible")  # pragma: no cover


# Text formats.


def parse_channel(text: str) -> LdcChannel:
    """Parse ``q=3,n11=3,n12=2,n21=2,n22=3,k12=1,k21=1``; k12 and k21 default to 0."""
    values: Dict[str, int] = {}
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep or key not in ("q", "n11", "n12", "n21", "n22", "k12", "k21"):
            raise ValueError(f"bad channel field {part!r}")
        if key in values:
            raise ValueError(f"duplicate channel field {key!r}")
        try:
            values[key] = int(value)
        except ValueError:
            raise ValueError(f"channel field {key} needs an integer, got {value!r}") from None
    missing = {"q", "n11", "n12", "n21", "n22"} - set(values)
    if missing:
        raise ValueError(f"channel spec is missing {sorted(missing)}")
    return LdcChannel(**values)


def _parse_placement(text: str, letter: str) -> FrozenSet[int]:
    levels = set()
    for tok in text.split():
        m = re.fullmatch(rf"{letter}(\d+)", tok)
        if not m:
            raise SchemeError(f"bad level {tok!r}; expected {letter}1, {letter}2, ...")
        levels.add(int(m.group(1)))
    return frozenset(levels)


def _parse_functionals(text: str, mode: CoopMode) -> Tuple[Tuple, ...]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        terms = [t.strip() for t in chunk.split("+")]
        if mode is CoopMode.RAW:
            try:
                out.append(tuple(int(t) for t in terms))
            except ValueError:
                raise SchemeError(f"raw functionals are row numbers, got {chunk!r}") from None
        else:
            out.append(tuple(terms))
    return tuple(out)


def parse_scheme(text: str) -> LdcScheme:
    """Read the line format written by :func:`format_scheme`.

    ``#`` starts a comment. Missing lines mean an empty placement or no
    cooperation, and the order defaults to one round.
    """
    fields: Dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key = " ".join(key.split())
        if not sep:
            raise SchemeError(f"line {lineno}: expected 'key: value'")
        if key == "order":
            try:
                fields["order"] = StrategyOrder(value.strip())
            except ValueError:
                raise SchemeError(f"line {lineno}: order must be one-round, 1-2-1 or 2-1-2") from None
        elif key in ("user1", "user2"):
            fields[key] = _parse_placement(value, "a" if key == "user1" else "b")
        else:
            m = re.fullmatch(r"coop([12]) (raw|decoded)", key)
            if not m:
                raise SchemeError(f"line {lineno}: unknown key {key!r}")
            mode = CoopMode(m.group(2))
            fields[f"coop{m.group(1)}"] = Cooperation(mode, _parse_functionals(value, mode))
    return LdcScheme(
        fields.get("user1", frozenset()),
        fields.get("user2", frozenset()),
        fields.get("coop1", Cooperation()),
        fields.get("coop2", Cooperation()),
        fields.get("order", StrategyOrder.ONE_ROUND),
    )


def format_scheme(scheme: LdcScheme) -> str:
    lines = [
        f"order: {scheme.order.value}",
        "user1: " + " ".join(f"a{l}" for l in sorted(scheme.placement1)),
        "user2: " + " ".join(f"b{l}" for l in sorted(scheme.placement2)),
    ]
    for sender in (1, 2):
        coop = scheme.coop(sender)
        if coop.functionals:
            body = "; ".join("+".join(str(t) for t in f) for f in coop.functionals)
            lines.append(f"coop{sender} {coop.mode.value}: {body}")
    return "\n".join(line.rstrip() for line in lines) + "\n"
