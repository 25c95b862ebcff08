"""From a Wadge strategy of Player 2 to a continuous reduction.

Feeding an a-prefix to the strategy and dropping the skips gives the
b-prefix it commits to; longer inputs only extend the output, so the map
is monotone and its pointwise limit is the induced function on infinite
words.  For finite-state strategies the limit on a lasso is computed
exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..automata.words import Lasso, as_word
from ..errors import InputError
from .strategies import SKIP, FiniteState, Role, Strategy


@dataclass(frozen=True)
class LimitImage:
    """Image of a lasso: ``lasso`` when b is infinite, else the finite ``word``."""

    lasso: Optional[Lasso]
    word: tuple = ()

    @property
    def defined(self) -> bool:
        return self.lasso is not None


class PrefixTransformer:
    def __init__(self, f: Strategy):
        if f.role != Role.P2 or f.game != "wadge":
            raise InputError(f"{f.name} is not a Wadge Player 2 strategy")
        self.f = f

    def __call__(self, a) -> tuple:
        a = as_word(a)
        p = self.f.start()
        out = []
        try:
            for letter in a:
                m = p.move(letter)
                if m != SKIP:
                    out.append(m)
        finally:
            p.close()
        return tuple(out)

    def limit(self, a: Lasso) -> LimitImage:
        """Exact image of ``a`` for finite-state strategies."""
        if not isinstance(self.f, FiniteState):
            raise InputError("limits are computed for finite-state strategies only")
        m = self.f
        q = m.initial
        out = []
        for letter in a.spoke:
            q, o = m.step(q, letter)
            if o != SKIP:
                out.append(o)
        seen = {}
        n = len(a.cycle)
        i = 0
        while (q, i % n) not in seen:
            seen[(q, i % n)] = len(out)
            q, o = m.step(q, a.cycle[i % n])
            if o != SKIP:
                out.append(o)
            i += 1
        start = seen[(q, i % n)]
        if start == len(out):
            return LimitImage(None, tuple(out))
        return LimitImage(Lasso(out[:start], out[start:]))


def strategy_to_reduction(f: Strategy) -> PrefixTransformer:
    return PrefixTransformer(f)
