"""The complete rewriting system on words of oriented 1-cells.

Letters are nonzero integers: ``+k`` is the ``k``-th interned 1-cell run
from its iota corner to its tau corner and ``-k`` is its inverse.

Rules:
    type 1: a collapsible letter is erased;
    type 2: ``x, -x`` cancels;
    type 3: a redundant letter ``c`` is replaced by the inverse of ``w``,
            where ``c w`` is the boundary word of ``W(c)`` read from ``c``;
    slide:  optionally, ``c`` is replaced by the cell obtained by moving an
            unblocked vertex onto its parent when the two are consecutive.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .config_complex import VERTEX
from .morse_field import MorseField, Tag


class RewriteBudgetExceeded(RuntimeError):
    """A reduction ran past its step budget."""


LEFTMOST = "leftmost"
RIGHTMOST = "rightmost"


def inverse(word) -> tuple:
    return tuple(-x for x in reversed(word))


def free_reduce(word) -> tuple:
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


class RewriteSystem:
    """Rules for one configuration complex, built lazily and cached.

    Args:
        fld: the gradient field of the complex.
        slides: also fire slide rules (before types 1 and 3 on a letter).
        trace: optional callable receiving one line per applied rule.
        budget: maximal number of rule applications per reduction.
        check_rank: assert that type-3 right sides have strictly smaller rank.
    """

    def __init__(self, fld: MorseField, slides=False, trace=None, budget=10_000_000, check_rank=False):
        self.field = fld
        self.cx = fld.cx
        self.slides = slides
        self.trace = trace
        self.budget = budget
        self.check_rank = check_rank
        self._ids: dict = {}
        self._cells: list = []
        self._kind: list = []
        self._rhs: dict = {}
        self._slide: dict = {}
        self._nf: dict = {}
        self._flow: dict = {}

    # ------------------------------------------------------------ letters

    def letter(self, cell, sign: int = 1) -> int:
        k = self._ids.get(cell)
        if k is None:
            if self.cx.dim(cell) != 1:
                raise ValueError("letters must be 1-cells")
            self._cells.append(cell)
            self._kind.append(self.field.classify(cell))
            k = self._ids[cell] = len(self._cells)
        return k if sign > 0 else -k

    def cell(self, x: int):
        return self._cells[abs(x) - 1]

    def kind(self, x: int) -> Tag:
        return self._kind[abs(x) - 1]

    def word(self, oriented) -> tuple:
        """Letters of a sequence of ``(cell, sign)`` pairs."""
        return tuple(self.letter(c, s) for c, s in oriented)

    def format_letter(self, x: int) -> str:
        s = self.cx.format_cell(self.cell(x))
        return s if x > 0 else s + "^-1"

    def format_word(self, word) -> str:
        return " ".join(self.format_letter(x) for x in word) or "1"

    # ------------------------------------------------------------ rules

    def type3_rhs(self, k: int) -> tuple:
        """Right side for the positive redundant letter ``k``."""
        rhs = self._rhs.get(k)
        if rhs is not None:
            return rhs
        c = self.cell(k)
        bw = self.cx.boundary_word(self.field.apply_w(c))
        pos = next(j for j, (x, _) in enumerate(bw) if x == c)
        bw = bw[pos:] + bw[:pos]
        if bw[0][1] < 0:
            bw = [(x, -s) for x, s in reversed(bw)]
            bw = bw[-1:] + bw[:-1]
        rest = self.word(bw[1:])
        rhs = inverse(rest)
        if k in (abs(x) for x in rhs):
            raise AssertionError("type-3 right side contains its left side")
        if self.check_rank:
            r = self.field.rank(c)
            for x in rhs:
                if self.kind(x) is Tag.REDUNDANT and self.field.rank(self.cell(x)) >= r:
                    raise AssertionError("type-3 rule does not lower the rank")
        self._rhs[k] = rhs
        return rhs

    def slide_target(self, k: int):
        """Letter reached by the first available slide, or ``None``."""
        if k in self._slide:
            return self._slide[k]
        cell = self.cell(k)
        moved = self._slide_once(cell, essential_ok=True)
        out = None if moved is None else self.letter(moved)
        self._slide[k] = out
        return out

    def _slide_once(self, c, essential_ok: bool):
        cx, o = self.cx, self.cx.order
        occ = cx.occupied(c)
        for i in c:
            if cx.kind[i] != VERTEX:
                continue
            v = cx.iota[i]
            p = o.parent[v]
            if p != v - 1 or p < 0 or (occ >> p) & 1:
                continue
            if not essential_ok and o.is_essential(v):
                continue
            return cx.replace(c, i, cx.vertex_item[p])
        return None

    def slide_normalize(self, c):
        """Slide inessential unblocked vertices onto their parents while possible."""
        while True:
            nxt = self._slide_once(c, essential_ok=False)
            if nxt is None:
                return c
            c = nxt

    def _single(self, x: int):
        """Replacement for a single letter, with the rule name, or ``None``."""
        if self.slides:
            t = self.slide_target(abs(x))
            if t is not None:
                return ((t if x > 0 else -t),), "slide"
        kind = self.kind(x)
        if kind is Tag.COLLAPSIBLE:
            return (), "type1"
        if kind is Tag.REDUNDANT:
            rhs = self.type3_rhs(abs(x))
            return (rhs if x > 0 else inverse(rhs)), "type3"
        return None

    def redexes(self, word) -> list:
        """Every one-step rewrite as ``(start, length, replacement, rule)``."""
        out = []
        for i, x in enumerate(word):
            if i + 1 < len(word) and word[i + 1] == -x:
                out.append((i, 2, (), "type2"))
            if self.slides:
                t = self.slide_target(abs(x))
                if t is not None:
                    out.append((i, 1, ((t if x > 0 else -t),), "slide"))
            kind = self.kind(x)
            if kind is Tag.COLLAPSIBLE:
                out.append((i, 1, (), "type1"))
            elif kind is Tag.REDUNDANT:
                rhs = self.type3_rhs(abs(x))
                out.append((i, 1, rhs if x > 0 else inverse(rhs), "type3"))
        return out

    # ------------------------------------------------------------ reduction

    def _emit(self, left, right, pos):
        if self.trace is not None:
            self.trace(f"({self.format_word(left)} -> {self.format_word(right)}) @ {pos}")

    def reduce(self, word, strategy: str = LEFTMOST) -> tuple:
        """Rewrite one redex at a time until no rule applies."""
        w = list(word)
        steps = 0
        if strategy == LEFTMOST:
            i = 0
            while i < len(w):
                if steps > self.budget:
                    raise RewriteBudgetExceeded(f"more than {self.budget} steps")
                x = w[i]
                if i + 1 < len(w) and w[i + 1] == -x:
                    self._emit(w[i:i + 2], (), i)
                    del w[i:i + 2]
                    steps += 1
                    i = max(i - 1, 0)
                    continue
                rep = self._single(x)
                if rep is None:
                    i += 1
                    continue
                self._emit((x,), rep[0], i)
                w[i:i + 1] = rep[0]
                steps += 1
                i = max(i - 1, 0)
        elif strategy == RIGHTMOST:
            i = len(w) - 1
            while i >= 0:
                if steps > self.budget:
                    raise RewriteBudgetExceeded(f"more than {self.budget} steps")
                x = w[i]
                rep = self._single(x)
                if rep is not None:
                    self._emit((x,), rep[0], i)
                    w[i:i + 1] = rep[0]
                    steps += 1
                    i = min(i + len(rep[0]), len(w) - 1)
                    continue
                if i > 0 and w[i - 1] == -x:
                    self._emit(w[i - 1:i + 1], (), i - 1)
                    del w[i - 1:i + 1]
                    steps += 1
                    i = min(i, len(w) - 1)
                    continue
                i -= 1
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        return tuple(w)

    def normal_form(self, word) -> tuple:
        """Normal form via memoized innermost reduction of each letter."""
        out = []
        for x in word:
            for y in self._letter_nf(x):
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return tuple(out)

    def _letter_nf(self, x: int) -> tuple:
        k = abs(x)
        memo = self._nf
        if k not in memo:
            stack = [k]
            while stack:
                top = stack[-1]
                if top in memo:
                    stack.pop()
                    continue
                rep = self._single(top)
                if rep is None:
                    memo[top] = (top,)
                    stack.pop()
                    continue
                todo = [abs(y) for y in rep[0] if abs(y) not in memo]
                if todo:
                    stack.extend(todo)
                    if len(stack) > 10 * self.budget:
                        raise RewriteBudgetExceeded("runaway letter expansion")
                    continue
                acc = []
                for y in rep[0]:
                    part = memo[abs(y)] if y > 0 else inverse(memo[abs(y)])
                    for z in part:
                        if acc and acc[-1] == -z:
                            acc.pop()
                        else:
                            acc.append(z)
                memo[top] = tuple(acc)
                stack.pop()
        nf = memo[k]
        return nf if x > 0 else inverse(nf)

    # ------------------------------------------------------------ fast path

    def flow_1cell(self, cell) -> tuple:
        """Normal form of a positively oriented 1-cell.

        Vertices are moved straight to their parents while no member of the
        cell lies strictly between the two in the vertex order; otherwise the
        square of ``W(c)`` is expanded and the three sides are flowed.
        """
        start = cell
        memo = self._flow
        if start in memo:
            return memo[start]
        cx, fld, parent = self.cx, self.field, self.cx.order.parent
        stack = [start]
        while stack:
            c = stack[-1]
            if c in memo:
                stack.pop()
                continue
            # follow the direct moves
            path = [c]
            while True:
                tag = fld.classify(c)
                if tag is not Tag.REDUNDANT:
                    break
                v, _ = fld._scan(c)
                e = next(i for i in c if cx.kind[i] != VERTEX)
                p = parent[v]
                between = [cx.iota[i] for i in c if cx.kind[i] == VERTEX and cx.iota[i] != v]
                between += [cx.iota[e], cx.tau[e]]
                if any(p < u < v for u in between):
                    break
                c = cx.replace(c, cx.vertex_item[v], cx.vertex_item[p])
                if c in memo:
                    break
                path.append(c)
            if c in memo:
                result = memo[c]
            elif tag is Tag.CRITICAL:
                result = (self.letter(c),)
            elif tag is Tag.COLLAPSIBLE:
                result = ()
            else:
                w = fld.apply_w(c)
                v, _ = fld._scan(c)
                e = next(i for i in c if cx.kind[i] != VERTEX)
                vi = cx.vertex_item
                c_iota = cx.replace(w, e, vi[cx.iota[e]])
                c_mid = cx.replace(c, vi[v], vi[parent[v]])
                c_tau = cx.replace(w, e, vi[cx.tau[e]])
                todo = [s for s in (c_iota, c_mid, c_tau) if s not in memo]
                if todo:
                    stack.extend(todo)
                    continue
                result = free_reduce(memo[c_iota] + memo[c_mid] + inverse(memo[c_tau]))
            for x in path:
                memo[x] = result
            memo[c] = result
            stack.pop()
        return memo[start]

    # ------------------------------------------------------------ confluence

    def check_local_confluence(self, words, strategies=True) -> "ConfluenceReport":
        """Rejoin every pair of overlapping one-step rewrites in ``words``."""
        rep = ConfluenceReport()
        for word in words:
            word = tuple(word)
            rep.words += 1
            rx = self.redexes(word)
            for a in range(len(rx)):
                for b in range(a + 1, len(rx)):
                    s1, l1, r1, n1 = rx[a]
                    s2, l2, r2, n2 = rx[b]
                    if s1 + l1 <= s2 or s2 + l2 <= s1:
                        continue
                    rep.pairs += 1
                    rep.by_rules[tuple(sorted((n1, n2)))] = rep.by_rules.get(tuple(sorted((n1, n2))), 0) + 1
                    w1 = word[:s1] + tuple(r1) + word[s1 + l1:]
                    w2 = word[:s2] + tuple(r2) + word[s2 + l2:]
                    if self.normal_form(w1) != self.normal_form(w2):
                        rep.failures.append((word, n1, n2))
            if strategies:
                if self.reduce(word, LEFTMOST) != self.reduce(word, RIGHTMOST):
                    rep.failures.append((word, LEFTMOST, RIGHTMOST))
        return rep

    def random_words(self, count: int, rng: random.Random, max_len: int = 6, cells=None) -> list:
        """Random words over all 1-cells (or the given pool)."""
        if cells is None:
            cells = list(self.cx.enumerate_cells(dim=1))
        if not cells:
            return []
        out = []
        for _ in range(count):
            k = rng.randint(1, max_len)
            w = [self.letter(rng.choice(cells), rng.choice((1, -1))) for _ in range(k)]
            # a cancelling pair next to a non-critical letter makes rules overlap
            if rng.random() < 0.5:
                pos = rng.randint(0, len(w))
                x = w[pos - 1] if pos else w[0]
                w[pos:pos] = [-x, x] if rng.random() < 0.5 else [x, -x]
            out.append(tuple(w))
        return out


@dataclass
class ConfluenceReport:
    words: int = 0
    pairs: int = 0
    by_rules: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures
