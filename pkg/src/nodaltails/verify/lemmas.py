"""Exhaustive falsification of the tail lemmas on a single dual graph.

Each statement is split into items.  An item has a hypothesis, evaluated
on every candidate tuple of subcurves, and a conclusion asserted on the
tuples that satisfy it.  Tuples failing the hypothesis are counted as
vacuous; an item whose hypothesis never fires is reported ``UNTESTED``.
Nonexistence statements are run as searches: the framing conditions form
the hypothesis and the forbidden configuration is the failure.

All checks work on the per-subset lookup tables and broadcast over the
candidate tuples with numpy, one array axis per quantified subcurve.  Two
items (the cut of a meet containing a tail, the cut of a join inside a
tail) quantify over a pair ``W, W'`` only through ``W & W'`` (resp.
``W | W'``) and the union of their cuts; they are run in that reduced
form, which is equivalent and counts one instance per ``(Z, X)``.

Statements attached to a pair ``(i, j)`` only depend on ``{i, j}``, so they
run over unordered pairs ``i <= j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..curve_graph import DualGraph, iter_bits, normalized_flags
from ..errors import GraphError
from ..graph_io import graph_to_document
from ..tails import nested_masks

PASS, FAIL, UNTESTED, REPORTED = "PASS", "FAIL", "UNTESTED", "REPORTED"

# (name, items); names describe the statement, items its parts
CATALOG: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("meet_join_cut_containment", ("inclusion", "free_equality")),
    ("cut_symmetric_difference", ("complement_inside", "inside_complement", "below_meet", "above_join", "split")),
    ("meet_join_tail_closure", ("meet", "join", "free_two_three")),
    ("tail_cut_perfection", ("cut_on_tail", "almost_shared_cut", "one_tail_free")),
    ("two_tail_lattice", ("meet_and_join",)),
    ("two_tail_terminal_witness", ("inner_witness",)),
    ("three_tail_cut_bounds", ("two_on", "one_each")),
    ("three_tail_meet_closure", ("meet",)),
    ("three_tail_terminal_witness", ("witness",)),
    ("no_nested_pair_inside_tail", ("search",)),
    ("no_nested_pair_around_tail", ("search",)),
    ("no_free_pair_covering_cut", ("search",)),
    ("four_tail_exclusions", ("mixed_meet", "enclosing_three_tail")),
    ("outer_tail_complement_witness", ("witness",)),
    ("three_tail_enclosing_two_tail", ("witness",)),
    ("split_cover_complement_witness", ("witness",)),
    ("reduced_quasistability", ("agreement",)),
    ("abel_neron_quasistable", ("verdict",)),
    ("outer_three_tail_beta", ("half",)),
    ("tally_degree_identity", ("identity",)),
)

# disagreements are counted but do not fail the suite
ADVISORY: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("reduced_quasistability_literal", ("agreement",)),
)


def _members(mask: int) -> list[int]:
    return [b + 1 for b in iter_bits(mask)]


@dataclass
class Counterexample:
    trial: int | None
    graph: dict
    pair: tuple[int, int] | None
    subcurves: dict[str, list[int]]

    def sort_key(self) -> tuple:
        return (-1 if self.trial is None else self.trial,)

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "graph": self.graph,
            "pair": None if self.pair is None else list(self.pair),
            "subcurves": self.subcurves,
        }


@dataclass
class ItemTally:
    scope: int = 0
    nonvacuous: int = 0
    failures: int = 0
    first: Counterexample | None = None

    @property
    def vacuous(self) -> int:
        return self.scope - self.nonvacuous

    def merge(self, other: "ItemTally") -> "ItemTally":
        firsts = [c for c in (self.first, other.first) if c is not None]
        return ItemTally(
            self.scope + other.scope,
            self.nonvacuous + other.nonvacuous,
            self.failures + other.failures,
            min(firsts, key=Counterexample.sort_key) if firsts else None,
        )

    def to_dict(self) -> dict:
        return {
            "scope": self.scope,
            "nonvacuous": self.nonvacuous,
            "vacuous": self.vacuous,
            "failures": self.failures,
            "first_counterexample": None if self.first is None else self.first.to_dict(),
        }


def _empty_tallies() -> dict[str, dict[str, ItemTally]]:
    return {name: {it: ItemTally() for it in items} for name, items in CATALOG + ADVISORY}


@dataclass
class SuiteReport:
    trials: int = 0
    tallies: dict[str, dict[str, ItemTally]] = field(default_factory=_empty_tallies)

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        out = SuiteReport(self.trials + other.trials)
        for name, items in out.tallies.items():
            for it in items:
                items[it] = self.tallies[name][it].merge(other.tallies[name][it])
        return out

    def status(self, name: str) -> str:
        items = self.tallies[name].values()
        if name in dict(ADVISORY):
            return REPORTED
        if any(t.failures for t in items):
            return FAIL
        if any(t.nonvacuous == 0 for t in items):
            return UNTESTED
        return PASS

    @property
    def counterexamples(self) -> int:
        return sum(t.failures for name, _ in CATALOG for t in self.tallies[name].values())

    @property
    def ok(self) -> bool:
        return all(self.status(name) == PASS for name, _ in CATALOG)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "counterexamples": self.counterexamples,
            "lemmas": {
                name: {
                    "status": self.status(name),
                    "items": {it: t.to_dict() for it, t in items.items()},
                }
                for name, items in self.tallies.items()
            },
        }


# ---------------------------------------------------------------------------
# per-graph context
# ---------------------------------------------------------------------------

def _pc(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).astype(np.int64)


def _sub(a, b):
    """``a`` is a subset of ``b`` (int64 masks, broadcasting)."""
    return (a & ~b) == 0


class _Checker:
    def __init__(self, graph: DualGraph, report: SuiteReport, trial: int | None) -> None:
        tab = graph.tables()
        if tab.term.dtype == object:
            raise GraphError("the lemma suite handles at most 64 nodes")
        self.graph = graph
        self.report = report
        self.trial = trial
        self.tab = tab
        self.full = tab.full
        self.masks = np.arange(tab.size, dtype=np.int64)
        self.T = tab.term
        self.touch = tab.touch
        self.k = tab.cut
        self.tail = tab.tail
        self.proper = self.masks[1:-1]
        self.tails = np.flatnonzero(tab.tail).astype(np.int64)
        self.tails_by_k = {s: self.tails[self.k[self.tails] == s] for s in (1, 2, 3)}
        self._doc = None

    def tally(self, name, item, hyp, bad, pair=None, **roles) -> None:
        hyp = np.asarray(hyp, dtype=bool)
        bad = np.asarray(bad, dtype=bool) & hyp
        t = self.report.tallies[name][item]
        t.scope += hyp.size
        t.nonvacuous += int(hyp.sum())
        nbad = int(bad.sum())
        t.failures += nbad
        if nbad and t.first is None:
            idx = np.unravel_index(int(np.flatnonzero(bad)[0]), bad.shape)
            subs = {}
            for role, arr in roles.items():
                if callable(arr):
                    subs.update(arr(idx))
                else:
                    subs[role] = _members(int(np.broadcast_to(arr, bad.shape)[idx]))
            if self._doc is None:
                self._doc = graph_to_document(self.graph)
            t.first = Counterexample(self.trial, self._doc, pair, subs)

    # -- statements on the graph alone ------------------------------------

    def meet_join(self) -> None:
        T = self.T
        Z, W = self.proper[:, None], self.proper[None, :]
        A, B = T[Z], T[W]
        tm, tj = T[Z & W], T[Z | W]
        lhs = tm | tj
        ones = np.ones(lhs.shape, dtype=bool)
        name = "meet_join_cut_containment"
        self.tally(name, "inclusion", ones, (lhs & ~(A | B)) != 0, Z=Z, Zp=W)
        free = (A & B) == 0
        self.tally(name, "free_equality", free, ((tm & tj) != 0) | (lhs != (A | B)), Z=Z, Zp=W)

        name = "cut_symmetric_difference"
        diff = A ^ B
        self.tally(name, "complement_inside", (Z | W) == self.full, tm != diff, W=Z, Wp=W)
        self.tally(name, "inside_complement", (Z & W) == 0, tj != diff, W=Z, Wp=W)

        # tails on which the split item is quantified: W inside Z, W' inside Z^c
        tl = self.tails[None, :]
        inside = _sub(self.proper[:, None], tl).astype(np.float32)
        outside = ((self.proper[:, None] & tl) == 0).astype(np.float32)
        split = (inside @ outside.T) > 0
        self.tally(name, "split", split, tj != diff, W=Z, Wp=W)

        sup = self._superset_or()
        sub = self._subset_or()
        Zt, X = self.tails[:, None], self.proper[None, :]
        TZ, TX = T[Zt], T[X]
        self.tally(
            name, "below_meet", _sub(Zt, X), (TZ & sup[X] & ~TX) != 0,
            Z=Zt, meet=X, W=lambda idx: self._explain_cover(idx, Zt, X, above=True),
        )
        self.tally(
            name, "above_join", _sub(X, Zt), (TZ & sub[X] & ~TX) != 0,
            Z=Zt, join=X, W=lambda idx: self._explain_cover(idx, Zt, X, above=False),
        )

    def _superset_or(self) -> np.ndarray:
        out = self.T.copy()
        m = self.masks
        for b in range(self.graph.p):
            lo = m[((m >> b) & 1) == 0]
            out[lo] |= out[lo | (1 << b)]
        return out

    def _subset_or(self) -> np.ndarray:
        out = self.T.copy()
        m = self.masks
        for b in range(self.graph.p):
            hi = m[((m >> b) & 1) == 1]
            out[hi] |= out[hi ^ (1 << b)]
        return out

    def _explain_cover(self, idx, Zt, X, above: bool) -> dict:
        z = int(np.broadcast_to(Zt, (Zt.shape[0], X.shape[1]))[idx])
        x = int(np.broadcast_to(X, (Zt.shape[0], X.shape[1]))[idx])
        tz, tx = int(self.T[z]), int(self.T[x])
        for w in range(1, self.full):
            related = (w & x) == x if above else (w & ~x) == 0
            if related and tz & int(self.T[w]) & ~tx:
                return {"W": _members(w), "Wp": _members(x)}
        return {}

    def tail_closure(self) -> None:
        T, k, tail = self.T, self.k, self.tail
        big = self.tails[k[self.tails] > 1]
        Z, W = big[:, None], big[None, :]
        m, u = Z & W, Z | W
        km, ku = k[m], k[u]
        name = "meet_join_tail_closure"
        self.tally(name, "meet", (km >= 1) & (km <= 3), (km <= 1) | ~tail[m], Z=Z, Zp=W)
        self.tally(name, "join", (ku >= 1) & (ku <= 3), (ku <= 1) | ~tail[u], Z=Z, Zp=W)
        hyp = ((T[Z] & T[W]) == 0) & (km >= 1) & (ku >= 1) & (k[Z] == 2) & (k[W] == 3)
        bad = (km <= 1) | (ku <= 1) | (km + ku != 5) | ~tail[m] | ~tail[u]
        self.tally(name, "free_two_three", hyp, bad, Z=Z, Zp=W)

        Z, W = self.tails[:, None], self.tails[None, :]
        TZ, TW = T[Z], T[W]
        full = self.full
        name = "tail_cut_perfection"
        self.tally(
            name, "cut_on_tail", (TZ & ~self.touch[W]) == 0,
            ~(_sub(Z, W) | _sub(full ^ Z, W)), Z=Z, Zp=W,
        )
        perfect = _sub(Z, W) | _sub(W, Z) | ((Z | W) == full) | ((Z & W) == 0)
        self.tally(name, "almost_shared_cut", _pc(TZ & TW) == k[Z] - 1, ~perfect, Z=Z, Zp=W)
        self.tally(name, "one_tail_free", (k[Z] >= 2) & (k[W] == 1), (TZ & TW) != 0, Z=Z, Zp=W)

        two = self.tails_by_k[2]
        Z, W = two[:, None], two[None, :]
        m, u = Z & W, Z | W
        hyp = (k[m] >= 1) & (k[u] >= 1)
        bad = ~(tail[m] & (k[m] == 2) & tail[u] & (k[u] == 2))
        self.tally("two_tail_lattice", "meet_and_join", hyp, bad, Z=Z, Zp=W)

        three = self.tails_by_k[3]
        Z, W = three[:, None], three[None, :]
        m, u = Z & W, Z | W
        hyp = (k[m] >= 1) & (k[u] >= 1)
        name = "three_tail_cut_bounds"
        on_z = _pc(T[W] & self.touch[Z])
        on_w = _pc(T[Z] & self.touch[W])
        self.tally(name, "two_on", hyp & (on_z == 2), (k[u] < 2) | (k[u] > 3), Z=Z, Zp=W)
        self.tally(name, "one_each", hyp & (on_z == 1) & (on_w == 1), k[m] != 2, Z=Z, Zp=W)

    def free_pair_cover(self) -> None:
        T, k = self.T, self.k
        Z = self.tails[:, None, None]
        W = self.tails_by_k[2][None, :, None]
        Wp = self.tails_by_k[3][None, None, :]
        meet = W & Wp
        hyp = ((T[W] & T[Wp]) == 0) & _sub(Z, meet)
        bad = ((T[Z] & ~(T[W] | T[Wp])) == 0) & (Z != meet) & (k[W | Wp] >= 1)
        self.tally("no_free_pair_covering_cut", "search", hyp, bad, Z=Z, W=W, Wp=Wp)

    # -- statements attached to a pair ------------------------------------

    def pair_lemmas(self, i: int, j: int) -> None:
        pair = (i, j)
        T, k = self.T, self.k
        _, _, t2, t3 = nested_masks(self.graph, i, j)
        t2 = np.array(t2, dtype=np.int64)
        t3 = np.array(t3, dtype=np.int64)
        t23 = np.concatenate([t2, t3])
        need = (1 << (i - 1)) | (1 << (j - 1))

        def separating(arr):
            return arr[((arr & need) == need) & ((arr & 1) == 0)]

        # inner terminal 2-tail for every separating 2-tail
        Z = separating(self.tails_by_k[2])[:, None]
        W = t2[None, :]
        found = (_sub(W, Z) & ((T[W] & T[Z]) != 0)).any(axis=1)
        self.tally("two_tail_terminal_witness", "inner_witness", np.ones(Z.shape[0], bool), ~found,
                   pair, Z=Z[:, 0])

        cut2 = np.uint64(0)
        for w in t2:
            cut2 |= T[w]
        sep3 = separating(self.tails_by_k[3])
        s3 = sep3[(T[sep3] & cut2) == 0]
        in_s3 = np.zeros(self.tab.size, dtype=bool)
        in_s3[s3] = True
        Z, W = s3[:, None], s3[None, :]
        self.tally("three_tail_meet_closure", "meet", np.ones((s3.size, s3.size), bool),
                   ~in_s3[Z & W], pair, Z=Z, Zp=W)

        Z = sep3[:, None]
        w2 = ((T[t2][None, :] & T[Z]) != 0).any(axis=1)
        W = t3[None, :]
        w3 = (((T[W] & T[Z]) != 0) & _sub(W, Z)).any(axis=1)
        self.tally("three_tail_terminal_witness", "witness", np.ones(sep3.size, bool), ~(w2 | w3),
                   pair, Z=sep3)

        if t2.size and t3.size:
            tl = self.tails
            Z = tl[k[tl] >= 3][:, None, None]
            W, Wp = t2[None, :, None], t3[None, None, :]
            termW, termWp = (T[Z] & T[W]) != 0, (T[Z] & T[Wp]) != 0
            self.tally("no_nested_pair_inside_tail", "search", _sub(W | Wp, Z), termW & termWp,
                       pair, Z=Z, W=W, Wp=Wp)
            Z = tl[k[tl] >= 4][:, None, None]
            termW = (T[Z] & T[W]) != 0
            self.tally("no_nested_pair_around_tail", "search", _sub(Z, W & Wp),
                       termW & (_pc(T[Z] & T[Wp]) == 2), pair, Z=Z, W=W, Wp=Wp)
        else:
            for name in ("no_nested_pair_inside_tail", "no_nested_pair_around_tail"):
                self.tally(name, "search", np.zeros(0, bool), np.zeros(0, bool), pair)

        self._four_tail(pair, t2, t3)
        self._normalized_witnesses(pair, t2, t3, t23, need)

    def _four_tail(self, pair, t2, t3) -> None:
        T = self.T
        four = self.tails[self.k[self.tails] == 4]
        Z = four[:, None, None, None]
        W = t3[None, :, None, None]
        frame = _sub(W, Z) & (_pc(T[Z] & T[W]) == 2)
        Wp = t3[None, None, :, None]
        Wpp = t2[None, None, None, :]
        hyp = frame & _sub(Z, Wp & Wpp)
        bad = (_pc(T[Z] & T[Wp]) == 1) & (_pc(T[Z] & T[Wpp]) == 1)
        self.tally("four_tail_exclusions", "mixed_meet", hyp, bad, pair, Z=Z, W=W, Wp=Wp, Wpp=Wpp)
        Wp = t3[None, None, :]
        frame = frame[..., 0]
        hyp = frame & _sub(Z[..., 0], Wp)
        bad = _pc(T[Z[..., 0]] & T[Wp]) == 2
        self.tally("four_tail_exclusions", "enclosing_three_tail", hyp, bad, pair,
                   Z=Z[..., 0], W=W[..., 0], Wp=Wp)

    def _normalized_witnesses(self, pair, t2, t3, t23, need) -> None:
        T, k = self.T, self.k
        norm = normalized_flags(self.tab, [int(w) for w in t2])
        tl = self.tails[norm[self.tails]]
        kz = k[tl]

        # witnesses W' in T2 u T3, terminal with Z, inside Z^c
        def outer_witness(zs):
            W = t23[None, :]
            return (((T[W] & T[zs[:, None]]) != 0) & ((W & zs[:, None]) == 0)).any(axis=1)

        zs = tl[(kz >= 2) & (kz <= 4) & ((tl & need) == 0)]
        Z = zs[:, None]
        W = t23[None, :]
        want = np.where(k[Z] == 2, 1, 2)
        hyp = _sub(Z, W) & (_pc(T[Z] & T[W]) == want)
        ok = outer_witness(zs)[:, None]
        self.tally("outer_tail_complement_witness", "witness", hyp, ~ok, pair, Z=Z, W=W)

        clear = (tl & (need | 1)) == 0
        zs = tl[(kz == 3) & clear]
        Z = zs[:, None]
        W = t3[None, :]
        hyp = ((T[Z] & T[W]) != 0) & ((W & Z) == 0) & (_pc(T[Z] & T[W]) == 2)
        Wp = t2[None, :]
        ok = (((T[Wp] & T[Z]) != 0) & _sub(Z, Wp)).any(axis=1)[:, None]
        self.tally("three_tail_enclosing_two_tail", "witness", hyp, ~ok, pair, Z=Z, W=W)

        zs = tl[(kz >= 3) & (kz <= 4) & clear]
        Z = zs[:, None, None]
        W, Wp = t2[None, :, None], t3[None, None, :]
        hyp = _sub(Z, W & Wp) & (_pc(T[Z] & T[W]) == 1) & (_pc(T[Z] & T[Wp]) == 1)
        ok = outer_witness(zs)[:, None, None]
        self.tally("split_cover_complement_witness", "witness", hyp, ~ok, pair, Z=Z, W=W, Wp=Wp)

    def twist_statements(self, i: int, j: int) -> None:
        pair = (i, j)
        g, tab, T, k = self.graph, self.tab, self.T, self.k
        t1i, t1j, t2, t3 = nested_masks(g, i, j)
        members = t1i + t1j + t2 + t3
        base = np.zeros(g.p, dtype=np.int64)
        base[0] += 2
        base[i - 1] -= 1
        base[j - 1] -= 1

        def twisted(family):
            coeff = np.zeros(g.p, dtype=np.int64)
            for w in family:
                coeff += tab.member[w]
            return base + g.laplacian @ coeff

        L = twisted(members)
        deg = tab.member @ L
        twice = 2 * deg
        ok = (np.abs(twice) <= k) & ((tab.member[:, 0] == 0) | (twice + k > 0))
        ok[0] = ok[-1] = True
        bad = ~ok
        exhaustive = not bad.any()
        witness = 0 if exhaustive else int(np.flatnonzero(bad)[0])
        one = np.ones(1, bool)
        self.tally("abel_neron_quasistable", "verdict", one, np.array([not exhaustive]), pair, Z=witness)

        keep = tab.tail & normalized_flags(tab, members)
        reduced = not (bad & keep).any()
        self.tally("reduced_quasistability", "agreement", one, np.array([reduced != exhaustive]), pair)

        lit = twisted(t3)
        ld = tab.member @ lit
        lbad = ~(((np.abs(2 * ld) <= k) & ((tab.member[:, 0] == 0) | (2 * ld + k > 0))))
        lbad[0] = lbad[-1] = False
        lkeep = tab.tail & normalized_flags(tab, t3)
        self.tally("reduced_quasistability_literal", "agreement", one,
                   np.array([(not (lbad & lkeep).any()) != (not lbad.any())]), pair)

        comp = self.full ^ np.array(t3, dtype=np.int64)
        self.tally("outer_three_tail_beta", "half", np.ones(comp.size, bool),
                   (2 * deg[comp] + k[comp]) != 1, pair, Wc=comp)

        zs = np.flatnonzero(keep & (k >= 2)).astype(np.int64)
        ws = np.array(t2 + t3, dtype=np.int64)
        Z, W = zs[:, None], ws[None, :]
        zc = self.full ^ Z
        shared = _pc(T[Z] & T[W])
        plus = np.where(_sub(W, Z) | _sub(Z, W), shared, 0).sum(axis=1)
        minus = np.where(_sub(W, zc) | _sub(zc, W), shared, 0).sum(axis=1)
        expected = (tab.member[zs] @ base) + plus - minus
        self.tally("tally_degree_identity", "identity", np.ones(zs.size, bool),
                   deg[zs] != expected, pair, Z=zs)


def lemma_suite(graph: DualGraph, trial: int | None = None, report: SuiteReport | None = None) -> SuiteReport:
    """Run every statement of the catalogue on ``graph`` and return the tallies.

    Passing ``report`` accumulates into it; ``trial`` is recorded in any
    counterexample so the graph can be regenerated.
    """
    report = SuiteReport() if report is None else report
    chk = _Checker(graph, report, trial)
    chk.meet_join()
    chk.tail_closure()
    chk.free_pair_cover()
    p = graph.p
    for i in range(1, p + 1):
        for j in range(i, p + 1):
            chk.pair_lemmas(i, j)
            chk.twist_statements(i, j)
    report.trials += 1
    return report
