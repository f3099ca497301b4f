"""Finitely generated subgroups of SL(2, Z).

Index computations run Todd-Coxeter coset enumeration (HLT strategy) in
PSL(2, Z) = <s, u | s^2 = u^3 = 1>, where s, u are the images of
S = [[0,1],[-1,0]] and U = ST = [[0,1],[-1,-1]].  Membership of -I is
decided afterwards by lifting the coset graph to a double cover: every
edge gets a sign, and the signs are solved for as a linear system over F2.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InvalidRank, RequiresClosedTable
from .sl2 import (IDENTITY, MINUS_I, GeneratorWord, SL2Matrix, decompose_word,
                  matmul_mod, reduce_mod, sl2_mod_order)

DEFAULT_MAX_COSETS = 10 ** 6


class _Unbounded:
    """Index not determined within the coset budget (never 'infinite')."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Unbounded"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


class CosetEnumerator:
    """Hasse-Lo-Todd-Coxeter enumeration with coincidence processing.

    Columns are generator letters; ``inverse[x]`` is the column of x^-1
    (an involution may be its own inverse).  Cosets are defined strictly
    in first-in-first-out order, so the result is reproducible.
    """

    def __init__(self, ncols: int, inverse: Sequence[int], relators, max_cosets: int):
        if max_cosets < 1:
            raise ValueError("max_cosets must be positive")
        self.ncols = ncols
        self.inv = list(inverse)
        self.relators = [list(r) for r in relators]
        self.max_cosets = max_cosets
        self.table = [[-1] * ncols]
        self.parent = [0]

    class _Overflow(Exception):
        pass

    def _define(self, c, x):
        if len(self.table) >= self.max_cosets:
            raise self._Overflow()
        d = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(d)
        self.table[c][x] = d
        self.table[d][self.inv[x]] = c

    def _rep(self, c):
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def _merge(self, k, l, queue):
        a, b = self._rep(k), self._rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            queue.append(hi)

    def _coincidence(self, a, b):
        table, inv = self.table, self.inv
        queue = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncols):
                d = table[g][x]
                if d < 0:
                    continue
                table[g][x] = -1
                if table[d][inv[x]] == g:
                    table[d][inv[x]] = -1
                mu, nu = self._rep(g), self._rep(d)
                if table[mu][x] >= 0:
                    self._merge(nu, table[mu][x], queue)
                elif table[nu][inv[x]] >= 0:
                    self._merge(mu, table[nu][inv[x]], queue)
                else:
                    table[mu][x] = nu
                    table[nu][inv[x]] = mu

    def _scan_and_fill(self, alpha, word):
        table, inv = self.table, self.inv
        n = len(word)
        if n == 0:
            return
        f, b = alpha, alpha
        i, j = 0, n - 1
        while True:
            while i <= j and table[f][word[i]] >= 0:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][inv[word[j]]] >= 0:
                b = table[b][inv[word[j]]]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][inv[word[i]]] = f
                return
            self._define(f, word[i])

    def _alive(self, c):
        return self.parent[c] == c

    def run(self, subgroup_words) -> Optional[list]:
        """Return the compressed, standardized table, or None on overflow."""
        try:
            for w in subgroup_words:
                self._scan_and_fill(0, w)
            alpha = 0
            while alpha < len(self.table):
                if self._alive(alpha):
                    for r in self.relators:
                        self._scan_and_fill(alpha, r)
                        if not self._alive(alpha):
                            break
                    if self._alive(alpha):
                        for x in range(self.ncols):
                            if self.table[alpha][x] < 0:
                                self._define(alpha, x)
                alpha += 1
        except self._Overflow:
            return None
        return self._standardize()

    def _standardize(self):
        order = {0: 0}
        queue = deque([0])
        seq = [0]
        while queue:
            c = queue.popleft()
            for x in range(self.ncols):
                d = self._rep(self.table[c][x])
                if d not in order:
                    order[d] = len(seq)
                    seq.append(d)
                    queue.append(d)
        return [[order[self._rep(self.table[c][x])] for x in range(self.ncols)] for c in seq]


# Letters of an exact S/U word: 0 = S, 1 = S^-1, 2 = U, 3 = U^-1.
_SU_OF = {"S": (0,), "s": (1,), "T": (1, 2), "t": (3, 0)}
_PSL_COLUMN = (0, 0, 1, 2)


def su_word(m: SL2Matrix) -> tuple:
    """Word in S^+-1, U^+-1 evaluating exactly to m (T = S^-1 U, T^-1 = U^-1 S)."""
    out = []
    for ch in decompose_word(m).letters:
        out.extend(_SU_OF[ch])
    return tuple(out)


@dataclass(frozen=True)
class CosetTable:
    """Action of s and u on PSL-cosets (coset 0 is the subgroup), with the
    solved sign bits of the double cover when -I is not in the group."""

    perm_s: tuple
    perm_u: tuple
    sign_s: Optional[tuple] = None
    sign_u: Optional[tuple] = None

    @property
    def size(self) -> int:
        return len(self.perm_s)

    @property
    def perm_u_inv(self) -> tuple:
        inv = [0] * len(self.perm_u)
        for c, d in enumerate(self.perm_u):
            inv[d] = c
        return tuple(inv)

    def trace(self, word, start=0) -> int:
        """Coset reached from ``start`` along an S/U word (PSL action)."""
        uinv = self.perm_u_inv
        c = start
        for x in word:
            if x <= 1:
                c = self.perm_s[c]
            elif x == 2:
                c = self.perm_u[c]
            else:
                c = uinv[c]
        return c


def index_in_psl(generators: Sequence[SL2Matrix], max_cosets: int = DEFAULT_MAX_COSETS):
    """Index of the image of <generators> in PSL(2, Z) with its coset table,
    or UNBOUNDED when the enumeration does not close within max_cosets."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    words = [[_PSL_COLUMN[x] for x in su_word(g)] for g in generators]
    words = [w for w in words if w]
    if not words:
        # trivial image in PSL(2, Z): infinite index, so no budget suffices
        return UNBOUNDED
    enum = CosetEnumerator(3, (0, 2, 1), [[0, 0], [1, 1, 1]], max_cosets)
    rows = enum.run(words)
    if rows is None:
        return UNBOUNDED
    table = CosetTable(tuple(r[0] for r in rows), tuple(r[1] for r in rows))
    return len(rows), table


def _solve_signs(table: CosetTable, words) -> Optional[tuple]:
    """Sign bits (sign_s, sign_u) lifting the coset action to the double
    cover SL(2, Z)/G, or None when no lift exists (that is, -I is in G)."""
    n = table.size
    ps, pu = table.perm_s, table.perm_u
    nvars = 0
    form_s = [None] * n
    form_u = [None] * n
    for c in range(n):
        d = ps[c]
        if d == c:
            return None
        if c < d:
            form_s[c] = (1 << nvars, 0)
            form_s[d] = (1 << nvars, 1)
            nvars += 1
    for c in range(n):
        if form_u[c] is not None:
            continue
        c1 = pu[c]
        if c1 == c:
            form_u[c] = (0, 0)
            continue
        c2 = pu[c1]
        x0, x1 = 1 << nvars, 1 << (nvars + 1)
        nvars += 2
        form_u[c], form_u[c1], form_u[c2] = (x0, 0), (x1, 0), (x0 | x1, 0)

    # gauge: put a spanning tree of the variable edges to zero
    uinv = table.perm_u_inv
    tree = 0
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    while queue:
        c = queue.popleft()
        nbrs = [(ps[c], form_s[c][0])]
        for d, (mask, _) in ((pu[c], form_u[c]), (uinv[c], form_u[uinv[c]])):
            # a u-edge is a free variable unless it closes its 3-cycle
            if mask and mask & (mask - 1) == 0:
                nbrs.append((d, mask))
        for d, var in nbrs:
            if not seen[d]:
                seen[d] = True
                tree |= var
                queue.append(d)
    pivots = {}
    for w in words:
        mask, const = 0, 0
        c = 0
        for x in w:
            if x == 0:
                m, k = form_s[c]
                c = ps[c]
            elif x == 1:
                c = ps[c]
                m, k = form_s[c]
            elif x == 2:
                m, k = form_u[c]
                c = pu[c]
            else:
                c = uinv[c]
                m, k = form_u[c]
            mask ^= m
            const ^= k
        assert c == 0, "generator does not stabilize the base coset"
        mask &= ~tree
        while mask:
            top = mask.bit_length() - 1
            if top in pivots:
                pm, pk = pivots[top]
                mask ^= pm
                const ^= pk
            else:
                pivots[top] = (mask, const)
                break
        else:
            if const:
                return None
    values = 0
    for top in sorted(pivots):
        pm, pk = pivots[top]
        rest = pm & ~(1 << top)
        bit = pk ^ (bin(rest & values).count("1") & 1)
        if bit:
            values |= 1 << top

    def ev(form):
        m, k = form
        return k ^ (bin(m & values).count("1") & 1)

    return tuple(ev(f) for f in form_s), tuple(ev(f) for f in form_u)


def _minus_identity_without_table(generators: Sequence[SL2Matrix]) -> Optional[bool]:
    # -I is a power of g exactly when g = -I or g has order 4 or 6 (trace 0 or 1)
    if any(g == MINUS_I or g.trace in (0, 1) for g in generators):
        return True
    if len({g for g in generators if g != IDENTITY}) <= 1:
        return False
    return None


def contains_minus_identity(generators: Sequence[SL2Matrix], coset_table=None) -> bool:
    """Decide -I in <generators>.

    With a closed PSL coset table the sign system decides it.  Without one
    only the cases visible from single generators are decided (a power of
    one generator equals -I, or the group is cyclic); otherwise
    RequiresClosedTable is raised.
    """
    if isinstance(coset_table, CosetTable):
        words = [su_word(g) for g in generators]
        return _solve_signs(coset_table, words) is None
    verdict = _minus_identity_without_table(generators)
    if verdict is None:
        raise RequiresClosedTable("coset enumeration did not close")
    return verdict


@dataclass(frozen=True)
class SubgroupDescriptor:
    generators: tuple
    psl_index: object
    sl_index: object
    contains_minus_I: Optional[bool]
    coset_table: Optional[CosetTable]
    mod2_image_order: int
    mod3_image_order: int = field(default=0)

    @property
    def closed(self) -> bool:
        return self.coset_table is not None

    def index_data(self):
        return (self.psl_index, self.sl_index, self.contains_minus_I, self.mod2_image_order)

    def _states(self):
        """Permutations of S and U on SL(2, Z)/G (base state 0)."""
        tab = self.coset_table
        n = tab.size
        if self.contains_minus_I:
            return list(tab.perm_s), list(tab.perm_u)
        act_s = [0] * (2 * n)
        act_u = [0] * (2 * n)
        for c in range(n):
            for sheet in (0, 1):
                st = 2 * c + sheet
                act_s[st] = 2 * tab.perm_s[c] + (sheet ^ tab.sign_s[c])
                act_u[st] = 2 * tab.perm_u[c] + (sheet ^ tab.sign_u[c])
        return act_s, act_u

    def contains(self, m: SL2Matrix) -> bool:
        if not self.closed:
            raise RequiresClosedTable("membership needs a closed coset table")
        act_s, act_u = self._states()
        inv_s = [0] * len(act_s)
        inv_u = [0] * len(act_u)
        for i, j in enumerate(act_s):
            inv_s[j] = i
        for i, j in enumerate(act_u):
            inv_u[j] = i
        # the right action of a word w = x1...xk sends the base state to base.x1...xk
        st = 0
        for x in su_word(m):
            st = (act_s, inv_s, act_u, inv_u)[x][st]
        return st == 0

    def to_json(self):
        def idx(v):
            return "unbounded" if v is UNBOUNDED else v
        return {
            "generators": [g.to_json() for g in self.generators],
            "psl_index": idx(self.psl_index),
            "sl_index": idx(self.sl_index),
            "contains_minus_I": self.contains_minus_I,
            "mod2_image_order": self.mod2_image_order,
        }


def mod_n_image(generators: Sequence[SL2Matrix], n: int) -> frozenset:
    """Closure of the reductions mod n (a finite group, found by BFS)."""
    ident = reduce_mod(IDENTITY, n)
    gens = [reduce_mod(g, n) for g in generators]
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = matmul_mod(x, g, n)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def describe(generators: Sequence[SL2Matrix], max_cosets: int = DEFAULT_MAX_COSETS) -> SubgroupDescriptor:
    gens = tuple(generators)
    mod2 = len(mod_n_image(gens, 2))
    mod3 = len(mod_n_image(gens, 3))
    res = index_in_psl(gens, max_cosets)
    if res is UNBOUNDED:
        minus = _minus_identity_without_table(gens)
        return SubgroupDescriptor(gens, UNBOUNDED, UNBOUNDED, minus, None, mod2, mod3)
    n, table = res
    signs = _solve_signs(table, [su_word(g) for g in gens])
    if signs is None:
        return SubgroupDescriptor(gens, n, n, True, table, mod2, mod3)
    table = CosetTable(table.perm_s, table.perm_u, signs[0], signs[1])
    return SubgroupDescriptor(gens, n, 2 * n, False, table, mod2, mod3)


def sl_index(generators: Sequence[SL2Matrix], max_cosets: int = DEFAULT_MAX_COSETS):
    return describe(generators, max_cosets).sl_index


def intersection_index(d1: SubgroupDescriptor, d2: SubgroupDescriptor) -> int:
    """(SL(2, Z) : G1 n G2), the orbit size of the pair of base states."""
    if not (d1.closed and d2.closed):
        raise RequiresClosedTable("both enumerations must be closed")
    s1, u1 = d1._states()
    s2, u2 = d2._states()
    start = (0, 0)
    seen = {start}
    queue = deque([start])
    while queue:
        a, b = queue.popleft()
        for nxt in ((s1[a], s2[b]), (u1[a], u2[b])):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen)


def conjugate(generators: Sequence[SL2Matrix], g: SL2Matrix) -> list:
    gi = g.inverse()
    return [g * m * gi for m in generators]


_PHI = {"S": 3, "s": -3, "T": 1, "t": -1}


def abelianization_character(m: SL2Matrix) -> int:
    """The epimorphism SL(2, Z) -> Z/12 with S -> 3, T -> 1."""
    return sum(_PHI[ch] for ch in decompose_word(m).letters) % 12


@dataclass(frozen=True)
class TwistClassification:
    case: str  # "Equal", "IndexTwoSubgroup" or "AdjoinMinusI"
    witness: Optional[dict] = None

    def to_json(self):
        return {"case": self.case, "witness": self.witness}


def twist_group(generators: Sequence[SL2Matrix], signs: Sequence[int],
                max_cosets: int = DEFAULT_MAX_COSETS):
    """Group generated by sign_i * g_i, classified against <g_i>.

    Returns (descriptor, classification); the classification is None when
    either enumeration fails to close within the budget.
    """
    if len(signs) != len(generators):
        raise ValueError("one sign per generator is required")
    if any(s not in (1, -1) for s in signs):
        raise ValueError("signs must be +1 or -1")
    twisted = [g if s == 1 else -g for g, s in zip(generators, signs)]
    d1 = describe(generators, max_cosets)
    d2 = describe(twisted, max_cosets)
    if not (d1.closed and d2.closed):
        return d2, None
    if d1.sl_index == d2.sl_index and all(d1.contains(g) for g in d2.generators):
        return d2, TwistClassification("Equal")
    d3 = describe(list(generators) + [MINUS_I], max_cosets)
    if d3.sl_index == d2.sl_index and all(d2.contains(g) for g in d3.generators):
        return d2, TwistClassification("AdjoinMinusI", {"minus_I_in_input": False})
    h_index = intersection_index(d1, d2)
    if h_index != 2 * d1.sl_index:
        raise AssertionError("twisted group fits none of the three cases")
    return d2, TwistClassification("IndexTwoSubgroup", {"H_sl_index": h_index})


def schreier_bound(r: int) -> int:
    """12 (r - 1): the index bound for a subgroup generated by r elements."""
    if r < 2:
        raise InvalidRank("the bound needs at least two generators", r=r)
    return 12 * (r - 1)


def image_index(order: int, n: int) -> int:
    full = sl2_mod_order(n)
    assert full % order == 0
    return full // order
