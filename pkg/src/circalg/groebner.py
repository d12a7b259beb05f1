"""Buchberger's algorithm with the normal selection strategy and the
Gebauer-Moeller pair criteria.

Internally polynomials are dicts ``{exponent_tuple: mpq}`` over a fixed
variable list (highest priority first) and basis elements are kept monic.
Results are exported as primitive integer MultiPolys.
"""

from __future__ import annotations

import heapq
import logging
import os
import time
from dataclasses import dataclass, field

from math import gcd, isqrt

from gmpy2 import mpq, mpz, next_prime

from .algebra.poly import MonomialOrder, MultiPoly, var_key

log = logging.getLogger(__name__)


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when a basis computation exceeds its resource budget."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 10**6
    max_coeff_bits: int = 10**5
    max_seconds: float | None = None

    @classmethod
    def from_env(cls) -> "Budget":
        pairs = os.environ.get("CIRCALG_BUDGET_PAIRS")
        secs = os.environ.get("CIRCALG_BUDGET_SECONDS")
        bits = os.environ.get("CIRCALG_BUDGET_BITS")
        return cls(
            max_pairs=int(pairs) if pairs else 10**6,
            max_coeff_bits=int(bits) if bits else 10**5,
            max_seconds=float(secs) if secs else None,
        )


@dataclass
class PolySystem:
    generators: list
    unknowns: tuple
    parameters: tuple = ()

    def __post_init__(self):
        self.generators = [MultiPoly.coerce(g) for g in self.generators]
        self.unknowns = tuple(self.unknowns)
        self.parameters = tuple(self.parameters)
        allowed = set(self.unknowns) | set(self.parameters)
        for g in self.generators:
            extra = set(g.variables) - allowed
            if extra:
                raise ValueError(f"generator {g} uses undeclared symbols {sorted(extra)}")

    @property
    def variables(self) -> tuple:
        return self.unknowns + self.parameters

    def lex_order(self) -> MonomialOrder:
        return MonomialOrder("lex", self.variables)


@dataclass
class GroebnerBasis:
    polys: list
    order: MonomialOrder
    reduced: bool = True
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def leading_monomials(self):
        return [p.leading_monomial(self.order) for p in self.polys]


# internal representation ---------------------------------------------------


class _Ring:
    """Fixed variable list plus order-specific key functions on exponent tuples."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.gens = order.priority
        self.n = len(self.gens)
        self.index = {v: i for i, v in enumerate(self.gens)}
        if order.kind == "lex":
            self.key = lambda e: e
            self.heap_key = lambda e: tuple(-x for x in e)
        else:
            self.key = lambda e: (sum(e), tuple(-x for x in reversed(e)))
            self.heap_key = lambda e: (-sum(e), tuple(reversed(e)))

    def from_poly(self, p: MultiPoly) -> dict:
        out = {}
        n, idx = self.n, self.index
        for m, c in p.terms.items():
            e = [0] * n
            for v, k in m:
                e[idx[v]] = k
            out[tuple(e)] = mpq(c)
        return out

    def to_poly(self, d: dict) -> MultiPoly:
        terms = {}
        gens = self.gens
        for e, c in d.items():
            m = tuple(sorted(((gens[i], k) for i, k in enumerate(e) if k), key=lambda t: var_key(t[0])))
            terms[m] = c
        return MultiPoly(terms)

    def lead(self, d: dict):
        return max(d, key=self.key)


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a, b):
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Elem:
    __slots__ = ("lm", "tail", "terms", "sugar")

    def __init__(self, terms: dict, lm, sugar: int):
        self.terms = terms
        self.lm = lm
        self.tail = [(e, c) for e, c in terms.items() if e != lm]
        self.sugar = sugar


def _monic(ring: _Ring, d: dict):
    lm = ring.lead(d)
    lc = d[lm]
    if lc != 1:
        inv = 1 / lc
        d = {e: c * inv for e, c in d.items()}
    return d, lm


def _reduce(ring: _Ring, p: dict, basis: list, full: bool = True) -> dict:
    """Normal form of p modulo monic `basis` (list of _Elem)."""
    hk = ring.heap_key
    work = dict(p)
    heap = [(hk(e), e) for e in work]
    heapq.heapify(heap)
    rem = {}
    leads = [(b.lm, b) for b in basis]
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        for lm, b in leads:
            if _divides(lm, m):
                q = tuple(x - y for x, y in zip(m, lm))
                for e, bc in b.tail:
                    t = tuple(x + y for x, y in zip(e, q))
                    old = work.get(t)
                    if old is None:
                        work[t] = -c * bc
                        heapq.heappush(heap, (hk(t), t))
                    else:
                        v = old - c * bc
                        if v:
                            work[t] = v
                        else:
                            del work[t]
                break
        else:
            rem[m] = c
            if not full:
                rem.update(work)
                return rem
    return rem


def _coeff_bits(d: dict) -> int:
    best = 0
    for c in d.values():
        b = max(c.numerator.bit_length(), c.denominator.bit_length())
        if b > best:
            best = b
    return best


def _spoly(f: _Elem, g: _Elem) -> dict:
    lcm = _lcm(f.lm, g.lm)
    qf = tuple(x - y for x, y in zip(lcm, f.lm))
    qg = tuple(x - y for x, y in zip(lcm, g.lm))
    out = {}
    for e, c in f.tail:
        out[tuple(x + y for x, y in zip(e, qf))] = c
    for e, c in g.tail:
        t = tuple(x + y for x, y in zip(e, qg))
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def _buchberger_internal(ring: _Ring, gens: list, budget: Budget, stats: dict):
    start = time.monotonic()
    G: list[_Elem] = []
    pairs: list = []  # heap entries (key, counter, i, j)
    counter = 0

    def sel_key(lcm, sugar):
        return (sum(lcm), sugar, ring.key(lcm))

    def update(h: _Elem):
        nonlocal pairs, counter
        k = len(G)
        # Gebauer-Moeller: candidate pairs (i, k)
        cand = []
        for i, g in enumerate(G):
            if isinstance(g, _Retired):
                continue
            cand.append((i, _lcm(g.lm, h.lm), _coprime(g.lm, h.lm)))
        # chain criterion on new pairs: drop (i,k) if lcm strictly divisible by another lcm(j,k)
        keep = []
        for a, (i, l_ik, cop) in enumerate(cand):
            drop = False
            for b, (j, l_jk, _) in enumerate(cand):
                if a != b and _divides(l_jk, l_ik) and (l_jk != l_ik or b < a):
                    drop = True
                    break
            if not drop:
                keep.append((i, l_ik, cop))
        # product criterion after chain pruning
        new_pairs = [(i, l) for i, l, cop in keep if not cop]
        # drop old pairs (i,j) with lm(h) | lcm(i,j) and lcm(i,k), lcm(j,k) both != lcm(i,j)
        if pairs:
            filtered = []
            for entry in pairs:
                _, _, i, j, l_ij = entry
                if _divides(h.lm, l_ij):
                    l_ik = _lcm(G[i].lm, h.lm)
                    l_jk = _lcm(G[j].lm, h.lm)
                    if l_ik != l_ij and l_jk != l_ij:
                        stats["chain_skipped"] += 1
                        continue
                filtered.append(entry)
            if len(filtered) != len(pairs):
                pairs = filtered
                heapq.heapify(pairs)
        stats["product_skipped"] += sum(1 for _, _, cop in keep if cop)
        G.append(h)
        for i, l in new_pairs:
            sugar = max(G[i].sugar + sum(l) - sum(G[i].lm), h.sugar + sum(l) - sum(h.lm))
            counter += 1
            heapq.heappush(pairs, (sel_key(l, sugar), counter, i, k, l))
        # retire basis elements whose leading monomial is now redundant
        for i, g in enumerate(G[:-1]):
            if not isinstance(g, _Retired) and _divides(h.lm, g.lm):
                G[i] = _Retired(g)

    for d in gens:
        if not d:
            continue
        d = _reduce(ring, d, [g for g in G if not isinstance(g, _Retired)])
        if not d:
            continue
        d, lm = _monic(ring, d)
        update(_Elem(d, lm, sum(lm)))

    while pairs:
        key, _, i, j, l = heapq.heappop(pairs)
        stats["pairs"] += 1
        if stats["pairs"] > budget.max_pairs:
            raise GroebnerBudgetExceeded(f"S-pair budget {budget.max_pairs} exceeded")
        if budget.max_seconds is not None and time.monotonic() - start > budget.max_seconds:
            raise GroebnerBudgetExceeded(f"time budget {budget.max_seconds}s exceeded")
        s = _spoly(G[i], G[j])
        active = [g for g in G if not isinstance(g, _Retired)]
        h = _reduce(ring, s, active)
        if not h:
            stats["zero_reductions"] += 1
            continue
        bits = _coeff_bits(h)
        if bits > budget.max_coeff_bits:
            raise GroebnerBudgetExceeded(f"coefficient size {bits} bits exceeds budget {budget.max_coeff_bits}")
        h, lm = _monic(ring, h)
        update(_Elem(h, lm, key[1]))
        if stats["pairs"] % 200 == 0:
            log.debug("pairs=%d basis=%d queue=%d", stats["pairs"], len(G), len(pairs))
    return [g for g in G if not isinstance(g, _Retired)]


class _Retired(_Elem):
    """A basis element superseded as a reducer but still referenced by pairs."""

    def __init__(self, g: _Elem):
        self.terms, self.lm, self.tail, self.sugar = g.terms, g.lm, g.tail, g.sugar


def _interreduce(ring: _Ring, G: list) -> list:
    # minimal basis: drop elements whose lm is divisible by another's
    G = sorted(G, key=lambda g: ring.key(g.lm))
    minimal = []
    for g in G:
        if not any(_divides(h.lm, g.lm) for h in minimal):
            minimal.append(g)
    out = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1 :]
        tail = _reduce(ring, {e: c for e, c in g.tail}, others)
        tail[g.lm] = mpq(1)
        out.append(_Elem(tail, g.lm, g.sugar))
    return out


def _primitive(p: MultiPoly, order: MonomialOrder) -> MultiPoly:
    return p.content_primitive(order)[1]


def buchberger(system, order: MonomialOrder | None = None, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by `system`.

    `system` is a PolySystem or a list of polynomials; `order` defaults to
    lex on the system's variables.  Output elements are primitive integer
    polynomials with positive leading coefficient, sorted by increasing
    leading monomial.
    """
    if not isinstance(system, PolySystem):
        polys = [MultiPoly.coerce(p) for p in system]
        vs = set()
        for p in polys:
            vs.update(p.variables)
        system = PolySystem(polys, tuple(sorted(vs, key=var_key)))
    if order is None:
        order = system.lex_order()
    allvars = set(system.variables)
    for g in system.generators:
        allvars.update(g.variables)
    order = order.extended(allvars)
    budget = budget or Budget.from_env()
    ring = _Ring(order)
    gens = [ring.from_poly(g) for g in system.generators if not g.is_zero()]
    stats = {"pairs": 0, "zero_reductions": 0, "chain_skipped": 0, "product_skipped": 0}
    t0 = time.monotonic()
    if not gens:
        return GroebnerBasis([], order, True, stats)
    if any(g.has_quad() for g in system.generators):
        raise ValueError("Groebner bases are computed over Q only")
    G = _buchberger_internal(ring, gens, budget, stats)
    G = _interreduce(ring, G)
    polys = [_primitive(ring.to_poly(g.terms), order) for g in G]
    stats["seconds"] = time.monotonic() - t0
    return GroebnerBasis(polys, order, True, stats)


def s_polynomial(f, g, order: MonomialOrder) -> MultiPoly:
    """S(f, g) = (L/lt f) f - (L/lt g) g with L the lcm of leading monomials."""
    from .algebra.poly import mono_div, mono_lcm

    f, g = MultiPoly.coerce(f), MultiPoly.coerce(g)
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    order = order.extended(set(f.variables) | set(g.variables))
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    L = mono_lcm(mf, mg)
    return f.mul_term(mono_div(L, mf), 1 / cf) - g.mul_term(mono_div(L, mg), 1 / cg)


def normal_form(p, basis, order: MonomialOrder) -> MultiPoly:
    """Fully reduced remainder of p modulo `basis` (monic normalization internally)."""
    p = MultiPoly.coerce(p)
    basis = [MultiPoly.coerce(b) for b in basis if not MultiPoly.coerce(b).is_zero()]
    vs = set(p.variables)
    for b in basis:
        vs.update(b.variables)
    order = order.extended(vs)
    if p.has_quad() or any(b.has_quad() for b in basis):
        from .algebra.poly import multivariate_divide

        return multivariate_divide(p, basis, order)[1]
    ring = _Ring(order)
    elems = []
    for b in basis:
        d, lm = _monic(ring, ring.from_poly(b))
        elems.append(_Elem(d, lm, sum(lm)))
    return ring.to_poly(_reduce(ring, ring.from_poly(p), elems))


def eliminate(system, keep, budget: Budget | None = None, basis: GroebnerBasis | None = None) -> list:
    """Generators of the elimination ideal in the `keep` symbols.

    Uses a lex basis with every non-kept variable ranked above the kept
    ones (relative order otherwise as in the system).
    """
    if not isinstance(system, PolySystem):
        polys = [MultiPoly.coerce(p) for p in system]
        vs = set()
        for p in polys:
            vs.update(p.variables)
        system = PolySystem(polys, tuple(sorted(vs, key=var_key)))
    keep = tuple(keep)
    unknown = set(keep) - set(system.variables)
    if unknown:
        raise ValueError(f"keep symbols {sorted(unknown)} not in system")
    drop = tuple(v for v in system.variables if v not in keep)
    kept = tuple(v for v in system.variables if v in keep)
    order = MonomialOrder("lex", drop + kept)
    if basis is None or basis.order != order:
        basis = buchberger(system, order, budget)
    ks = set(keep)
    return [g for g in basis.polys if set(g.variables) <= ks]


def is_zero_dimensional(gb: GroebnerBasis, unknowns=None) -> bool:
    """Pure-power test: every unknown is the sole variable of some leading monomial."""
    if unknowns is None:
        unknowns = gb.order.priority
    if any(p.is_constant() and not p.is_zero() for p in gb.polys):
        return True  # unit ideal: empty variety
    pure = set()
    for p in gb.polys:
        lm = p.leading_monomial(gb.order)
        if len(lm) == 1:
            pure.add(lm[0][0])
    return all(v in pure for v in unknowns)


def certify(gb: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero modulo the basis."""
    polys = gb.polys
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            s = s_polynomial(polys[i], polys[j], gb.order)
            if not normal_form(s, polys, gb.order).is_zero():
                return False
    return True


def fglm(gb: GroebnerBasis, target: MonomialOrder, budget: Budget | None = None,
         method: str = "rational") -> GroebnerBasis:
    """Change a reduced basis of a zero-dimensional ideal to another order.

    Linear algebra in the quotient ring: monomials are visited in increasing
    target order, their normal forms w.r.t. `gb` are tested for linear
    dependence on the normal forms of earlier standard monomials, and each
    dependence is a new basis element.

    method="rational" runs this over Q.  method="modular" runs it modulo
    62-bit primes, lifts by CRT and rational reconstruction, and then proves
    the lifted basis correct over Q (see _verify_lift); it falls back to the
    rational run if no lift verifies within the prime budget.
    """
    if method not in ("rational", "modular"):
        raise ValueError(f"unknown fglm method {method!r}")
    budget = budget or Budget.from_env()
    t0 = time.monotonic()
    src = _Ring(gb.order)
    target = target.extended(src.gens)
    if set(target.priority) != set(src.gens):
        raise ValueError("target order must use the same variables")
    if any(p.is_constant() and not p.is_zero() for p in gb.polys):
        return GroebnerBasis([MultiPoly.const(1)], target, True, {"seconds": 0.0})
    if not is_zero_dimensional(gb, src.gens):
        raise ValueError("order change needs a zero-dimensional ideal")
    elems = []
    for p in gb.polys:
        d, lm = _monic(src, src.from_poly(p))
        elems.append(_Elem(d, lm, sum(lm)))
    perm = [src.index[v] for v in target.priority]
    tkey = _Ring(MonomialOrder(target.kind, target.priority)).key

    def tk(e):  # target-order key of a source exponent tuple
        return tkey(tuple(e[i] for i in perm))

    stats = {"source_size": len(gb.polys), "method": method}
    out = None
    if method == "modular":
        out, std_list, stats["primes"] = _fglm_modular(src, elems, tk, budget, t0, target)
        if out is None:
            log.info("modular order change did not verify; falling back to rational")
            stats["method"] = "rational"
    if out is None:
        out, std_list = _fglm_core(src, elems, tk, budget, t0, _Q)
    polys = [_primitive(src.to_poly(p), target) for p in out]
    polys.sort(key=lambda p: target.key(p.leading_monomial(target)))
    stats.update(seconds=time.monotonic() - t0, quotient_dim=len(std_list))
    return GroebnerBasis(polys, target, True, stats)


class _Q:
    """Field operations for the rational FGLM run."""

    red = staticmethod(lambda x: x)
    inv = staticmethod(lambda x: 1 / x)
    one = mpq(1)


class _Fp:
    def __init__(self, p: int):
        self.p = p
        self.one = 1

    def red(self, x):
        return x % self.p

    def inv(self, x):
        return pow(x, -1, self.p)


def _fglm_core(src: _Ring, elems: list, tk, budget: Budget, t0: float, F) -> tuple:
    """FGLM traversal over the field F; returns (new basis dicts, target-standard monomials)."""
    red, one = F.red, F.one
    lms = [e.lm for e in elems]
    cache: dict = {}

    def nf_mono(e):
        r = cache.get(e)
        if r is None:
            r = _reduce(src, {e: one}, elems) if any(_divides(lm, e) for lm in lms) else {e: one}
            if red is not _Q.red:
                r = {k: red(v) for k, v in r.items() if red(v)}
            cache[e] = r
        return r

    n = src.n
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    zero = (0,) * n
    std_nf: dict = {zero: {zero: one}}  # target-standard monomial -> normal form
    std_list: list = []
    rows: list = []  # (pivot, vec, combo) in insertion order
    new_lms: list = []
    out: list = []
    heap = [(tk(zero), zero, None, None)]
    seen = {zero}
    while heap:
        if budget.max_seconds is not None and time.monotonic() - t0 > budget.max_seconds:
            raise GroebnerBudgetExceeded(f"order change exceeded {budget.max_seconds} s")
        _, m, parent, var = heapq.heappop(heap)
        if any(_divides(lm, m) for lm in new_lms):
            continue
        if parent is None:
            v = dict(std_nf[zero])
        else:
            v = {}
            u = units[var]
            for t, c in std_nf[parent].items():
                for e, cc in nf_mono(tuple(x + y for x, y in zip(t, u))).items():
                    val = red(v.get(e, 0) + c * cc)
                    if val:
                        v[e] = val
                    else:
                        v.pop(e, None)
        w = dict(v)
        acc: dict = {}
        for piv, vec, combo in rows:
            c = w.get(piv)
            if not c:
                continue
            for e, x in vec.items():
                val = red(w.get(e, 0) - c * x)
                if val:
                    w[e] = val
                else:
                    w.pop(e, None)
            for j, x in combo.items():
                val = red(acc.get(j, 0) + c * x)
                if val:
                    acc[j] = val
                else:
                    acc.pop(j, None)
        if not w:
            poly = {m: one}
            for j, x in acc.items():
                poly[std_list[j]] = red(poly.get(std_list[j], 0) - x)
            out.append(poly)
            new_lms.append(m)
            continue
        idx = len(std_list)
        std_list.append(m)
        std_nf[m] = v
        piv = max(w, key=src.key)
        inv = F.inv(w[piv])
        vec = {e: red(x * inv) for e, x in w.items()}
        combo = {j: red(-x * inv) for j, x in acc.items()}
        combo[idx] = inv
        rows.append((piv, vec, combo))
        for i in range(n):
            nm = tuple(x + y for x, y in zip(m, units[i]))
            if nm not in seen:
                seen.add(nm)
                heapq.heappush(heap, (tk(nm), nm, m, i))
    return out, std_list


# modular order change ----------------------------------------------------------

_MAX_PRIMES = 400


def _primes():
    p = mpz(2) ** 62
    while True:
        p = next_prime(p)
        yield int(p)


def _elems_mod(elems: list, p: int):
    out = []
    for e in elems:
        terms = {}
        for k, c in e.terms.items():
            den = int(c.denominator) % p
            if den == 0:
                return None
            terms[k] = int(c.numerator) * pow(den, -1, p) % p
        out.append(_Elem(terms, e.lm, e.sugar))
    return out


def _ratrecon(a: int, m: int):
    """Rational r/s = a mod m with |r|, |s| <= sqrt(m/2), or None."""
    bound = isqrt(m // 2)
    r0, r1, s0, s1 = m, a % m, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or s1 == 0:
        return None
    if gcd(r1, s1) != 1:
        return None
    return mpq(r1, s1)


def _fglm_modular(src: _Ring, elems: list, tk, budget: Budget, t0: float, target: MonomialOrder):
    """Returns (basis dicts over Q, standard monomials, primes used) or (None, None, n)."""
    shape = None  # (standard monomials, leading monomials) of the accepted images
    residues: list = []  # per new basis element: [coefficient residues over (lm, *std)]
    modulus = 1
    used = 0
    next_try = 1
    for p in _primes():
        if used >= _MAX_PRIMES:
            return None, None, used
        ep = _elems_mod(elems, p)
        if ep is None:
            continue
        out, std = _fglm_core(src, ep, tk, budget, t0, _Fp(p))
        lms = [next(iter(d)) for d in out]
        if shape is not None and (std, lms) != shape:
            # an unlucky prime finds a spurious dependence: its standard set is larger in target order
            if sorted(map(tk, std)) > sorted(map(tk, shape[0])):
                continue
            shape = None
        images = [[d.get(e, 0) for e in [lm, *std]] for lm, d in zip(lms, out)]
        if shape is None:
            shape, residues, modulus, used, next_try = (std, lms), images, p, 1, 1
        else:
            used += 1
            inv = pow(modulus, -1, p)
            for acc, img in zip(residues, images):
                for i, r in enumerate(img):
                    acc[i] += modulus * ((r - acc[i]) * inv % p)
            modulus *= p
        if used < next_try:
            continue
        next_try = max(used + 1, int(used * 1.25))
        lifted = _lift(residues, modulus, *shape)
        if lifted is not None and _verify_lift(src, elems, lifted, std, target):
            return lifted, list(std), used
    return None, None, used


def _lift(residues: list, modulus: int, std: list, lms: list):
    out = []
    for acc, lm in zip(residues, lms):
        d = {}
        for e, a in zip([lm, *std], acc):
            q = _ratrecon(a, modulus)
            if q is None:
                return None
            if q:
                d[e] = q
        out.append(d)
    return out


def _verify_lift(src: _Ring, elems: list, lifted: list, std: list, target: MonomialOrder) -> bool:
    """Exact proof that `lifted` is the reduced target-order basis of the source ideal I.

    With G = lifted: (1) every source generator reduces to 0 modulo G, so
    I is contained in <G>; (2) G is a Groebner basis; (3) the leading
    monomials of G leave exactly dim Q[x]/I standard monomials.  Then
    dim Q[x]/<G> = dim Q[x]/I, and with (1) this forces <G> = I.
    """
    tgt = _Ring(target)
    perm = [src.index[v] for v in tgt.gens]

    def move(d):
        return {tuple(e[i] for i in perm): c for e, c in d.items()}

    G = []
    for d in lifted:
        dt = move(d)
        G.append(_Elem(dt, tgt.lead(dt), 0))
    source_dim = _quotient_dim([e.lm for e in elems], src.n)
    if len(std) != source_dim or _quotient_dim([g.lm for g in G], tgt.n) != source_dim:
        return False
    if any(_reduce(tgt, move(e.terms), G) for e in elems):
        return False
    for i, a in enumerate(G):
        for b in G[i + 1:]:
            if _coprime(a.lm, b.lm):
                continue
            lcm = _lcm(a.lm, b.lm)
            qa = tuple(x - y for x, y in zip(lcm, a.lm))
            qb = tuple(x - y for x, y in zip(lcm, b.lm))
            spol = {}
            for e, c in a.tail:
                t = tuple(x + y for x, y in zip(e, qa))
                spol[t] = spol.get(t, 0) + c
            for e, c in b.tail:
                t = tuple(x + y for x, y in zip(e, qb))
                spol[t] = spol.get(t, 0) - c
            spol = {e: c for e, c in spol.items() if c}
            if spol and _reduce(tgt, spol, G):
                return False
    return True


def _quotient_dim(lms: list, n: int) -> int:
    """Number of monomials not divisible by any of `lms` (finite for zero-dimensional ideals)."""
    bounds = [0] * n
    for lm in lms:
        nz = [i for i, x in enumerate(lm) if x]
        if len(nz) == 1:
            bounds[nz[0]] = lm[nz[0]]
    count = 0
    stack = [()]
    while stack:
        pre = stack.pop()
        i = len(pre)
        for k in range(bounds[i]):
            e = pre + (k,)
            # extensions only raise exponents, so a divisible prefix stays divisible
            if any(_divides(lm, e + (0,) * (n - i - 1)) for lm in lms):
                break
            if i + 1 == n:
                count += 1
            else:
                stack.append(e)
    return count
