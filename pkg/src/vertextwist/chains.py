"""Matrix elements of operator chains as windowed-lazy series.

A chain is <w', O_1(x_1) ... O_r(x_r) w> with one operator slot per variable.
Slots are applied right to left; each slot maps a coefficient request
(exponent, log power, incoming vector) to an outgoing vector.  Weight grading
makes every requested coefficient a finite (usually single-term) sum, and when
w' is supplied its weight pins the leftmost exponent outright.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InfiniteConvolution
from .scalars import Scalar, Vec
from .series import Series, coset_range

F0 = Fraction(0)


def pair(wprime: Vec, vec: Vec) -> Scalar:
    """Pairing against the orthonormal dual of the basis."""
    out = Scalar.zero()
    for key, c in wprime.items():
        out = out + c * vec.coeff(key)
    return out


class OpSlot:
    """Vertex-operator slot Y(u, x) over a module (twisted or plain)."""

    def __init__(self, module, uvec: Vec):
        self.module = module
        self.uvec = uvec
        self.wt = module.algebra_weight(uvec)
        self.parity = module.algebra_parity(uvec)
        al = module.algebra_coset(uvec)
        self._ecosets = frozenset(((-a - 1) % 1) for a in al)
        self.logmax = module.log_bound

    def ecosets(self, vec) -> frozenset:
        return self._ecosets

    def ecosets_meta(self) -> frozenset:
        return self._ecosets

    def apply(self, e: Fraction, k: int, vec: Vec) -> Vec:
        return self.module.mode_vec(self.uvec, -e - 1, k, vec)

    def wshift(self, e: Fraction) -> Fraction:
        return self.wt + e


class ChainSeries(Series):
    """<w'| slots |w> as a series; wprime=None yields vector coefficients."""

    def __init__(self, vars, slots, w0: Vec, w0_deg, wprime: Vec = None,
                 wprime_deg=None):
        n = len(vars)
        bounds = [(F0, F0)] * n
        cosets = [frozenset((F0,))] * n
        logmax = [0] * n
        slot_idx = [i for i, _ in slots]
        for pos, (i, s) in enumerate(slots):
            lo = hi = None
            if pos == len(slots) - 1:
                # rightmost operator acts on w directly
                lo = -w0_deg - s.wt
            if pos == 0 and wprime_deg is not None:
                hi = wprime_deg - s.wt
            bounds[i] = (lo, hi)
            cosets[i] = s.ecosets_meta()
            logmax[i] = s.logmax
        super().__init__(vars, bounds, cosets, logmax)
        self.slots = list(slots)
        self.w0, self.w0_deg = w0, w0_deg
        self.wprime, self.wprime_deg = wprime, wprime_deg
        self._slot_idx = slot_idx

    def _terms_in(self, box):
        # non-slot variables only ever carry exponent 0, log 0
        for i in range(len(self.vars)):
            if i in self._slot_idx:
                continue
            lo, hi = box.lows[i], box.highs[i]
            if (lo is not None and lo > 0) or (hi is not None and hi < 0):
                return {}
        out = {}
        order = list(reversed(self.slots))
        pinned = self.wprime_deg is not None
        total = None
        if pinned:
            total = self.wprime_deg - self.w0_deg - sum(s.wt for _, s in self.slots)

        nv = len(self.vars)

        def emit(assign, vec):
            powers = [F0] * nv
            logs = [0] * nv
            for i, (e, k) in assign.items():
                powers[i] = e
                logs[i] = k
            m = (tuple(powers), tuple(logs))
            if not box.contains(m):
                return
            val = pair(self.wprime, vec) if self.wprime is not None else vec
            if val.is_zero():
                return
            prev = out.get(m)
            out[m] = val if prev is None else prev + val

        def rec(pos, vec, deg, esum, assign):
            if vec.is_zero():
                return
            idx, slot = order[pos]
            last = pos == len(order) - 1
            caps = min(slot.logmax, box.logcaps[idx])
            if last and pinned:
                e = total - esum
                lo, hi = box.lows[idx], box.highs[idx]
                if (lo is not None and e < lo) or (hi is not None and e > hi):
                    return
                if not any((e - ec).denominator == 1 for ec in slot.ecosets(vec)):
                    return
                for k in range(caps + 1):
                    res = slot.apply(e, k, vec)
                    if res:
                        emit({**assign, idx: (e, k)}, res)
                return
            lo = -deg - slot.wt
            if box.lows[idx] is not None:
                lo = max(lo, box.lows[idx])
            hi = box.highs[idx]
            if hi is None:
                raise InfiniteConvolution(
                    "chain enumeration unbounded in %s" % self.vars[idx])
            for ec in sorted(slot.ecosets(vec)):
                for e in coset_range(lo, hi, ec):
                    for k in range(caps + 1):
                        res = slot.apply(e, k, vec)
                        if res:
                            if last:
                                emit({**assign, idx: (e, k)}, res)
                            else:
                                rec(pos + 1, res, deg + slot.wshift(e), esum + e,
                                    {**assign, idx: (e, k)})

        rec(0, self.w0, self.w0_deg, F0, {})
        return out
