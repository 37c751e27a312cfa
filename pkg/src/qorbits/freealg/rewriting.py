"""Word rewriting with truncated completion, used as an independent oracle
for the linear-algebra dimension counts.

Rules map a leading word (deglex largest) to a combination of smaller
words.  Ambiguities (overlaps and inclusions) of length <= maxlen are
resolved Buchberger-style until no new rule of length <= maxlen appears.
Coefficients are exact rationals.
"""

from __future__ import annotations

from fractions import Fraction


def _key(w):
    return (len(w), w)


def _lead(p: dict):
    return max(p, key=_key)


class RewriteSystem:
    def __init__(self, maxlen: int):
        self.maxlen = maxlen
        self.rules: dict[tuple, dict] = {}

    def _find(self, w):
        """First rule occurrence in w as (position, lhs) or None."""
        for i in range(len(w)):
            for j in range(i + 1, len(w) + 1):
                sub = w[i:j]
                if sub in self.rules:
                    return i, sub
        return None

    def reduce(self, p: dict) -> dict:
        p = {w: c for w, c in p.items() if c}
        done = {}
        while p:
            w = _lead(p)
            c = p.pop(w)
            hit = self._find(w)
            if hit is None:
                done[w] = c
                continue
            i, lhs = hit
            pre, post = w[:i], w[i + len(lhs):]
            for v, cv in self.rules[lhs].items():
                nw = pre + v + post
                nv = p.get(nw, 0) + c * cv
                if nv:
                    p[nw] = nv
                else:
                    p.pop(nw, None)
        return done

    def _ambiguities(self, a, b):
        """Words where lhs a and lhs b overlap or one contains the other."""
        out = []
        for k in range(1, min(len(a), len(b))):
            if a[-k:] == b[:k]:
                out.append((a + b[k:], (0, a), (len(a) - k, b)))
        if a != b:
            for i in range(len(a) - len(b) + 1):
                if a[i:i + len(b)] == b:
                    out.append((a, (0, a), (i, b)))
        return out

    def _apply_at(self, w, pos, lhs):
        pre, post = w[:pos], w[pos + len(lhs):]
        return {pre + v + post: c for v, c in self.rules[lhs].items()}

    def add(self, p: dict):
        queue = [p]
        while queue:
            r = self.reduce(queue.pop())
            if not r:
                continue
            w = _lead(r)
            if len(w) > self.maxlen:
                continue
            c = r.pop(w)
            self.rules[w] = {v: -cv / c for v, cv in r.items()}
            for other in list(self.rules):
                for a, b in ((w, other), (other, w)):
                    if a not in self.rules or b not in self.rules:
                        continue
                    for word, (pa, la), (pb, lb) in self._ambiguities(a, b):
                        if len(word) > self.maxlen:
                            continue
                        x = self._apply_at(word, pa, la)
                        y = self._apply_at(word, pb, lb)
                        diff = dict(x)
                        for v, cv in y.items():
                            diff[v] = diff.get(v, 0) - cv
                        queue.append(diff)
        return self

    def normal_word_counts(self, upto: int, g: int) -> list[int]:
        counts = []
        layer = [()]
        for k in range(upto + 1):
            if k:
                layer = [w + (x,) for w in layer for x in range(g)]
                layer = [w for w in layer if self._find(w) is None]
            counts.append(len(layer))
        return counts


def completion_dims(relations, g: int, upto: int, maxlen: int) -> list[int]:
    """Graded normal-word counts for relations given as dicts word -> Fraction."""
    rs = RewriteSystem(maxlen)
    for rel in relations:
        rs.add({tuple(w): Fraction(c) for w, c in rel.items()})
    return rs.normal_word_counts(upto, g)
