"""Brute-force references used by the tests. Nothing here touches the slope
formulas in ecblind.curve; group addition is recovered from collinearity
alone on curves small enough to enumerate."""

from __future__ import annotations


def affine_points(q: int, a: int, b: int) -> list[tuple[int, int]]:
    return [(x, y) for x in range(q) for y in range(q) if (y * y - x**3 - a * x - b) % q == 0]


def collinear(q: int, p1, p2, p3) -> bool:
    (x1, y1), (x2, y2), (x3, y3) = p1, p2, p3
    return ((x2 - x1) * (y3 - y1) - (y2 - y1) * (x3 - x1)) % q == 0


def chord_add(q: int, pts: list[tuple[int, int]], p, r):
    """P + R for distinct affine P != -R, read off the chord: the residual
    intersection T gives P + R = -T. Returns None when the chord is tangent
    at P or R (no third distinct intersection), which this oracle can't
    disambiguate."""
    third = [t for t in pts if t != p and t != r and collinear(q, p, r, t)]
    if len(third) != 1:
        return None
    tx, ty = third[0]
    return (tx, -ty % q)


def chord_double(q: int, pts, p):
    """2P as (P + W) + (P - W), all three sums taken by chords, over every
    auxiliary W that keeps the chords unambiguous. All W must agree."""
    found = set()
    for w in pts:
        neg_w = (w[0], -w[1] % q)
        if w[0] == p[0]:
            continue
        u = chord_add(q, pts, p, w)
        v = chord_add(q, pts, p, neg_w)
        if u is None or v is None or u[0] == v[0]:
            continue
        d = chord_add(q, pts, u, v)
        if d is not None:
            found.add(d)
    return found.pop() if len(found) == 1 else None


def multiples(add, zero, g, count: int) -> list:
    """[0*G, 1*G, ..., (count-1)*G] by repeated addition."""
    out = [zero]
    for _ in range(count - 1):
        out.append(add(out[-1], g))
    return out


def is_prime_naive(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))
