"""Bridge concatenation and the contact-rich bridges built from small-span blocks."""

from __future__ import annotations

import math

from ..enumeration.ensembles import span_threshold
from ..errors import InvalidConfiguration
from ..lattice import Walk, add, origin, span, sub


def is_bridge(w: Walk) -> bool:
    """omega_d(0) < omega_d(i) <= omega_d(N) for every i >= 1 (and N >= 1)."""
    pts = w.points
    if len(pts) < 2:
        return False
    lo = pts[0][-1]
    hi = pts[-1][-1]
    return all(lo < p[-1] <= hi for p in pts[1:])


def concat_points(omega: Walk, psi: Walk) -> tuple:
    """Points of omega (+) psi.  Returned raw because the general splice
    need not be self-avoiding."""
    shift = sub(omega.points[-1], psi.points[0])
    return omega.points + tuple(add(p, shift) for p in psi.points[1:])


def bridge_concat(omega: Walk, psi: Walk) -> Walk:
    """omega (+) psi for bridges; the result is an (N+M)-step bridge."""
    for name, w in (("omega", omega), ("psi", psi)):
        if not is_bridge(w):
            raise InvalidConfiguration(f"{name} is not a bridge")
    return Walk(concat_points(omega, psi))


def split(theta: Walk, lengths) -> list:
    """Cut a walk into consecutive pieces of the given step counts, each re-rooted at the origin."""
    if sum(lengths) != theta.n_steps:
        raise InvalidConfiguration("piece lengths do not add up to the walk length")
    out = []
    i = 0
    for n in lengths:
        piece = theta.points[i:i + n + 1]
        shift = sub(origin(theta.d), piece[0])
        out.append(Walk(tuple(add(p, shift) for p in piece)))
        i += n
    return out


def xi_bridge(j: int, d: int) -> Walk:
    """The (j+1)-step bridge from the origin to (-j, 0, ..., 0, 1)."""
    pts = [origin(d)]
    top = (0,) * (d - 1) + (1,)
    pts.append(top)
    for i in range(1, j + 1):
        pts.append((-i,) + top[1:])
    return Walk(tuple(pts))


def in_d_class(w: Walk, n: int, j: int, m: int) -> bool:
    """Membership in D_{n,j,m}: a small-span n-step bridge that visits the
    plane x_1 = j at least ln^2 n times and ends on x_1 = m."""
    if w.n_steps != n or not is_bridge(w) or w.points[0] != origin(w.d):
        return False
    thr = span_threshold(n)
    if thr is not None and span(w) > thr:
        return False
    need = math.log(n) ** 2
    hits = sum(1 for p in w.points if p[0] == j)
    return hits >= need and w.points[-1][0] == m


def build_zeta(omegas, psis, n: int, j: int, m: int) -> Walk:
    """xi (+) omega[1] (+) psi[1] (+) ... (+) omega[k] (+) psi[k].

    ``omegas`` must lie in D_{n,j,m} and ``psis`` in D_{n,-j,-m}.  The result
    is a bridge of length j + 1 + 2kn with at least k ln^2 n surface sites.
    """
    if len(omegas) != len(psis) or not omegas:
        raise InvalidConfiguration("need k >= 1 omegas and the same number of psis")
    if j < 0:
        raise InvalidConfiguration("J must be nonnegative")
    for w in omegas:
        if not in_d_class(w, n, j, m):
            raise InvalidConfiguration(f"omega not in D_(n={n}, {j}, {m})")
    for w in psis:
        if not in_d_class(w, n, -j, -m):
            raise InvalidConfiguration(f"psi not in D_(n={n}, {-j}, {-m})")
    d = omegas[0].d
    zeta = xi_bridge(j, d)
    for w, p in zip(omegas, psis):
        zeta = bridge_concat(zeta, w)
        zeta = bridge_concat(zeta, p)
    return zeta


def split_zeta(zeta: Walk, n: int, j: int, k: int) -> tuple:
    """Recover ``(omegas, psis)`` from a zeta of length j + 1 + 2kn."""
    pieces = split(zeta, [j + 1] + [n] * (2 * k))
    return pieces[1::2], pieces[2::2]
