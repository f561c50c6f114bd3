"""Hirzebruch-Jung cyclic quotient singularities.

A point of type ``A(n, q)`` is resolved by a chain of rational curves with
self-intersections ``-a_1, ..., -a_s`` where ``n/q = a_1 - 1/(a_2 - ...)``.
"""

from enum import Enum
from math import gcd

from .linalg import solve


class End(Enum):
    FIRST = "first"
    LAST = "last"


def _check_type(n, q):
    if not (isinstance(n, int) and isinstance(q, int)):
        raise TypeError("n and q must be integers")
    if n < 2 or not 1 <= q <= n - 1 or gcd(n, q) != 1:
        raise ValueError(f"invalid singularity type A({n},{q})")


def _check_chain(weights):
    weights = list(weights)
    if not weights:
        raise ValueError("empty chain")
    for a in weights:
        if not isinstance(a, int):
            raise TypeError("chain weights must be integers")
        if a < 2:
            raise ValueError(f"chain weight {a} < 2: not a minimal resolution chain")
    return weights


def hj_expand(n, q):
    """Weights ``[a_1, ..., a_s]`` of the negative continued fraction of n/q."""
    _check_type(n, q)
    weights = []
    while q:
        a = -(-n // q)
        weights.append(a)
        n, q = q, a * q - n
    return weights


def hj_contract(weights):
    """Inverse of :func:`hj_expand`: the type ``(n, q)`` of a chain."""
    weights = _check_chain(weights)
    n, q = weights[-1], 1
    for a in reversed(weights[:-1]):
        n, q = a * n - q, n
    return n, q


def chain_intersection_matrix(weights):
    s = len(weights)
    m = [[0] * s for _ in range(s)]
    for i, a in enumerate(weights):
        m[i][i] = -a
        if i + 1 < s:
            m[i][i + 1] = m[i + 1][i] = 1
    return m


def chain_discrepancies(weights):
    """Coefficients ``c_i`` of the exceptional curves in ``K = pi^* K + sum c_i E_i``."""
    weights = _check_chain(weights)
    return solve(chain_intersection_matrix(weights), [a - 2 for a in weights])


def boundary_index(weights, end=End.FIRST):
    weights = _check_chain(weights)
    end = End(end)
    return weights[0] if end is End.FIRST else weights[-1]
