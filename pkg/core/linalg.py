# core/linalg.py
"""Álgebra linear exata sobre Q (DomainMatrix do sympy) e determinante genérico."""
from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import QQ, Rational
from sympy.polys.matrices import DomainMatrix

from core.polyring import Exps, HPoly


def monomials(d: int) -> List[Exps]:
    """Monômios de grau d em três variáveis, em ordem lex decrescente."""
    if d < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(3), d):
        out.append(tuple(combo.count(i) for i in range(3)))
    return sorted(set(out), reverse=True)


def monomial_index(d: int) -> Dict[Exps, int]:
    return {m: i for i, m in enumerate(monomials(d))}


def coefficient_vector(P: HPoly, monos: Sequence[Exps]) -> List[Rational]:
    terms = P.terms()
    return [terms.get(m, Rational(0)) for m in monos]


def _is_zero(x) -> bool:
    flag = getattr(x, "is_zero", None)
    if flag is not None:
        return bool(flag)
    return x == 0


def det(rows: Sequence[Sequence]):
    """
    Determinante por expansão em subconjuntos de colunas (n·2^n produtos).

    Só usa + - * dos elementos: serve para racionais, HPoly e séries.
    """
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise ValueError("matriz quadrada não vazia esperada")
    layer: Dict[int, object] = {}
    for j in range(n):
        if not _is_zero(rows[0][j]):
            layer[1 << j] = rows[0][j]
    for i in range(1, n):
        nxt: Dict[int, object] = {}
        for mask, val in layer.items():
            for j in range(n):
                if mask & (1 << j) or _is_zero(rows[i][j]):
                    continue
                term = val * rows[i][j]
                # inversões: colunas já usadas à direita de j
                if bin(mask >> (j + 1)).count("1") % 2:
                    term = -term
                key = mask | (1 << j)
                nxt[key] = term if key not in nxt else nxt[key] + term
        layer = nxt
    full = (1 << n) - 1
    if full in layer:
        return layer[full]
    return rows[0][0] * 0


def _to_domain(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[QQ.from_sympy(Rational(x)) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _rref(rows: Sequence[Sequence], ncols: int) -> Tuple[list, Tuple[int, ...]]:
    reduced, pivots = _to_domain(rows, ncols).rref()
    mat = reduced.to_Matrix()
    return [[Rational(mat[i, j]) for j in range(ncols)] for i in range(len(pivots))], tuple(pivots)


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Rational]]:
    """Base do núcleo {x : A x = 0}."""
    if not rows:
        return [[Rational(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _rref(rows, ncols)
    return _kernel_from_rref(red, pivots, ncols)


def _kernel_from_rref(red, pivots, ncols) -> List[List[Rational]]:
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Rational(0)] * ncols
        v[f] = Rational(1)
        for k, p in enumerate(pivots):
            v[p] = -red[k][f]
        basis.append(v)
    return basis


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    if not rows:
        return 0
    return len(_rref(rows, ncols)[1])


def solve(
    rows: Sequence[Sequence], rhs: Sequence, ncols: int
) -> Tuple[Optional[List[Rational]], List[List[Rational]]]:
    """
    Resolve A x = b. Devolve (solução particular com livres = 0, base do núcleo),
    ou (None, []) se o sistema for inconsistente.
    """
    if not rows:
        return [Rational(0)] * ncols, nullspace([], ncols)
    augmented = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = _rref(augmented, ncols + 1)
    if ncols in pivots:
        return None, []
    particular = [Rational(0)] * ncols
    for k, p in enumerate(pivots):
        particular[p] = red[k][ncols]
    kernel = _kernel_from_rref([r[:ncols] for r in red], pivots, ncols)
    return particular, kernel


def polys_rank(polys: Sequence[HPoly]) -> int:
    """Posto da família sobre Q (todos do mesmo grau)."""
    nonzero = [P for P in polys if not P.is_zero]
    if not nonzero:
        return 0
    monos = monomials(nonzero[0].degree)
    return rank([coefficient_vector(P, monos) for P in nonzero], len(monos))
