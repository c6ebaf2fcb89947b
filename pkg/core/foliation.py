# core/foliation.py
"""
Derivações homogêneas (folheações do plano), a construção jacobiana ∂_{P,Q},
Wronskianos e a equivalência projetiva módulo uma curva.

Convenção: ∂ = G0·∂_{X0} + G1·∂_{X1} + G2·∂_{X2}, todos os G_i de grau m.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Rational

from core.factorization import Factorization
from core.linalg import det, monomial_index, monomials, solve
from core.logs import get_logger, log_event
from core.polyring import Exps, HPoly, InexactDivision, Scalar, coprime, gcd_many
from core.powerseries import HSeries, VFamily, divide_by_series
from core.validators import DegenerateDerivation

logger = get_logger("ramlim.folheacao")


# ---------------------------------------------------------------------------
# Derivações com coeficientes polinomiais
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    coeffs: Tuple[HPoly, HPoly, HPoly]
    degree: int

    @classmethod
    def of(cls, G0: HPoly, G1: HPoly, G2: HPoly, degree: Optional[int] = None) -> "Derivation":
        coeffs = (G0, G1, G2)
        degrees = {G.degree for G in coeffs if not G.is_zero}
        if len(degrees) > 1:
            raise ValueError(f"coeficientes de graus distintos: {sorted(degrees)}")
        if degrees:
            degree = degrees.pop()
        elif degree is None:
            degree = 0
        return cls(coeffs, degree)

    @property
    def is_zero(self) -> bool:
        return all(G.is_zero for G in self.coeffs)

    def apply(self, P: HPoly) -> HPoly:
        out = HPoly.zero()
        for G, dP in zip(self.coeffs, P.gradient()):
            if not G.is_zero and not dP.is_zero:
                out = out + G * dP
        return out

    def scale(self, c: Union[Scalar, HPoly]) -> "Derivation":
        if isinstance(c, HPoly):
            return Derivation.of(*(G * c for G in self.coeffs), degree=self.degree + c.degree)
        return Derivation.of(*(G * c for G in self.coeffs), degree=self.degree)

    def minors(self) -> Tuple[HPoly, HPoly, HPoly]:
        """Menores maximais de [[X0, X1, X2], [G0, G1, G2]]."""
        X = [HPoly.var(i) for i in range(3)]
        G = self.coeffs
        return (
            X[0] * G[1] - X[1] * G[0],
            X[0] * G[2] - X[2] * G[0],
            X[1] * G[2] - X[2] * G[1],
        )

    def to_strings(self) -> List[str]:
        return [str(G) for G in self.coeffs]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_strings()) + ")"


def euler_derivation() -> Derivation:
    return Derivation.of(HPoly.var(0), HPoly.var(1), HPoly.var(2))


def cross_derivation(row_a: Sequence, row_b: Sequence):
    """det [row_a; row_b; ∇] para linhas de HPoly (Derivation) ou de HSeries (DerivationFamily)."""
    a, b = row_a, row_b
    coeffs = (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
    if all(isinstance(c, HPoly) for c in coeffs):
        return Derivation.of(*coeffs)
    return DerivationFamily.of(*coeffs)


def apply(D: Derivation, P: HPoly) -> HPoly:
    return D.apply(P)


def jacobi_derivation(P: HPoly, Q: HPoly) -> Derivation:
    """∂_{P,Q} = det [∇P; ∇Q; ∇]."""
    if P.is_constant or Q.is_constant:
        raise ValueError("∂_{P,Q} exige P e Q não constantes")
    D = cross_derivation(P.gradient(), Q.gradient())
    if D.is_zero:
        raise DegenerateDerivation(
            "zero_derivation", "∂_{P,Q} é a derivação nula", {"P": str(P), "Q": str(Q)}
        )
    return D


def wronskian(D: Derivation, basis: Sequence[HPoly]) -> HPoly:
    basis = list(basis)
    if not basis:
        raise ValueError("base vazia")
    if len({b.degree for b in basis if not b.is_zero}) > 1:
        raise ValueError("base com graus distintos")
    # cada linha é ∂ aplicada à linha anterior
    rows = [basis]
    for _ in range(len(basis) - 1):
        rows.append([D.apply(P) for P in rows[-1]])
    return det(rows)


def gcd_with_curve(D: Derivation, F: HPoly) -> HPoly:
    if F.is_constant:
        raise ValueError("F precisa ser não constante")
    return gcd_many(F, *D.minors())


def is_prime_to(D: Derivation, F: HPoly) -> bool:
    return gcd_with_curve(D, F).is_constant


# formas lineares testadas, em ordem, como Q auxiliar
_PROBE_FORMS = (
    (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1),
    (1, 1, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1), (1, 2, 3), (3, -2, 1),
)


def first_prime_linear_form(P: HPoly) -> HPoly:
    for coeffs in _PROBE_FORMS:
        L = HPoly.linear(coeffs)
        if coprime(L, P):
            return L
    raise ValueError(f"nenhuma forma linear de teste é prima a {P}")


def finite_by_wronskian(P: HPoly, basis: Sequence[HPoly]) -> bool:
    """gcd(W_{∂_{P,Q}}(V), P) = 1 para uma forma linear Q prima a P (P livre de quadrados)."""
    if P.is_constant:
        return True
    Q = first_prime_linear_form(P)
    W = wronskian(jacobi_derivation(P, Q), basis)
    return not W.is_zero and coprime(W, P)


# ---------------------------------------------------------------------------
# Famílias (coeficientes em S[[t]])
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivationFamily:
    coeffs: Tuple[HSeries, HSeries, HSeries]
    degree: int

    @classmethod
    def of(cls, G0: HSeries, G1: HSeries, G2: HSeries) -> "DerivationFamily":
        coeffs = (G0, G1, G2)
        degrees = {G.degree for G in coeffs if not G.is_zero}
        if len(degrees) > 1:
            raise ValueError(f"coeficientes de graus distintos: {sorted(degrees)}")
        return cls(coeffs, degrees.pop() if degrees else 0)

    @classmethod
    def constant(cls, D: Derivation, order: int) -> "DerivationFamily":
        return cls(tuple(HSeries([G], order, D.degree) for G in D.coeffs), D.degree)

    @property
    def order(self) -> int:
        return min(G.order for G in self.coeffs)

    @property
    def is_zero(self) -> bool:
        return all(G.is_zero for G in self.coeffs)

    def at_zero(self) -> Derivation:
        return Derivation.of(*(G[0] for G in self.coeffs), degree=self.degree)

    def coefficient(self, k: int) -> Derivation:
        return Derivation.of(*(G[k] for G in self.coeffs), degree=self.degree)

    def apply(self, F: HSeries) -> HSeries:
        out = None
        for G, dF in zip(self.coeffs, (F.diff(0), F.diff(1), F.diff(2))):
            if G.is_zero or dF.is_zero:
                continue
            term = G * dF
            out = term if out is None else out + term
        if out is None:
            return HSeries([], min(self.order, F.order), self.degree + F.degree - 1)
        return out

    def scale(self, c) -> "DerivationFamily":
        return DerivationFamily.of(*(G * c for G in self.coeffs))

    def shift(self, k: int) -> "DerivationFamily":
        return DerivationFamily.of(*(G.shift(k) for G in self.coeffs))

    def with_order(self, order: int) -> "DerivationFamily":
        return DerivationFamily(tuple(G.with_order(order) for G in self.coeffs), self.degree)


def jacobi_family(F: HSeries, H: HPoly) -> DerivationFamily:
    """∂_{F(t),H}."""
    if H.is_constant:
        raise ValueError("H precisa ser não constante")
    D = cross_derivation([F.diff(i) for i in range(3)], list(H.gradient()))
    if D.is_zero:
        raise DegenerateDerivation("zero_derivation", "∂_{F(t),H} é nula até a ordem guardada", {"H": str(H)})
    return D


def jacobi_series(P: HSeries, Q: HSeries) -> DerivationFamily:
    """∂_{P(t),Q(t)} com as duas entradas em S[[t]]."""
    D = cross_derivation([P.diff(i) for i in range(3)], [Q.diff(i) for i in range(3)])
    if D.is_zero:
        raise DegenerateDerivation("zero_derivation", "∂_{P(t),Q(t)} é nula até a ordem guardada", {})
    return D


def wronskian_series(D: DerivationFamily, V: VFamily) -> HSeries:
    rows = [list(V.basis)]
    for _ in range(V.r):
        rows.append([D.apply(P) for P in rows[-1]])
    return det(rows)


def is_F_derivation(D: Union[Derivation, DerivationFamily], F: HSeries) -> bool:
    if isinstance(D, Derivation):
        D = DerivationFamily.constant(D, F.order)
    image = D.apply(F)
    if image.is_zero:
        return True
    try:
        divide_by_series(image, F)
    except InexactDivision as exc:
        log_event(logger, "nao_e_F_derivacao", ordem=exc.order)
        return False
    return True


def reduced_derivation(F: HSeries, fac: Factorization) -> DerivationFamily:
    """det [∇̄(F(0)); ∇H(t); ∇] com H(t) = (F(t) − F(0))/t e ∇̄(P) = (∏E_i)·∇P/P."""
    F0 = F[0]
    if F0.is_zero:
        raise ValueError("F(0) nulo")
    fac.validate(F0)
    E = fac.reduced()
    bar: List[HPoly] = [HPoly.zero(), HPoly.zero(), HPoly.zero()]
    for factor in fac.factors:
        cofactor = E.exquo(factor.E)
        for i, dE in enumerate(factor.E.gradient()):
            if not dE.is_zero:
                bar[i] = bar[i] + cofactor * dE * factor.e
    H = F.tail()
    if H.is_zero:
        raise DegenerateDerivation(
            "zero_derivation", "família constante: a derivação reduzida é nula", {"F0": str(F0)}
        )
    order = H.order
    row_a = [HSeries([b], order, E.degree - 1) for b in bar]
    D = cross_derivation(row_a, [H.diff(i) for i in range(3)])
    if D.is_zero:
        raise DegenerateDerivation("zero_derivation", "derivação reduzida nula", {"F0": str(F0)})
    return D


# ---------------------------------------------------------------------------
# Equivalência projetiva módulo F
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceEvidence:
    """L(t^{s1}∂1 − a(t)t^{s2}∂2) = F∂_L + N_Lε verificada nas ordens < order."""

    shift: Tuple[int, int]
    a0: Rational
    order: int

    def to_report(self) -> dict:
        return {"shift": list(self.shift), "a0": str(self.a0), "verified_order": self.order}


def _scatter(
    rows: Dict[Tuple, Dict[int, Rational]], key_prefix: Tuple, P: HPoly, col: int, mono: Exps = (0, 0, 0)
) -> None:
    """Soma os coeficientes de P·mono na coluna `col`, uma linha por monômio."""
    for exps, c in P.terms().items():
        key = key_prefix + (tuple(a + b for a, b in zip(exps, mono)),)
        cell = rows.setdefault(key, {})
        cell[col] = cell.get(col, Rational(0)) + c


def _solve_equivalence(
    d1: Sequence[Derivation], d2: Sequence[Derivation], f: Sequence[HPoly], m: int, depth: int
) -> Optional[Rational]:
    """
    Incógnitas: a_k, e por L ∈ {X0,X1,X2} e ordem k os coeficientes de N_{L,k}
    (grau m) e ∂_{L,k} (grau m + 1 − deg F, omitida se negativo). Devolve a_0 ≠ 0 ou None.
    """
    fdeg = next(P.degree for P in f if not P.is_zero)
    dd = m + 1 - fdeg
    mons_n = monomials(m)
    mons_d = monomials(dd) if dd >= 0 else []
    block = 3 * len(mons_d) + len(mons_n)
    ncols = depth + 3 * depth * block

    def col_d(L: int, k: int, j: int, nu: int) -> int:
        return depth + (L * depth + k) * block + j * len(mons_d) + nu

    def col_n(L: int, k: int, nu: int) -> int:
        return depth + (L * depth + k) * block + 3 * len(mons_d) + nu

    lhs: Dict[Tuple, Dict[int, Rational]] = {}
    rhs: Dict[Tuple, Rational] = {}
    for L in range(3):
        XL = HPoly.var(L)
        for k in range(depth):
            for j in range(3):
                prefix = (L, k, j)
                for exps, c in (XL * d1[k].coeffs[j]).terms().items():
                    rhs[prefix + (exps,)] = rhs.get(prefix + (exps,), Rational(0)) + c
                for i in range(k + 1):
                    G = d2[k - i].coeffs[j]
                    if not G.is_zero:
                        _scatter(lhs, prefix, XL * G, i)
                    Fi = f[i]
                    if dd >= 0 and not Fi.is_zero:
                        for nu, mono in enumerate(mons_d):
                            _scatter(lhs, prefix, Fi, col_d(L, k - i, j, nu), mono)
                for nu, mono in enumerate(mons_n):
                    _scatter(lhs, prefix, HPoly.var(j), col_n(L, k, nu), mono)
    keys = sorted(set(lhs) | set(rhs))
    rows = []
    for key in keys:
        row = [Rational(0)] * ncols
        for col, c in lhs.get(key, {}).items():
            row[col] = c
        rows.append(row)
    particular, kernel = solve(rows, [rhs.get(key, Rational(0)) for key in keys], ncols)
    if particular is None:
        return None
    if any(v[0] != 0 for v in kernel):
        return Rational(1)
    return particular[0] if particular[0] != 0 else None


def proj_equiv_check(D1: Derivation, D2: Derivation, F: HPoly) -> Optional[Rational]:
    """Procura a ≠ 0 com L(∂1 − a∂2) = F∂_L + N_Lε para L = X0, X1, X2 (basta por linearidade em L)."""
    if F.is_constant:
        raise ValueError("F precisa ser não constante")
    if D1.degree != D2.degree:
        return None
    return _solve_equivalence([D1], [D2], [F], D1.degree, 1)


def _shifted_coefficient(D: DerivationFamily, k: int, s: int) -> Derivation:
    """Coeficiente de t^k em t^s·D."""
    if k < s:
        return Derivation.of(HPoly.zero(), HPoly.zero(), HPoly.zero(), degree=D.degree)
    return D.coefficient(k - s)


def proj_equiv_check_series(
    D1: DerivationFamily,
    D2: DerivationFamily,
    F: HSeries,
    depth: int = 2,
    max_shift: int = 4,
) -> Optional[EquivalenceEvidence]:
    if D1.degree != D2.degree:
        return None
    for total in range(2 * max_shift + 1):
        for s1 in range(max(0, total - max_shift), min(total, max_shift) + 1):
            s2 = total - s1
            order = max(s1, s2) + depth
            if order > min(D1.order + s1, D2.order + s2, F.order):
                continue
            d1 = [_shifted_coefficient(D1, k, s1) for k in range(order)]
            d2 = [_shifted_coefficient(D2, k, s2) for k in range(order)]
            a0 = _solve_equivalence(d1, d2, [F[k] for k in range(order)], D1.degree, order)
            if a0 is not None:
                return EquivalenceEvidence((s1, s2), a0, order)
    return None


def poly_equiv_check_series(
    G: HSeries, K: HSeries, F: HSeries, depth: int = 2, max_shift: int = 4
) -> Optional[EquivalenceEvidence]:
    """Versão para polinômios: t^{s1}G − a(t)t^{s2}K = A(t)F(t) com a(0) ≠ 0."""
    if G.degree != K.degree:
        return None
    ad = G.degree - F.degree
    mons_a = monomials(ad) if ad >= 0 else []
    for total in range(2 * max_shift + 1):
        for s1 in range(max(0, total - max_shift), min(total, max_shift) + 1):
            s2 = total - s1
            order = max(s1, s2) + depth
            if order > min(G.order + s1, K.order + s2, F.order):
                continue
            g = G.times_t(s1)
            k_ = K.times_t(s2)
            ncols = order + order * len(mons_a)
            index = monomial_index(G.degree)
            rows = []
            rhs = []
            lhs: Dict[Tuple, Dict[int, Rational]] = {}
            vals: Dict[Tuple, Rational] = {}
            for k in range(order):
                for exps, c in g[k].terms().items():
                    vals[(k, exps)] = vals.get((k, exps), Rational(0)) + c
                for i in range(k + 1):
                    if not k_[k - i].is_zero:
                        _scatter(lhs, (k,), k_[k - i], i)
                    if not F[i].is_zero:
                        for nu, mono in enumerate(mons_a):
                            _scatter(lhs, (k,), F[i], order + (k - i) * len(mons_a) + nu, mono)
            for key in sorted(set(lhs) | set(vals), key=lambda kk: (kk[0], index.get(kk[1], -1))):
                row = [Rational(0)] * ncols
                for col, c in lhs.get(key, {}).items():
                    row[col] = c
                rows.append(row)
                rhs.append(vals.get(key, Rational(0)))
            particular, kernel = solve(rows, rhs, ncols)
            if particular is None:
                continue
            if any(v[0] != 0 for v in kernel):
                return EquivalenceEvidence((s1, s2), Rational(1), order)
            if particular[0] != 0:
                return EquivalenceEvidence((s1, s2), particular[0], order)
    return None
