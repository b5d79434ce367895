"""
Ordinary projectors and ordinary eigensystems.

Everything stays inside Z/p^M: the ordinary part is the Fitting summand of
U_p, eigenvalues of U_p come from a division-free characteristic polynomial
and Hensel lifting of its unit roots, and Hecke eigenspaces are cut out as
Fitting summands of T - a for residues a.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from sympy import Poly, symbols

from ..linalg import charpoly, fitting_decomposition, identity, mat_mul, restrict, summand
from ..padic import ArithmeticPoint, PadicInt, TameCharacter, unit_roots
from .operators import OperatorMatrix
from .weightk import WeightKSpace

logger = logging.getLogger(__name__)

EISENSTEIN = "eisenstein"
NOT_P_DISTINGUISHED = "not_p_distinguished"
NON_RATIONAL = "non_rational"

_X = symbols("X")


@dataclass(frozen=True, eq=False)
class EigensystemPacket:
    """Hecke eigenvalues of an ordinary eigenform (or of an inseparable block)."""

    kappa: ArithmeticPoint
    r: int
    prec: int
    eigenvalues: Dict[int, PadicInt]
    up: PadicInt
    multiplicity: int = 1
    flags: FrozenSet[str] = frozenset()
    vector: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.up.is_unit():
            raise ValueError(f"U_p-eigenvalue {self.up} is not a unit")

    @property
    def p(self) -> int:
        return self.kappa.p

    @property
    def k(self) -> int:
        return self.kappa.k

    @property
    def probes(self) -> List[int]:
        return sorted(self.eigenvalues)

    @property
    def is_eisenstein(self) -> bool:
        return EISENSTEIN in self.flags

    def a(self, ell: int) -> PadicInt:
        return self.up if ell == self.p else self.eigenvalues[ell]

    def residues(self) -> Tuple[int, ...]:
        """Residual eigensystem (U_p first, then the probes)."""
        return (self.up.value % self.p,) + tuple(self.eigenvalues[ell].value % self.p for ell in self.probes)

    def lines(self, label: str = "packet") -> List[str]:
        p = self.p
        out = [
            f"{label}.weight = {self.k}",
            f"{label}.char_exp = {self.kappa.eps.j}",
            f"{label}.multiplicity = {self.multiplicity}",
            f"{label}.flags = {','.join(sorted(self.flags)) or '-'}",
            f"{label}.U_{p} = {self.up.signed()}  [mod {p}^{self.up.prec}]",
        ]
        for ell in self.probes:
            a = self.eigenvalues[ell]
            out.append(f"{label}.a_{ell} = {a.signed()}  [mod {p}^{a.prec}]")
        return out


def cuspidal(packets: Iterable[EigensystemPacket]) -> List[EigensystemPacket]:
    """Packets other than the Eisenstein one."""
    return [pk for pk in packets if not pk.is_eisenstein]


def ordinary_projector(T: OperatorMatrix) -> Tuple[OperatorMatrix, np.ndarray, np.ndarray]:
    """
    The idempotent e onto the largest summand on which T is invertible.

    Returns:
        (e, ordinary basis, nilpotent basis) with e^2 = e, eT = Te.
    """
    E, ord_basis, nil_basis = fitting_decomposition(T.matrix, T.p, T.modulus)
    logger.info(f"Ordinary projector: rank {ord_basis.shape[1]} of {T.dim}")
    return OperatorMatrix(T.p, T.prec, E, T.block), ord_basis, nil_basis


def generalized_eigenspace(T: np.ndarray, residue: int, p: int, q: int) -> Tuple[np.ndarray, np.ndarray]:
    """Fitting summand on which T - residue is nilpotent, as (basis, coords)."""
    d = T.shape[0]
    G = (T.astype(object) - residue * identity(d, q).astype(object)) % q
    E, _, _ = fitting_decomposition(G, p, q)
    return summand((identity(d, q).astype(object) - E) % q, p, q)


def residual_roots(coeffs: Sequence[int], p: int, units_only: bool = False) -> List[int]:
    """Roots mod p of a polynomial given from the constant term up."""
    f = Poly([c % p for c in reversed(coeffs)], _X, modulus=p)
    start = 1 if units_only else 0
    return [a for a in range(start, p) if f.eval(a) % p == 0]


def strip_root(coeffs: Sequence[int], a: int, p: int) -> Tuple[List[int], int]:
    """
    Remove the full (X - a)^e factor of f mod p.

    Returns:
        (coefficients of f / (X - a)^e mod p from the constant term up, e)
    """
    f = Poly([c % p for c in reversed(coeffs)], _X, modulus=p)
    linear = Poly([1, -a], _X, modulus=p)
    e = 0
    while not f.is_zero and f.eval(a) % p == 0:
        f = f.quo(linear)
        e += 1
    return [int(c) % p for c in reversed(f.all_coeffs())], e


def eval_matrix_poly(coeffs: Sequence[int], T: np.ndarray, q: int) -> np.ndarray:
    """f(T) mod q by Horner's rule."""
    d = T.shape[0]
    I = identity(d, q).astype(object)
    acc = np.zeros((d, d), dtype=object)
    for c in reversed(coeffs):
        acc = (mat_mul(acc, T.astype(object), q) + c * I) % q
    return acc


@dataclass
class OrdinaryPart:
    """The chi-isotypic ordinary summand of a weight-k space with its Hecke operators."""

    space: WeightKSpace
    eps: TameCharacter
    basis: np.ndarray
    coords: np.ndarray
    up: np.ndarray
    ops: Dict[int, np.ndarray]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]


def _check_probes(space: WeightKSpace, probes: Iterable[int]) -> List[int]:
    probes = sorted(set(probes))
    bad = space.classes.D * space.classes.M * space.p
    for ell in probes:
        if ell < 2 or gcd(ell, bad) != 1:
            raise ValueError(f"probe {ell} must be coprime to DMp={bad}")
    return probes


def ordinary_part(space: WeightKSpace, probes: Iterable[int], eps: Optional[TameCharacter] = None) -> OrdinaryPart:
    """Restrict U_p and the probe operators to e . (chi-part)."""
    probes = _check_probes(space, probes)
    p, q = space.p, space.q
    eps = eps or TameCharacter(p, 0)
    B0, C0 = summand(space.character_projector(eps).matrix, p, q)
    U0 = restrict(space.up().matrix, B0, C0, q)
    E, _, _ = fitting_decomposition(U0, p, q)
    B1, C1 = summand(E, p, q)
    basis, coords = mat_mul(B0, B1, q), mat_mul(C1, C0, q)
    up = restrict(space.up().matrix, basis, coords, q)
    ops = {ell: restrict(space.hecke(ell).matrix, basis, coords, q) for ell in probes}
    logger.info(f"{space!r}: character part rank {B0.shape[1]}, ordinary rank {basis.shape[1]}")
    return OrdinaryPart(space, eps, basis, coords, up, ops)


def _eigenvalue(T: np.ndarray, v: np.ndarray, pivot: int, p: int, q: int, prec: int) -> PadicInt:
    w = mat_mul(T, v.reshape(-1, 1), q)[:, 0]
    return PadicInt(p, prec, int(w[pivot]) * pow(int(v[pivot]), -1, q))


def ordinary_eigensystems(space: WeightKSpace, probes: Iterable[int], eps: Optional[TameCharacter] = None) -> List[EigensystemPacket]:
    """
    Ordinary eigensystems of S_k(U_r, eps) mod p^M.

    Each unit root of the characteristic polynomial of U_p cuts out a
    generalized eigenspace; multiple roots are split further by the probe
    operators. Rank-1 pieces give exact eigenvalues, larger pieces are
    reported with their residual eigenvalues and flagged.
    """
    part = ordinary_part(space, probes, eps)
    p, q, prec = space.p, space.q, space.prec
    kappa = ArithmeticPoint(space.k, part.eps)
    if part.rank == 0:
        logger.warning(f"{space!r} has no ordinary part")
        return []
    poly = charpoly(part.up, q)
    simple, multiple = unit_roots(poly, p, prec)
    logger.info(f"U_{p} characteristic polynomial: {len(simple)} simple and {len(multiple)} multiple unit roots")
    pieces: List[Tuple[np.ndarray, np.ndarray, FrozenSet[str]]] = []
    for root in [a.value % p for a in simple]:
        b, c = generalized_eigenspace(part.up, root, p, q)
        pieces.append((b, c, frozenset()))
    for root in multiple:
        b, c = generalized_eigenspace(part.up, root, p, q)
        flagged = [(b, c, frozenset({NOT_P_DISTINGUISHED}))]
        for ell in sorted(part.ops):
            flagged = _split(flagged, part.ops[ell], p, q)
        pieces.extend(flagged)

    packets = []
    for b, c, flags in pieces:
        ops = {ell: restrict(T, b, c, q) for ell, T in part.ops.items()}
        U = restrict(part.up, b, c, q)
        if b.shape[1] == 1:
            v = mat_mul(part.basis, b, q)[:, 0]
            pivot = next(i for i, x in enumerate(v) if int(x) % p)
            v = (v.astype(object) * pow(int(v[pivot]), -1, q)) % q
            eigenvalues = {ell: _eigenvalue(space.hecke(ell).matrix, v, pivot, p, q, prec) for ell in part.ops}
            up = _eigenvalue(space.up().matrix, v, pivot, p, q, prec)
            if all(a == ell + 1 for ell, a in eigenvalues.items()):
                flags = flags | {EISENSTEIN}
            packets.append(EigensystemPacket(kappa, space.r, prec, eigenvalues, up, 1, flags, v))
        else:
            eigenvalues = {}
            for ell, T in ops.items():
                # a non-rational block has no residue; 0 is recorded
                roots = residual_roots(charpoly(T, q), p)
                eigenvalues[ell] = PadicInt(p, 1, roots[0] if roots else 0)
            up = PadicInt(p, 1, residual_roots(charpoly(U, q), p, units_only=True)[0])
            logger.warning(f"inseparable block of rank {b.shape[1]} at U_{p} = {up.value} mod {p}")
            packets.append(EigensystemPacket(kappa, space.r, 1, eigenvalues, up, b.shape[1], flags | {NOT_P_DISTINGUISHED}))
    packets.sort(key=lambda pk: pk.residues() + (pk.up.value,) + tuple(pk.eigenvalues[ell].value for ell in pk.probes))
    logger.info(f"{space!r}: {len(packets)} ordinary packets, {len(cuspidal(packets))} cuspidal")
    return packets


def _split(pieces, T: np.ndarray, p: int, q: int):
    """Split every piece of rank > 1 by the residual eigenvalues of T."""
    out = []
    for b, c, flags in pieces:
        if b.shape[1] == 1 or NON_RATIONAL in flags:
            out.append((b, c, flags))
            continue
        Tb = restrict(T, b, c, q)
        rest = identity(Tb.shape[0], q).astype(object)
        for beta in residual_roots(charpoly(Tb, q), p):
            b2, c2 = generalized_eigenspace(Tb, beta, p, q)
            out.append((mat_mul(b, b2, q), mat_mul(c2, c, q), flags))
            rest = (rest - mat_mul(b2, c2, q)) % q
        if np.any(rest):
            # T has no eigenvalue in F_p here
            b3, c3 = summand(rest, p, q)
            out.append((mat_mul(b, b3, q), mat_mul(c3, c, q), flags | {NON_RATIONAL}))
    return out


def find_packet(packets: Iterable[EigensystemPacket], residues: Sequence[int]) -> Optional[EigensystemPacket]:
    """The packet with the given residual eigensystem (U_p first, then probes)."""
    for pk in packets:
        if pk.residues() == tuple(residues):
            return pk
    return None


def write_packets(packets: Sequence[EigensystemPacket], stream: TextIO):
    """One block per packet: header line, `up`, `a ell value` lines and an optional `vector` line."""
    for index, pk in enumerate(packets):
        flags = ",".join(sorted(pk.flags)) or "-"
        stream.write(f"packet {index} {pk.k} {pk.kappa.eps.j} {pk.r} {pk.p} {pk.prec} {pk.multiplicity} {flags}\n")
        stream.write(f"up {pk.up.value} {pk.up.prec}\n")
        for ell in pk.probes:
            a = pk.eigenvalues[ell]
            stream.write(f"a {ell} {a.value} {a.prec}\n")
        if pk.vector is not None:
            stream.write("vector " + " ".join(str(int(x)) for x in pk.vector) + "\n")


def read_packets(lines: Iterable[str]) -> List[EigensystemPacket]:
    """
    Raises:
        ValueError: on malformed input.
    """
    packets = []
    current = None

    def flush():
        if current is not None:
            packets.append(EigensystemPacket(**current))

    try:
        for line in lines:
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            if fields[0] == "packet":
                flush()
                _, _, k, j, r, p, prec, mult, flags = fields
                p = int(p)
                current = {
                    "kappa": ArithmeticPoint.of(int(k), p, int(j)),
                    "r": int(r),
                    "prec": int(prec),
                    "eigenvalues": {},
                    "up": None,
                    "multiplicity": int(mult),
                    "flags": frozenset() if flags == "-" else frozenset(flags.split(",")),
                }
            elif fields[0] == "up":
                current["up"] = PadicInt(current["kappa"].p, int(fields[2]), int(fields[1]))
            elif fields[0] == "a":
                current["eigenvalues"][int(fields[1])] = PadicInt(current["kappa"].p, int(fields[3]), int(fields[2]))
            elif fields[0] == "vector":
                current["vector"] = np.array([int(x) for x in fields[1:]], dtype=object)
            else:
                raise ValueError(f"unexpected line {line.strip()!r}")
        flush()
    except (TypeError, ValueError) as e:
        logger.error(f"Error parsing packet file: {e}")
        raise ValueError(f"malformed packet file: {e}")
    return packets
