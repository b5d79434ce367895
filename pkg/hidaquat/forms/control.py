"""
Specialization of measure forms and the numerical control checks.

specialize_form realizes rho_kappa on the finite-level measure forms,
eigen_lift builds an ordinary measure form over a weight-2 eigenform, and
verify_control / interpolation_check produce the reports that certify the
control isomorphism and the eigenvalue congruences along the family.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..errors import NotDistinguishedError, VerificationError
from ..linalg import charpoly, fitting_decomposition, mat_mul, restrict, summand
from ..measures import specialize, matrix_pushforward
from ..padic import ArithmeticPoint, PadicInt, TameCharacter, valuation
from ..padic.arith import poly_eval
from ..padic.mat2 import inverse
from .eigen import (
    NOT_P_DISTINGUISHED,
    EigensystemPacket,
    eval_matrix_poly,
    find_packet,
    ordinary_eigensystems,
    ordinary_part,
    strip_root,
)
from .measureforms import MeasureForm, MeasureFormSpace, pkappa_mult_form
from .weightk import WeightKForm, WeightKSpace

logger = logging.getLogger(__name__)


def _check_compatible(mspace: MeasureFormSpace, wspace: WeightKSpace):
    if mspace.classes is not wspace.classes:
        raise ValueError("measure and weight-k spaces must share the class set")
    a, b = mspace.splitting, wspace.splitting
    q = a.p ** min(a.prec, b.prec)
    if a.p != b.p or any((x - y) % q for x, y in zip(a.I + a.J, b.I + b.J)):
        raise ValueError("measure and weight-k spaces use different splittings")


def specialize_form(s: MeasureForm, kappa: ArithmeticPoint, wspace: WeightKSpace) -> WeightKForm:
    """
    rho_kappa(s): the weight-k form with value specialize(c^-1_* a_i, kappa) at each point.

    The result has precision min(M, m).

    Raises:
        ValueError: "tame points only" for a point without a tame character,
            or if wspace does not have weight k and level r >= 1.
    """
    if not isinstance(kappa.eps, TameCharacter):
        raise ValueError("tame points only")
    if wspace.k != kappa.k or wspace.r < 1:
        raise ValueError(f"specialization at weight {kappa.k} needs a weight-{kappa.k} space of level >= 1, got {wspace!r}")
    _check_compatible(s.space, wspace)
    N = s.space.primitive.N
    values = []
    for pt in wspace.points:
        moved = matrix_pushforward(inverse(pt.lift, N), s.components[pt.cls])
        values.append(specialize(moved, kappa))
    return wspace.form_from_values(values)


def _orbit_seed(F: WeightKForm, mspace: MeasureFormSpace) -> np.ndarray:
    """Measure-form coordinates with F(t) on the level-m orbit of each point representative."""
    coords = np.zeros(mspace.dim, dtype=object)
    for pt in F.space.points:
        x, y = pt.rep
        label = mspace.points.labels(pt.cls)[mspace.primitive.index(x, y)]
        coords[label] = int(F.coords[pt.index])
    return coords


def _lagrange(ops: Sequence[np.ndarray], rivals: Sequence[np.ndarray], targets: Sequence[PadicInt], p: int, q: int) -> np.ndarray:
    """Product over operators of h(T) h(a)^-1, h the rival part of the characteristic polynomial mod p."""
    d = ops[0].shape[0]
    L = np.eye(d, dtype=object)
    for T, W, a in zip(ops, rivals, targets):
        h, _ = strip_root(charpoly(W, p), a.value % p, p)
        scale = pow(poly_eval(h, a.value, q), -1, q)
        L = mat_mul(L, eval_matrix_poly(h, T, q), q) * scale % q
    return L


def eigen_lift(packet: EigensystemPacket, mspace: MeasureFormSpace, wspace: WeightKSpace,
               probes: Optional[Sequence[int]] = None, verify: bool = True) -> MeasureForm:
    """
    An ordinary measure form s with rho_2(s) = (p - 1) F for the weight-2 eigenform F of the packet.

    The seed carrying F on canonical balls is cut down by the tame projector,
    the ordinary projector of T_p and the Fitting idempotent of the Lagrange
    operator built from the rival eigenvalues of the weight-2 ordinary part.

    Raises:
        ValueError: for a packet without eigenvector, of weight other than 2,
            or with a zero eigenvector.
        NotDistinguishedError: "enlarge probe set" when the probes do not
            isolate the packet at weight 2.
        VerificationError: if rho_2(s) is not (p - 1) F (skipped when verify
            is False, for callers that report the comparison themselves).
    """
    if packet.k != 2 or packet.vector is None:
        raise ValueError("eigen_lift needs a weight-2 packet with its eigenvector")
    if packet.multiplicity != 1 or NOT_P_DISTINGUISHED in packet.flags:
        raise NotDistinguishedError("enlarge probe set")
    _check_compatible(mspace, wspace)
    F = WeightKForm(wspace, packet.vector, packet.prec)
    if F.is_zero():
        raise ValueError("zero packet input")
    p, q = mspace.p, mspace.q
    probes = sorted(set(probes if probes is not None else packet.probes))
    try:
        # weight-2 side: the Lagrange operator must isolate a rank-1 summand
        part = ordinary_part(wspace, probes, packet.kappa.eps)
        w_ops = [part.up] + [part.ops[ell] for ell in probes]
        targets = [packet.up] + [packet.eigenvalues[ell] for ell in probes]
        Lw = _lagrange(w_ops, w_ops, targets, p, wspace.q)
        _, isolated, _ = fitting_decomposition(Lw, p, wspace.q)
        if isolated.shape[1] != 1:
            logger.error(f"Lagrange idempotent has rank {isolated.shape[1]} at weight 2")
            raise NotDistinguishedError("enlarge probe set")

        # measure side
        Bc, Cc = summand(mspace.tame_projector(packet.kappa.component).matrix, p, q)
        Tp = restrict(mspace.hecke(p).matrix, Bc, Cc, q)
        E, _, _ = fitting_decomposition(Tp, p, q)
        B1, C1 = summand(E, p, q)
        Bo, Co = mat_mul(Bc, B1, q), mat_mul(C1, Cc, q)
        logger.info(f"Measure forms: tame component rank {Bc.shape[1]}, ordinary rank {Bo.shape[1]}")
        m_ops = [restrict(mspace.hecke(p).matrix, Bo, Co, q)]
        m_ops += [restrict(mspace.hecke(ell).matrix, Bo, Co, q) for ell in probes]
        L = _lagrange(m_ops, w_ops, targets, p, q)
        EL, component, _ = fitting_decomposition(L, p, q)
        logger.info(f"Target component of the ordinary measure forms has rank {component.shape[1]}")
        seed = mat_mul(Co, _orbit_seed(F, mspace).reshape(-1, 1), q)
        s = mspace.from_coords(mat_mul(Bo, mat_mul(EL, seed, q), q)[:, 0])
    except Exception as e:
        logger.error(f"Error lifting packet at U_{p} = {packet.up}: {e}")
        raise
    if verify and not lift_specializes(s, packet, wspace):
        raise VerificationError("specialization of the lift is not (p - 1) times the eigenform")
    return s


def lift_specializes(s: MeasureForm, packet: EigensystemPacket, wspace: WeightKSpace) -> bool:
    """rho_2(s) == (p - 1) F for the eigenform F of a weight-2 packet, mod p^min(M, m)."""
    F = WeightKForm(wspace, packet.vector, packet.prec)
    return specialize_form(s, packet.kappa, wspace) == F.scale(s.space.p - 1)


def _read_eigenvalue(t: WeightKForm, T, pivot: int, v: int) -> Optional[PadicInt]:
    """a with T t = a t, read at a coordinate of minimal valuation v; None if t is not an eigenvector."""
    p, prec = t.space.p, t.prec
    Tt = t.apply(T)
    num, den = int(Tt.coords[pivot]), int(t.coords[pivot])
    if num % p ** v:
        return None
    qq = p ** (prec - v)
    a = PadicInt(p, prec - v, (num // p ** v) * pow(den // p ** v, -1, qq))
    if Tt != t.scale(a.value):
        return None
    return a


@dataclass
class ControlReport:
    """Outcome of the control checks at one arithmetic point."""

    kappa: ArithmeticPoint
    precision: int
    degenerate: bool = False
    eigenvalues: Dict[int, PadicInt] = field(default_factory=dict)
    up: Optional[PadicInt] = None
    is_eigenform: bool = False
    multiplicity: int = 0
    kernel_ok: bool = False
    nonzero_mod_p: bool = False
    packet: Optional[EigensystemPacket] = None

    @property
    def passed(self) -> bool:
        return (
            not self.degenerate
            and self.is_eigenform
            and self.multiplicity == 1
            and self.kernel_ok
            and self.nonzero_mod_p
            and self.up is not None
            and self.up.is_unit()
        )

    def lines(self, label: Optional[str] = None) -> List[str]:
        label = label or f"control.k{self.kappa.k}"
        p, e = self.kappa.p, self.precision
        out = [
            f"{label}.weight = {self.kappa.k}",
            f"{label}.char_exp = {self.kappa.eps.j}",
            f"{label}.degenerate = {'yes' if self.degenerate else 'no'}",
        ]
        if self.up is not None:
            out.append(f"{label}.U_{p} = {self.up.signed()}  [mod {p}^{self.up.prec}]")
        for ell in sorted(self.eigenvalues):
            a = self.eigenvalues[ell]
            out.append(f"{label}.a_{ell} = {a.signed()}  [mod {p}^{a.prec}]")
        out += [
            f"{label}.eigenform = {'pass' if self.is_eigenform else 'fail'}  [mod {p}^{e}]",
            f"{label}.multiplicity = {self.multiplicity}",
            f"{label}.kernel = {'pass' if self.kernel_ok else 'fail'}  [mod {p}^{e}]",
            f"{label}.nonzero = {'pass' if self.nonzero_mod_p else 'fail'}  [mod {p}]",
            f"{label}.result = {'pass' if self.passed else 'fail'}",
        ]
        return out


def verify_control(s: MeasureForm, kappa: ArithmeticPoint, wspace: WeightKSpace, probes: Sequence[int],
                   rng: Optional[np.random.Generator] = None) -> ControlReport:
    """
    Check rho_kappa(s): eigen data, multiplicity one, P_kappa-kernel and nonvanishing mod p.

    A zero s gives a report flagged degenerate.
    """
    precision = min(s.space.prec, s.space.m)
    report = ControlReport(kappa, precision)
    if s.is_zero():
        logger.warning(f"verify_control at weight {kappa.k}: zero measure form")
        report.degenerate = True
        return report
    rng = rng if rng is not None else np.random.default_rng(0)
    probes = sorted(set(probes))
    p = kappa.p

    t = specialize_form(s, kappa, wspace)
    v = t.valuation()
    report.nonzero_mod_p = v == 0
    if t.is_zero():
        report.degenerate = True
        return report
    pivot = next(i for i, c in enumerate(t.coords) if int(c) and valuation(int(c), p) == v)

    # (a) eigen data
    up = _read_eigenvalue(t, wspace.up(), pivot, v)
    eigenvalues = {ell: _read_eigenvalue(t, wspace.hecke(ell), pivot, v) for ell in probes}
    report.is_eigenform = up is not None and all(a is not None for a in eigenvalues.values())
    if report.is_eigenform:
        report.up = up
        report.eigenvalues = eigenvalues

    # (b) multiplicity one among the ordinary packets at weight k
    if report.is_eigenform:
        packets = ordinary_eigensystems(wspace, probes, kappa.eps)
        residues = (up.value % p,) + tuple(eigenvalues[ell].value % p for ell in probes)
        match = find_packet(packets, residues)
        if match is not None:
            report.packet = match
            report.multiplicity = match.multiplicity

    # (c) the P_kappa part of D specializes to zero
    noise = pkappa_mult_form(s.space.random_form(rng), kappa)
    report.kernel_ok = specialize_form(s + noise, kappa, wspace) == t

    logger.info(f"verify_control at weight {kappa.k}: {'pass' if report.passed else 'fail'}")
    return report


@dataclass
class InterpolationReport:
    """Valuations of eigenvalue differences between two weights of a family."""

    k1: int
    k2: int
    p: int
    required: int
    valuations: Dict[str, int]
    precision: int

    @property
    def passed(self) -> bool:
        return all(v >= min(self.required, self.precision) for v in self.valuations.values())

    def lines(self, label: str = "interp") -> List[str]:
        out = [f"{label}.weights = {self.k1},{self.k2}", f"{label}.required = {self.required}"]
        for key in sorted(self.valuations, key=lambda s: (len(s), s)):
            out.append(f"{label}.v({key}) = {self.valuations[key]}  [mod {self.p}^{self.precision}]")
        out.append(f"{label}.result = {'pass' if self.passed else 'fail'}")
        return out


def interpolation_check(first: EigensystemPacket, second: EigensystemPacket) -> InterpolationReport:
    """
    Compare a_l and U_p of two packets on the same family.

    Weights k1, k2 with k1 = k2 mod (p - 1) p^(t - 1) must have eigenvalues
    congruent mod p^t.

    Raises:
        ValueError: if the weights or tame components are incompatible.
    """
    p = first.p
    k1, k2 = first.k, second.k
    if second.p != p or (k1 - k2) % (p - 1):
        raise ValueError(f"incompatible weights {k1} and {k2} for p={p}")
    if first.kappa.component != second.kappa.component:
        raise ValueError(f"weights {k1} and {k2} lie on different tame components")
    precision = min(first.up.prec, second.up.prec)
    required = precision if k1 == k2 else 1 + valuation(k1 - k2, p)
    keys = {f"U_{p}": (first.up, second.up)}
    for ell in sorted(set(first.probes) & set(second.probes)):
        keys[f"a_{ell}"] = (first.eigenvalues[ell], second.eigenvalues[ell])
    valuations = {key: (a - b).valuation() for key, (a, b) in keys.items()}
    report = InterpolationReport(k1, k2, p, required, valuations, precision)
    logger.info(f"Interpolation {k1} vs {k2}: congruences mod {p}^{required} {'hold' if report.passed else 'fail'}")
    return report
