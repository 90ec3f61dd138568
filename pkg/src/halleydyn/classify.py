"""Fixed-point classification for Halley maps.

Every fixed point of a Halley map traces back to the input polynomial:
a root of multiplicity k carries multiplier (k-1)/(k+1), a non-root
critical point of multiplicity l carries multiplier 1 + 2/l, and
infinity carries (d+1)/(d-1) for d = deg p.  classify_fixed_points
measures each multiplier from the map and cross-checks it against the
value predicted from the point's origin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PropositionMismatch
from .polycore import Polynomial, find_roots
from .ratmap import INF, RationalMap, fixed_points, is_infinity, multiplier_at

SUPERATTRACTING_TOL = 1e-8
INDIFFERENCE_BAND = 1e-6
PREDICTION_TOL = 1e-6
ORIGIN_MATCH_RADIUS = 1e-6

SUPERATTRACTING = "superattracting"
ATTRACTING = "attracting"
REPELLING = "repelling"
RATIONALLY_INDIFFERENT = "rationally_indifferent"
IRRATIONALLY_INDIFFERENT = "irrationally_indifferent"


@dataclass(frozen=True)
class Origin:
    """Provenance of a fixed point: kind is 'root', 'critical', 'infinity'
    or 'other'; multiplicity applies to the first two kinds."""

    kind: str
    multiplicity: int | None = None


@dataclass(frozen=True)
class FixedPointRecord:
    location: object  # complex or INF
    multiplier: complex
    klass: str
    origin: Origin
    predicted: complex | None


def classify_multiplier(lam: complex,
                        superattracting_tol: float = SUPERATTRACTING_TOL,
                        indifference_band: float = INDIFFERENCE_BAND) -> str:
    mag = abs(lam)
    if mag < superattracting_tol:
        return SUPERATTRACTING
    if abs(mag - 1.0) <= indifference_band:
        # rational rotation number shows up as lam**q near 1 for small q
        power = lam / mag  # project onto the unit circle first
        acc = power
        for _ in range(64):
            if abs(acc - 1.0) <= 1e-6:
                return RATIONALLY_INDIFFERENT
            acc *= power
        return IRRATIONALLY_INDIFFERENT
    if mag < 1.0:
        return ATTRACTING
    return REPELLING


def classify_fixed_points(p: Polynomial, R: RationalMap,
                          tol: float = PREDICTION_TOL,
                          seed: int = 0) -> list[FixedPointRecord]:
    """Records for every sphere fixed point of R = halley_of(p).

    Raises PropositionMismatch when a measured multiplier strays more
    than tol from the value its origin predicts, or when a fixed point
    has no identifiable origin.
    """
    roots = find_roots(p, seed=seed)
    crits = find_roots(p.deriv(), seed=seed) if p.degree >= 2 else []
    d = p.degree
    records = []
    for fp in fixed_points(R):
        lam = multiplier_at(R, fp)
        if is_infinity(fp):
            origin = Origin("infinity")
            predicted = complex((d + 1.0) / (d - 1.0)) if d >= 2 else None
        else:
            origin = Origin("other")
            predicted = None
            for rc in roots:
                if abs(fp - rc.location) <= ORIGIN_MATCH_RADIUS:
                    k = rc.multiplicity
                    origin = Origin("root", k)
                    predicted = complex((k - 1.0) / (k + 1.0))
                    break
            else:
                for cc in crits:
                    if abs(fp - cc.location) <= ORIGIN_MATCH_RADIUS:
                        origin = Origin("critical", cc.multiplicity)
                        predicted = complex(1.0 + 2.0 / cc.multiplicity)
                        break
        record = FixedPointRecord(
            location=fp,
            multiplier=lam,
            klass=classify_multiplier(lam),
            origin=origin,
            predicted=predicted,
        )
        if origin.kind == "other":
            raise PropositionMismatch("fixed point with no identifiable origin", record)
        if predicted is not None and abs(lam - predicted) > tol:
            raise PropositionMismatch(
                f"multiplier {lam} disagrees with predicted {predicted}", record)
        records.append(record)
    return records


def extraneous_fixed_points(records: list[FixedPointRecord]) -> list[FixedPointRecord]:
    """Finite fixed points that are not roots of p (origin 'critical')."""
    return [r for r in records if r.origin.kind == "critical"]
