"""Gilbert-Varshamov and sphere-packing bounds for frequency permutation arrays.

Standard GV / Hamming-style packing bounds with Chebyshev balls::

    ceil(|S_n^lam| / V(d_code - 1))  <=  A(lam, n, d_code)  <=  floor(|S_n^lam| / V((d_code - 1) // 2))
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .core import (
    DEFAULT_LIMITS,
    InternalInconsistency,
    InvalidParameter,
    Limits,
    make_params,
    multiset_size,
)
from .engine import count_auto

BOUND_KIND = "standard GV / Hamming-style packing with l-infinity balls"


@dataclass(frozen=True)
class BoundReport:
    lam: int
    m: int
    n: int
    d_code: int
    space_size: int
    gv_lower: int
    sp_upper: int
    gv_radius: int
    gv_ball_size: int
    sp_radius: int
    sp_ball_size: int
    kind: str = BOUND_KIND

    def as_dict(self) -> dict:
        out = asdict(self)
        for key in ("space_size", "gv_lower", "sp_upper", "gv_ball_size", "sp_ball_size"):
            out[key] = str(out[key])
        out["lambda"] = out.pop("lam")
        return out


def _check_d_code(d_code: int) -> None:
    if isinstance(d_code, bool) or not isinstance(d_code, int) or d_code < 1:
        raise InvalidParameter(f"code distance must be a positive integer, got {d_code!r}")


def _ball(lam: int, m: int, radius: int, limits: Limits) -> int:
    # symbols differ by at most m - 1, so larger radii give the whole space
    radius = min(radius, m - 1)
    return count_auto(make_params(lam, m, radius), limits).value


def gv_lower_bound(lam: int, m: int, d_code: int, limits: Limits = DEFAULT_LIMITS) -> int:
    _check_d_code(d_code)
    space = multiset_size(make_params(lam, m, 0))
    return -(-space // _ball(lam, m, d_code - 1, limits))


def sphere_packing_upper_bound(
    lam: int, m: int, d_code: int, limits: Limits = DEFAULT_LIMITS
) -> int:
    _check_d_code(d_code)
    space = multiset_size(make_params(lam, m, 0))
    return space // _ball(lam, m, (d_code - 1) // 2, limits)


def bound_report(lam: int, m: int, d_code: int, limits: Limits = DEFAULT_LIMITS) -> BoundReport:
    _check_d_code(d_code)
    params = make_params(lam, m, 0)
    space = multiset_size(params)
    gv_radius, sp_radius = d_code - 1, (d_code - 1) // 2
    gv_ball = _ball(lam, m, gv_radius, limits)
    sp_ball = _ball(lam, m, sp_radius, limits)
    report = BoundReport(
        lam=lam,
        m=m,
        n=params.n,
        d_code=d_code,
        space_size=space,
        gv_lower=-(-space // gv_ball),
        sp_upper=space // sp_ball,
        gv_radius=gv_radius,
        gv_ball_size=gv_ball,
        sp_radius=sp_radius,
        sp_ball_size=sp_ball,
    )
    if not 1 <= report.gv_lower <= report.sp_upper <= space:
        raise InternalInconsistency(f"bounds out of order: {report}")
    return report
