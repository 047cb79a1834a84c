"""Single and joint weak values for pre/post-selected states.

The weak value of an observable A between pre-selection |i> and
post-selection |f> is <f|A|i> / <f|i>.  It is complex in general and may
lie far outside the eigenvalue range of A.  The joint weak value of a
commuting pair (A, B) is the weak value of the operator product A.B; no
symmetrization is needed since the factors commute.

Orthogonal post-selection (|<f|i>| <= 1e-12) is a hard error here: the
conditional quantity is simply undefined in that regime and no attempt is
made to regularize it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonCommuting, OrthogonalPostselection
from .hilbert import Ket, Operator, check_commute

OVERLAP_TOL = 1e-12


@dataclass(frozen=True)
class WeakValueSet:
    """Weak values of a commuting pair plus the post-selection data.

    ``postselect_prob`` always equals ``|overlap|**2``.
    """

    a_w: complex
    b_w: complex
    ab_w: complex
    overlap: complex
    postselect_prob: float


def _overlap_or_raise(pre: Ket, post: Ket) -> complex:
    ov = post.overlap(pre)
    if abs(ov) <= OVERLAP_TOL:
        raise OrthogonalPostselection(
            f"post-selection overlap {abs(ov):.3e} below {OVERLAP_TOL:g}"
        )
    return ov


def weak_value(pre: Ket, post: Ket, obs: Operator) -> complex:
    """<post|obs|pre> / <post|pre>."""
    ov = _overlap_or_raise(pre, post)
    return complex(post.overlap(obs.apply(pre)) / ov)


def weak_value_set(pre: Ket, post: Ket, a: Operator, b: Operator) -> WeakValueSet:
    """Weak values of a, b and of the product a.b for a commuting pair."""
    if not check_commute(a, b):
        raise NonCommuting("weak_value_set requires commuting observables")
    ov = _overlap_or_raise(pre, post)
    return WeakValueSet(
        a_w=weak_value(pre, post, a),
        b_w=weak_value(pre, post, b),
        ab_w=weak_value(pre, post, a.matmul(b)),
        overlap=ov,
        postselect_prob=abs(ov) ** 2,
    )


def postselect_probability(pre: Ket, post: Ket) -> float:
    """|<post|pre>|^2; both states must arrive normalized."""
    from .errors import NormalizationError

    for name, state in (("pre", pre), ("post", post)):
        if abs(state.norm() - 1.0) > 1e-9:
            raise NormalizationError(f"{name} state is not normalized")
    return min(1.0, abs(post.overlap(pre)) ** 2)
