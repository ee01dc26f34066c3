# Copyright 2026 The recdel Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python front end for the recdel C++ library.

``p`` may be a :class:`fractions.Fraction`, an ``int``, a ``float`` or a string
such as ``"1/2"`` or ``"0.3"``. Exact results come back as ``Fraction``.
"""

from fractions import Fraction

from . import _recdel
from ._recdel import (
    ResourceError,
    UnsupportedOperation,
    bivariate_check as _bivariate_check,
    canonical_index,
    enumerate_stratum,
    leaf_count,
    root_degree,
    tree_from_index,
)

__all__ = [
    "ResourceError",
    "UnsupportedOperation",
    "asym",
    "bivariate_check",
    "canonical_index",
    "enumerate_stratum",
    "leaf_count",
    "moments",
    "root_degree",
    "series",
    "simulate",
    "stratum_distribution",
    "tree_from_index",
    "verify",
]


def _p_text(p):
    if isinstance(p, str):
        return p
    if isinstance(p, float):
        return repr(p)
    p = Fraction(p)
    return f"{p.numerator}/{p.denominator}"


def _exact_default(p, exact):
    if exact is not None:
        return exact
    return not isinstance(p, float)


def _cell(v):
    return Fraction(v) if isinstance(v, str) else v


def stratum_distribution(n, p, exact=None):
    """P(S_n = k) for k = 0..n."""
    return [_cell(v) for v in _recdel.stratum_distribution(n, _p_text(p), _exact_default(p, exact))]


def moments(n, p, exact=None):
    """Moment table of the stratum number at time n."""
    row = _recdel.moments(n, _p_text(p), _exact_default(p, exact))
    return {k: _cell(v) for k, v in row.items()}


def series(name, p, order, exact=None):
    """Coefficients 0..order of the generating function ``name``."""
    return [_cell(v) for v in _recdel.series(name, _p_text(p), order, _exact_default(p, exact))]


def bivariate_check(p, z, u, order):
    return _bivariate_check(_p_text(p), z, u, order)


def asym(functional, p, n, refined=False):
    return _recdel.asym(functional, _p_text(p), n, refined)


def simulate(p, n, reps, seed, rule="lifo", functionals=(), threads=0):
    return _recdel.simulate(_p_text(p), n, reps, seed, rule, list(functionals), threads)


def verify(rule, p, K, n, exact=None):
    report = _recdel.verify(rule, _p_text(p), K, n, _exact_default(p, exact))
    for e in report["uniformity"]:
        e["mass"] = _cell(e["mass"])
        e["max_deviation"] = _cell(e["max_deviation"])
    return report
