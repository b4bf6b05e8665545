"""Constructors for the classified metric Lie algebra families.

Every family is built from plain parameter arithmetic (sums, products,
quotients, integer powers), so the same data functions produce exact
entries when called with ``fractions.Fraction`` parameters and floats
otherwise.  The two families whose data involves square roots
(su2xR2, sl2xR2) are float only.

Family ids
----------
g3, g2, g8_lambda, g4, g5, g6, g7_delta, h5
    one-dimensional center; each is the central extension of a
    4-dimensional algebra by a parallel rotation pair, carries a
    reference 2-form that is strict CKY and closed, and the associated
    vector spans the center.
grs, L59, su2xR2, sl2xR2
    two-dimensional center; the reference 2-form is strict CKY and not
    closed, and the associated vector is orthogonal to the center.
    L59 / su2xR2 / sl2xR2 are alternative presentations of grs at
    r = s, s > r, r > s respectively (see ``basis_change_verify``).
dim3center
    three-dimensional center; admits no strict CKY 2-form.
abelian
    flat R^5; every constant form is parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .forms import PForm, form_from_terms, form_of_endo, exterior_derivative
from .liealg import MetricLieAlgebra, ToleranceConfig, build_structure, jacobi_residual
from .connection import levi_civita

HALF = Fraction(1, 2)

FAMILY_IDS = ("g3", "g2", "g8_lambda", "g4", "g5", "g6", "g7_delta", "h5",
              "grs", "L59", "su2xR2", "sl2xR2", "dim3center", "abelian")

# parameter names, defaults, and human-readable constraint per family
_PARAM_INFO = {
    "g3": (("t", "a1", "a2"), {"t": 1, "a1": 1, "a2": 1}, "t, a1, a2 > 0"),
    "g2": (("t", "a1", "a2"), {"t": 1, "a1": 1, "a2": 1}, "t, a1, a2 > 0"),
    "g8_lambda": (("t", "a1", "a2", "lambda"), {"t": 1, "a1": 1, "a2": 1, "lambda": 1},
                  "t, a1, a2, lambda > 0"),
    "g4": (("t", "s", "a1", "a2"), {"t": 1, "s": 1, "a1": 1, "a2": 1},
           "t > 0; 0 < s <= 1; a1, a2 > 0, and a1 >= a2 when s = 1"),
    "g5": (("t", "c"), {"t": 1, "c": 1}, "t, c > 0"),
    "g6": (("t", "c"), {"t": 1, "c": 1}, "t, c > 0"),
    "g7_delta": (("t", "c", "delta"), {"t": 1, "c": 1, "delta": 1},
                 "t > 0; delta > 0; c != 0"),
    "h5": (("a1", "a2"), {"a1": 1, "a2": 1}, "a1, a2 > 0"),
    "grs": (("r", "s"), {"r": 1, "s": 1}, "r, s > 0"),
    "L59": (("r",), {"r": 1}, "r > 0"),
    "su2xR2": (("r", "s"), {"r": 1, "s": 2}, "s > r > 0"),
    "sl2xR2": (("r", "s"), {"r": 2, "s": 1}, "r > s > 0"),
    "dim3center": (("a1", "a2", "a3", "a4", "a5"),
                   {"a1": 0, "a2": 0, "a3": 2, "a4": 1, "a5": 1},
                   "(a1, ..., a5) != 0"),
    "abelian": ((), {}, "none"),
}

_DESCRIPTIONS = {
    "g3": "central extension of R x e(2); unimodular, 1-dim center",
    "g2": "central extension of R^2 x aff(R); 1-dim center",
    "g8_lambda": "central extension of the oscillator-type algebra r'_{4,lambda,0}",
    "g4": "central extension of aff(R) x aff(R); two-parameter metric",
    "g5": "central extension of d_{4,1/2}",
    "g6": "central extension of d_{4,2}; non-diagonal metric",
    "g7_delta": "central extension of d'_{4,delta/2}",
    "h5": "5-dimensional Heisenberg algebra, diagonal metric",
    "grs": "two-step family on orthonormal frame (xi, z1, z2, x, y); 2-dim center",
    "L59": "3-step nilpotent algebra, one-parameter metric; grs at r = s",
    "su2xR2": "R^2 x su(2) presentation of grs for s > r",
    "sl2xR2": "R^2 x sl(2,R) presentation of grs for r > s",
    "dim3center": "solvable algebra with 3-dimensional center; no strict solutions",
    "abelian": "abelian R^5 with the flat metric",
}


def _pos(params, *names):
    bad = [k for k in names if not params[k] > 0]
    if bad:
        raise ValueError(f"parameters {bad} must be positive, got "
                         f"{ {k: params[k] for k in bad} }")


def _validate(family_id: str, p: dict):
    if family_id in ("g3", "g2"):
        _pos(p, "t", "a1", "a2")
    elif family_id == "g8_lambda":
        _pos(p, "t", "a1", "a2", "lambda")
    elif family_id == "g4":
        _pos(p, "t", "s", "a1", "a2")
        if p["s"] > 1:
            raise ValueError("g4 requires s <= 1")
        if p["s"] == 1 and p["a1"] < p["a2"]:
            raise ValueError("g4 with s = 1 requires a1 >= a2")
    elif family_id in ("g5", "g6"):
        _pos(p, "t", "c")
    elif family_id == "g7_delta":
        _pos(p, "t", "delta")
        if p["c"] == 0:
            raise ValueError("g7_delta requires c != 0")
    elif family_id == "h5":
        _pos(p, "a1", "a2")
    elif family_id == "grs":
        _pos(p, "r", "s")
    elif family_id == "L59":
        _pos(p, "r")
    elif family_id == "su2xR2":
        _pos(p, "r", "s")
        if not p["s"] > p["r"]:
            raise ValueError("su2xR2 requires s > r")
    elif family_id == "sl2xR2":
        _pos(p, "r", "s")
        if not p["r"] > p["s"]:
            raise ValueError("sl2xR2 requires r > s")
    elif family_id == "dim3center":
        if all(p[f"a{i}"] == 0 for i in range(1, 6)):
            raise ValueError("dim3center requires a nonzero bracket")
    elif family_id != "abelian":
        raise ValueError(f"unknown family {family_id!r}")


@dataclass
class FamilySpec:
    """Family id plus a validated, default-filled parameter map."""

    family_id: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family_id not in FAMILY_IDS:
            raise ValueError(f"unknown family {self.family_id!r}; "
                             f"known ids: {', '.join(FAMILY_IDS)}")
        names, defaults, _ = _PARAM_INFO[self.family_id]
        merged = dict(defaults)
        for key, val in self.params.items():
            key = "lambda" if key == "lam" else key
            if key not in names:
                raise ValueError(f"family {self.family_id} takes parameters "
                                 f"{names}, not {key!r}")
            merged[key] = val
        self.params = merged
        _validate(self.family_id, self.params)


@dataclass
class FamilyInstance:
    """A built algebra, its reference form (if any), and the claims on it."""

    family_id: str
    params: dict
    algebra: MetricLieAlgebra
    reference_form: PForm | None
    expected: dict

    def to_dict(self) -> dict:
        from .liealg import algebra_to_dict
        from .forms import form_to_dict
        out = algebra_to_dict(self.algebra)
        out["family"] = self.family_id
        out["params"] = {k: float(v) for k, v in self.params.items()}
        if self.reference_form is not None:
            out["reference_form"] = form_to_dict(self.reference_form)
        out["expected"] = self.expected
        return out


def _diag(*entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def family_data(family_id: str, p: dict):
    """(brackets, metric rows, reference 2-form terms or None) for one family.

    All entries are built with the parameters' own arithmetic, so exact
    parameter types give exact entries.  su2xR2 and sl2xR2 take square
    roots and therefore always return floats.
    """
    if family_id == "g3":
        t, a1, a2 = p["t"], p["a1"], p["a2"]
        br = {(0, 1): {2: -1}, (0, 2): {1: 1}, (0, 3): {4: -1}, (1, 2): {4: -1}}
        metric = _diag(t, t, t, a1 ** 2 * t / a2 ** 2, 4 * t ** 2 / a2 ** 2)
        omega = {(0, 3): a1 ** 2 * t / a2, (1, 2): a2 * t}
    elif family_id == "g2":
        t, a1, a2 = p["t"], p["a1"], p["a2"]
        br = {(0, 1): {1: 1, 4: -1}, (2, 3): {4: -1}}
        metric = _diag(t, t, a1 ** 2 * t, t / a2 ** 2, 4 * t ** 2 / a2 ** 2)
        omega = {(0, 1): t * a2, (2, 3): t * a1 ** 2 / a2}
    elif family_id == "g8_lambda":
        t, a1, a2, lam = p["t"], p["a1"], p["a2"], p["lambda"]
        br = {(0, 3): {0: -1, 4: -1}, (1, 2): {4: -1},
              (1, 3): {2: 1 / lam}, (2, 3): {1: -1 / lam}}
        metric = _diag((a1 * lam / a2) ** 2 * t, t, t, t / lam ** 2,
                       4 * t ** 2 / a2 ** 2)
        omega = {(0, 3): -(a1 ** 2) * t / a2, (1, 2): -a2 * t}
    elif family_id == "g4":
        t, s, a1, a2 = p["t"], p["s"], p["a1"], p["a2"]
        br = {(0, 1): {1: 1, 4: -1}, (2, 3): {3: 1, 4: -1}}
        metric = _diag(t, t * a1 ** 2, t * s, t * a2 ** 2 / s, 4 * t ** 2)
        omega = {(0, 1): t * a1 ** 2, (2, 3): t * a2 ** 2}
    elif family_id == "g5":
        t, c = p["t"], p["c"]
        br = {(0, 1): {2: 1, 4: -1}, (0, 3): {0: -HALF},
              (1, 3): {1: -HALF}, (2, 3): {2: -1, 4: 1}}
        metric = _diag(t, t, t, t, 4 * t ** 2 / c ** 2)
        omega = {(0, 1): t * c, (2, 3): -t * c}
    elif family_id == "g6":
        t, c = p["t"], p["c"]
        br = {(0, 1): {2: 1}, (0, 3): {0: -2}, (1, 2): {4: -1},
              (1, 3): {1: 1}, (2, 3): {2: -1}}
        q = 4 * t ** 2 / c ** 2
        metric = [[t + q, 0, 0, 0, q],
                  [0, t, 0, 0, 0],
                  [0, 0, t, 0, 0],
                  [0, 0, 0, 4 * t, 0],
                  [q, 0, 0, 0, q]]
        omega = {(0, 3): 2 * t * c, (1, 2): t * c}
    elif family_id == "g7_delta":
        t, c, d = p["t"], p["c"], p["delta"]
        br = {(0, 1): {2: 1, 4: -1}, (0, 3): {0: -d * HALF, 1: 1},
              (1, 3): {0: -1, 1: -d * HALF}, (2, 3): {2: -d, 4: d}}
        metric = _diag(t, t, t, d ** 2 * t, 4 * t ** 2 / c ** 2)
        omega = {(0, 1): t * c, (2, 3): -d * t * c}
    elif family_id == "h5":
        a1, a2 = p["a1"], p["a2"]
        br = {(0, 1): {4: 1}, (2, 3): {4: 1}}
        metric = _diag(a1 ** 2, 1 / a2 ** 2, 1, 1, 4 / a2 ** 2)
        omega = {(0, 1): a1 ** 2 / a2, (2, 3): a2}
    elif family_id == "grs":
        r, s = p["r"], p["s"]
        a4 = (s ** 2 - r ** 2) / s
        br = {(0, 3): {1: r, 4: a4}, (0, 4): {2: r, 3: -a4}, (3, 4): {0: s}}
        metric = _diag(1, 1, 1, 1, 1)
        omega = {(1, 2): 2 * (s ** 2 + 2 * r ** 2) / (r ** 2 * s),
                 (1, 3): 2 / r, (2, 4): 2 / r, (3, 4): 4 / s}
    elif family_id == "L59":
        r = p["r"]
        br = {(0, 3): {1: -1}, (0, 4): {2: -1}, (3, 4): {0: 1}}
        metric = _diag(r ** 2, r ** 4, r ** 4, 1, 1)
        omega = {(1, 2): 6 * r ** 3, (1, 3): -2 * r, (2, 4): -2 * r,
                 (3, 4): 4 / r}
    elif family_id == "su2xR2":
        r, s = float(p["r"]), float(p["s"])
        a4 = (s ** 2 - r ** 2) / s
        rho = r / math.sqrt(a4 ** 3 * s)
        kappa = (r ** 2 + a4 ** 2) / (a4 ** 3 * s)
        br = {(0, 3): {4: 1}, (0, 4): {3: -1}, (3, 4): {0: 1}}
        metric = [[1 / a4 ** 2, 0, 0, 0, 0],
                  [0, 1, 0, rho, 0],
                  [0, 0, 1, 0, -rho],
                  [0, rho, 0, kappa, 0],
                  [0, 0, -rho, 0, kappa]]
        off = 6 * r / (s ** 2 - r ** 2) ** 1.5
        omega = {(1, 2): 2 * (s ** 2 + 2 * r ** 2) / (r ** 2 * s),
                 (1, 4): -off, (2, 3): -off,
                 (3, 4): -2 * (s ** 4 + 2 * r ** 4) / (s * (s ** 2 - r ** 2) ** 3)}
    elif family_id == "sl2xR2":
        r, s = float(p["r"]), float(p["s"])
        a4 = (s ** 2 - r ** 2) / s
        m = -a4
        rho = r / math.sqrt(m ** 3 * s)
        kappa = (r ** 2 + a4 ** 2) / (m ** 3 * s)
        br = {(0, 3): {4: 1}, (0, 4): {3: -1}, (3, 4): {0: -1}}
        metric = [[1 / a4 ** 2, 0, 0, 0, 0],
                  [0, 1, 0, rho, 0],
                  [0, 0, 1, 0, rho],
                  [0, rho, 0, kappa, 0],
                  [0, 0, rho, 0, kappa]]
        off = 6 * r / (r ** 2 - s ** 2) ** 1.5
        omega = {(1, 2): 2 * (s ** 2 + 2 * r ** 2) / (r ** 2 * s),
                 (1, 4): off, (2, 3): -off,
                 (3, 4): 2 * (s ** 4 + 2 * r ** 4) / (s * (r ** 2 - s ** 2) ** 3)}
    elif family_id == "dim3center":
        a = [p[f"a{i}"] for i in range(1, 6)]
        # basis (u, z1, z2, z3, x); [x, u] = a1 x + a2 u + a3 z1 + a4 z2 + a5 z3
        br = {(0, 4): {4: -a[0], 0: -a[1], 1: -a[2], 2: -a[3], 3: -a[4]}}
        metric = _diag(1, 1, 1, 1, 1)
        omega = None
    elif family_id == "abelian":
        br = {}
        metric = _diag(1, 1, 1, 1, 1)
        omega = None
    else:
        raise ValueError(f"unknown family {family_id!r}")
    return br, metric, omega


_LABELS = {
    "grs": ("xi", "z1", "z2", "x", "y"),
    "L59": ("E", "Z1", "Z2", "X", "Y"),
    "su2xR2": ("E", "Z1", "Z2", "X", "Y"),
    "sl2xR2": ("E", "Z1", "Z2", "X", "Y"),
    "dim3center": ("u", "z1", "z2", "z3", "x"),
}


def _expected(family_id: str) -> dict:
    if family_id in ("g3", "g2", "g8_lambda", "g4", "g5", "g6", "g7_delta", "h5"):
        return {"cky2": 1, "ky2": 0, "starky2": 1, "parallel2": 0,
                "strict": True, "closed": True, "xi_in_center": True}
    if family_id in ("grs", "L59", "su2xR2", "sl2xR2"):
        return {"cky2": 1, "ky2": 0, "starky2": 0, "parallel2": 0,
                "cky3": 1, "ky3": 0, "starky3": 0,
                "strict": True, "closed": False, "xi_in_center": False}
    if family_id == "dim3center":
        return {"strict_count": 0}
    return {"cky2": 10, "ky2": 10, "starky2": 10, "parallel2": 10, "cky3": 10,
            "strict": False}


def build_family(family_id: str, params: dict | None = None,
                 tol: ToleranceConfig | None = None, **kw) -> FamilyInstance:
    """Instantiate a catalog family at given parameter values."""
    merged = dict(params or {})
    merged.update(kw)
    spec = FamilySpec(family_id, merged)
    br, metric, omega = family_data(spec.family_id, spec.params)
    structure = build_structure(5, {ij: {k: float(v) for k, v in co.items()}
                                    for ij, co in br.items()})
    gram = np.array([[float(v) for v in row] for row in metric])
    algebra = MetricLieAlgebra(structure, gram,
                               basis_labels=_LABELS.get(spec.family_id,
                                                        tuple(f"E{i+1}" for i in range(5))),
                               tol=tol)
    jac = jacobi_residual(algebra)
    if jac > algebra.tol.jacobi:
        raise ValueError(f"family {family_id} produced an invalid bracket "
                         f"(jacobi residual {jac:.3e})")
    ref = None
    if omega is not None:
        ref = form_from_terms(5, 2, {ij: float(v) for ij, v in omega.items()})
    return FamilyInstance(family_id=spec.family_id, params=spec.params,
                          algebra=algebra, reference_form=ref,
                          expected=_expected(spec.family_id))


# ---------------------------------------------------------------------------
# central extensions by a parallel skew isomorphism
# ---------------------------------------------------------------------------


def central_extension(h: MetricLieAlgebra, S: np.ndarray,
                      xi_norm: float = 1.0) -> FamilyInstance:
    """Extend a 4-dimensional algebra by mu(x, y) = -2 <S^-1 x, y>.

    ``S`` must be a metric-skew, invertible, parallel endomorphism of
    ``h``; the extension adds a central direction xi of the given norm
    and carries the reference 2-form of the tensor S + 0, which is a
    strict CKY form with associated vector spanning the new center.
    """
    if h.dim != 4:
        raise ValueError(f"the extended algebra must be 4-dimensional, got dim {h.dim}")
    S = np.asarray(S, dtype=float)
    if S.shape != (4, 4):
        raise ValueError("S must be a 4 x 4 matrix")
    if not xi_norm > 0:
        raise ValueError("xi_norm must be positive")
    scale = max(np.max(np.abs(S)), 1.0)
    gs = h.gram @ S
    if np.max(np.abs(gs + gs.T)) > h.tol.residual * scale:
        raise ValueError("S is not skew for the metric")
    if np.linalg.matrix_rank(S, tol=h.tol.rank_rel * scale) < 4:
        raise ValueError("S is singular")
    conn = levi_civita(h)
    par = max(np.max(np.abs(conn.derivative_of_endo(np.eye(4)[i], S)))
              for i in range(4))
    if par > h.tol.residual * scale:
        raise ValueError(f"S is not parallel (residual {par:.3e})")

    mu_mat = -2.0 * np.linalg.inv(S).T @ h.gram
    mu = form_from_terms(4, 2, {(i, j): mu_mat[i, j]
                                for i in range(4) for j in range(i + 1, 4)})
    dmu = exterior_derivative(h, mu)
    if dmu.max_abs() > h.tol.residual * max(np.max(np.abs(mu_mat)), 1.0):
        raise ValueError(f"mu is not closed (residual {dmu.max_abs():.3e})")

    structure = np.zeros((5, 5, 5))
    structure[:4, :4, :4] = h.structure
    structure[:4, :4, 4] = mu_mat
    gram = np.zeros((5, 5))
    gram[:4, :4] = h.gram
    gram[4, 4] = xi_norm ** 2
    algebra = MetricLieAlgebra(structure, gram,
                               basis_labels=h.basis_labels + ("xi",), tol=h.tol)
    T = np.zeros((5, 5))
    T[:4, :4] = S
    ref = form_of_endo(algebra, T)
    return FamilyInstance(family_id="central_extension", params={"xi_norm": xi_norm},
                          algebra=algebra, reference_form=ref,
                          expected={"strict": True, "closed": True,
                                    "xi_in_center": True})


def table1_data(family_id: str, p: dict):
    """Ingredients behind the 1-dim-center families, in generic arithmetic.

    Returns (h brackets, h metric rows, S rows, relabel columns): the
    4-dimensional algebra on basis (e1, f1, e2, f2), the parallel skew
    tensor S rotating e1->f1 and e2->f2, and the 5 x 5 change of basis
    whose columns express the catalog basis E_1..E_5 in (e1, f1, e2,
    f2, xi) coordinates.
    """
    t = p.get("t", 1)
    if family_id == "g3":
        a1, a2 = p["a1"], p["a2"]
        hbr = {(0, 2): {3: -1}, (0, 3): {2: 1}}
        hmetric = _diag(t, t, t, t)
        s1, s2 = a1, a2
        cols = [[1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, a1 / a2, 0, 0, 0],
                [0, 0, 0, 0, -2 * t / a2]]
    elif family_id == "g2":
        a1, a2 = p["a1"], p["a2"]
        hbr = {(2, 3): {3: 1}}
        hmetric = _diag(t, t, t, t)
        s1, s2 = a1, a2
        cols = [[0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [a1, 0, 0, 0, 0],
                [0, 1 / a2, 0, 0, 0],
                [0, 0, 0, 0, -2 * t / a2]]
    elif family_id == "g8_lambda":
        a1, a2, lam = p["a1"], p["a2"], p["lambda"]
        hbr = {(0, 1): {1: lam}, (0, 2): {3: 1}, (0, 3): {2: -1}}
        hmetric = _diag(t, t, t, t)
        s1, s2 = a1, a2
        cols = [[0, lam * a1 / a2, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, -1, 0],
                [1 / lam, 0, 0, 0, 0],
                [0, 0, 0, 0, 2 * t / a2]]
    elif family_id == "g4":
        s, a1, a2 = p["s"], p["a1"], p["a2"]
        hbr = {(0, 1): {1: 1}, (2, 3): {3: 1}}
        hmetric = _diag(t, t, t * s, t * s)
        s1, s2 = a1, a2
        cols = [[1, 0, 0, 0, 0],
                [0, a1, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, a2 / s, 0],
                [0, 0, 0, 0, -2 * t]]
    elif family_id == "g5":
        c = p["c"]
        hbr = {(0, 1): {1: 1}, (0, 2): {2: HALF}, (0, 3): {3: HALF},
               (2, 3): {1: 1}}
        hmetric = _diag(t, t, t, t)
        s1 = s2 = c
        cols = [[0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 1, 0, 0, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 0, 0, -2 * t / c]]
    elif family_id == "g6":
        c = p["c"]
        hbr = {(0, 1): {0: -1}, (0, 2): {3: 1}, (1, 2): {2: -HALF},
               (1, 3): {3: HALF}}
        hmetric = _diag(t, t, t, t)
        s1 = s2 = c
        cols = [[1, 0, 0, 0, -2 * t / c],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 2, 0, 0, 0],
                [0, 0, 0, 0, -2 * t / c]]
    elif family_id == "g7_delta":
        c, d = p["c"], p["delta"]
        hbr = {(0, 1): {1: 1}, (0, 2): {2: HALF, 3: -1 / d},
               (0, 3): {2: 1 / d, 3: HALF}, (2, 3): {1: 1}}
        hmetric = _diag(t, t, t, t)
        s1 = s2 = c
        cols = [[0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 1, 0, 0, 0],
                [d, 0, 0, 0, 0],
                [0, 0, 0, 0, -2 * t / c]]
    elif family_id == "h5":
        a1, a2 = p["a1"], p["a2"]
        hbr = {}
        hmetric = _diag(1, 1, 1, 1)
        s1, s2 = a1, a2
        cols = [[a1, 0, 0, 0, 0],
                [0, 1 / a2, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 2 / a2]]
    else:
        raise ValueError(f"family {family_id!r} is not a central-extension family")
    srows = [[0, -s1, 0, 0],
             [s1, 0, 0, 0],
             [0, 0, 0, -s2],
             [0, 0, s2, 0]]
    # transpose: rows above list E_1..E_5, we hand back columns
    relabel = [[cols[j][i] for j in range(5)] for i in range(5)]
    return hbr, hmetric, srows, relabel


def table1_ingredients(family_id: str, params: dict | None = None, **kw):
    """(h, S, relabel) as float objects; see ``table1_data``."""
    spec = FamilySpec(family_id, {**(params or {}), **kw})
    hbr, hmetric, srows, relabel = table1_data(spec.family_id, spec.params)
    h = MetricLieAlgebra(
        build_structure(4, {ij: {k: float(v) for k, v in co.items()}
                            for ij, co in hbr.items()}),
        np.array([[float(v) for v in row] for row in hmetric]),
        basis_labels=("e1", "f1", "e2", "f2"))
    S = np.array([[float(v) for v in row] for row in srows])
    return h, S, np.array([[float(v) for v in row] for row in relabel])


def rebuild_from_ingredients(family_id: str, params: dict | None = None,
                             **kw) -> tuple:
    """Run the extension pipeline and push it through the relabeling.

    Returns (instance, structure residual, metric residual, omega
    residual) where the residuals compare the relabeled extension
    against ``build_family``'s tensors entrywise.
    """
    spec = FamilySpec(family_id, {**(params or {}), **kw})
    h, S, phi = table1_ingredients(family_id, spec.params)
    ext = central_extension(h, S, xi_norm=1.0)
    direct = build_family(family_id, spec.params)

    phi_inv = np.linalg.inv(phi)
    # push the extension tensors into the catalog basis
    c_ext = ext.algebra.structure
    c_push = np.einsum("ia,jb,abm,mk->ijk", phi.T, phi.T, c_ext, phi_inv.T)
    g_push = phi.T @ ext.algebra.gram @ phi
    from .forms import skew_matrix_of_form, form_of_skew_matrix
    w_ext = skew_matrix_of_form(ext.reference_form)
    w_push = phi.T @ w_ext @ phi

    dc = float(np.max(np.abs(c_push - direct.algebra.structure)))
    dg = float(np.max(np.abs(g_push - direct.algebra.gram)))
    dw = float(np.max(np.abs(w_push - skew_matrix_of_form(direct.reference_form))))
    return direct, dc, dg, dw


# ---------------------------------------------------------------------------
# the three presentations of grs
# ---------------------------------------------------------------------------


@dataclass
class BasisChangeReport:
    """Entrywise comparison of a transported grs instance with its target."""

    regime: str                 # nilpotent / su2 / sl2
    r: float
    s: float
    matrix: np.ndarray          # columns: target basis in grs coordinates
    bracket_residual: float
    metric_residual: float
    omega_residual: float

    def max_residual(self) -> float:
        return max(self.bracket_residual, self.metric_residual,
                   self.omega_residual)

    def passed(self, tol: float = 1e-10) -> bool:
        return self.max_residual() <= tol


def basis_change_verify(r: float, s: float) -> BasisChangeReport:
    """Transport g_{r,s} onto its named presentation and compare entrywise."""
    r, s = float(r), float(s)
    source = build_family("grs", {"r": r, "s": s})
    if r == s:
        regime, target = "nilpotent", build_family("L59", {"r": r})
        phi = np.zeros((5, 5))
        phi[0, 0] = r               # E = r xi
        phi[1, 1] = phi[2, 2] = -r ** 2
        phi[3, 3] = phi[4, 4] = 1.0
    else:
        a4 = (s ** 2 - r ** 2) / s
        xbar = np.array([0, r, 0, 0, a4])
        ybar = np.array([0, 0, r, -a4, 0])
        if s > r:
            regime, target = "su2", build_family("su2xR2", {"r": r, "s": s})
            root = math.sqrt(a4 ** 3 * s)
            cols = [-np.eye(5)[0] / a4, np.eye(5)[1], np.eye(5)[2],
                    xbar / root, -ybar / root]
        else:
            regime, target = "sl2", build_family("sl2xR2", {"r": r, "s": s})
            root = math.sqrt((-a4) ** 3 * s)
            cols = [np.eye(5)[0] / a4, np.eye(5)[1], np.eye(5)[2],
                    xbar / root, ybar / root]
        phi = np.column_stack(cols)

    phi_inv = np.linalg.inv(phi)
    c_push = np.einsum("ia,jb,abm,mk->ijk", phi.T, phi.T,
                       source.algebra.structure, phi_inv.T)
    g_push = phi.T @ source.algebra.gram @ phi
    from .forms import skew_matrix_of_form
    w_push = phi.T @ skew_matrix_of_form(source.reference_form) @ phi

    return BasisChangeReport(
        regime=regime, r=r, s=s, matrix=phi,
        bracket_residual=float(np.max(np.abs(c_push - target.algebra.structure))),
        metric_residual=float(np.max(np.abs(g_push - target.algebra.gram))),
        omega_residual=float(np.max(np.abs(
            w_push - skew_matrix_of_form(target.reference_form)))))


# ---------------------------------------------------------------------------
# documented sampling grid for verification sweeps
# ---------------------------------------------------------------------------


def sample_grid(seed: int = 0) -> dict:
    """Fixed parameter samples per family, as used by the verify suite."""
    ts, a1s, a2 = (1, 2), (1, 3), 2
    grid = {}
    for fam in ("g3", "g2", "g8_lambda"):
        grid[fam] = [{"t": t, "a1": a1, "a2": a2} for t in ts for a1 in a1s]
    grid["g4"] = [{"t": t, "s": s, "a1": a1, "a2": a2}
                  for t in ts for s in (Fraction(1, 2), 1) for a1 in a1s
                  if not (s == 1 and a1 < a2)]
    grid["g5"] = [{"t": t, "c": 1} for t in ts]
    grid["g6"] = [{"t": t, "c": 1} for t in ts]
    grid["g7_delta"] = [{"t": t, "c": 1, "delta": 1} for t in ts]
    grid["h5"] = [{"a1": a1, "a2": a2} for a1 in a1s]
    grid["grs"] = [{"r": 1, "s": 1}, {"r": 1, "s": 2}, {"r": 2, "s": 1},
                   {"r": Fraction(1, 2), "s": Fraction(3, 2)}]
    grid["L59"] = [{"r": 1}, {"r": 2}]
    grid["su2xR2"] = [{"r": 1, "s": 2}]
    grid["sl2xR2"] = [{"r": 2, "s": 1}]
    rng = np.random.default_rng(seed)
    draws = []
    while len(draws) < 10:
        a = rng.integers(-2, 3, size=5)
        if np.any(a != 0):
            draws.append({f"a{i+1}": int(a[i]) for i in range(5)})
    grid["dim3center"] = draws
    grid["abelian"] = [{}]
    return grid


def catalog_rows() -> list:
    """One (id, parameter names, constraint, description) row per family."""
    rows = []
    for fam in FAMILY_IDS:
        names, _, constraint = _PARAM_INFO[fam]
        rows.append((fam, ", ".join(names) or "-", constraint, _DESCRIPTIONS[fam]))
    return rows
