"""Structure constants and adjoint operators for the eight families.

All eight algebras share the basis (X1, ..., X5) with derived ideal
span(X3, X4, X5) abelian, [X1, X2] = X3, ad_{X1} vanishing on the ideal,
and ad_{X2} acting on the ideal by a family-specific 3x3 matrix. Dual
coordinates are written (alpha, beta, gamma, delta, sigma) for a base
covector and (x, y, z, t, s) for a running point of its orbit.
"""

import math
import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, ParameterWarning

FAMILY_TAGS = (
    "5.3.1", "5.3.2", "5.3.3", "5.3.4", "5.3.5", "5.3.6", "5.3.7", "5.3.8",
)

PARAM_NAMES = {
    "5.3.1": ("lambda1", "lambda2"),
    "5.3.2": ("lambda",),
    "5.3.3": ("lambda",),
    "5.3.4": (),
    "5.3.5": ("lambda",),
    "5.3.6": ("lambda",),
    "5.3.7": (),
    "5.3.8": ("lambda", "phi"),
}

# Used by the CLI when --params is omitted; the library API always takes
# explicit parameters for parameterized families.
DEFAULT_PARAMS = {
    "5.3.1": {"lambda1": 2.0, "lambda2": 3.0},
    "5.3.2": {"lambda": 2.0},
    "5.3.3": {"lambda": 2.0},
    "5.3.4": {},
    "5.3.5": {"lambda": 2.0},
    "5.3.6": {"lambda": 2.0},
    "5.3.7": {},
    "5.3.8": {"lambda": 1.0, "phi": math.pi / 3.0},
}


def normalize_family(tag) -> str:
    """Canonicalize a family tag; accepts '5.3.k' or 'G5.3.k'."""
    if not isinstance(tag, str):
        raise DomainError(f"family tag must be a string, got {type(tag).__name__}")
    t = tag.strip()
    if t[:1] in ("G", "g"):
        t = t[1:]
    if t not in FAMILY_TAGS:
        raise DomainError(f"unknown family tag {tag!r}; expected one of "
                          + ", ".join(FAMILY_TAGS))
    return t


def _as_float(name, value):
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"parameter {name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise DomainError(f"parameter {name} must be finite, got {v!r}")
    return v


def params_from_sequence(family, values) -> dict:
    """Build a parameter dict from an ordered value list (CLI --params order)."""
    family = normalize_family(family)
    names = PARAM_NAMES[family]
    values = list(values)
    if len(values) != len(names):
        raise DomainError(
            f"family {family} takes {len(names)} parameter(s) "
            f"({', '.join(names) or 'none'}), got {len(values)}")
    return {n: _as_float(n, v) for n, v in zip(names, values)}


def validate_params(family, params=None) -> dict:
    """Check family parameters against their domain; return a canonical dict.

    Raises DomainError naming the violated constraint. params=None selects
    the catalog defaults. Degenerate-but-accepted values (a zero first
    eigenvalue for families 5.3.1, 5.3.3, 5.3.5) emit a ParameterWarning
    because the generic orbit case equations lose a relation there; see
    classify_orbit.
    """
    family = normalize_family(family)
    names = PARAM_NAMES[family]
    if params is None:
        params = dict(DEFAULT_PARAMS[family])
    if not isinstance(params, dict):
        params = params_from_sequence(family, params)
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError(f"family {family} requires parameter(s) {', '.join(missing)}")
    extra = [k for k in params if k not in names]
    if extra:
        raise DomainError(f"family {family} does not take parameter(s) {', '.join(extra)}")
    p = {n: _as_float(n, params[n]) for n in names}

    if family == "5.3.1":
        l1, l2 = p["lambda1"], p["lambda2"]
        if l1 == 1.0:
            raise DomainError("family 5.3.1 requires lambda1 != 1")
        if l2 == 0.0:
            raise DomainError("family 5.3.1 requires lambda2 != 0")
        if l2 == 1.0:
            raise DomainError("family 5.3.1 requires lambda2 != 1")
        if l1 == l2:
            raise DomainError("family 5.3.1 requires lambda1 != lambda2")
        if l1 == 0.0:
            warnings.warn(
                "family 5.3.1 with lambda1 = 0 is accepted, but the generic "
                "orbit case equations degenerate; classify_orbit refuses "
                "cases with gamma != 0 for these parameters",
                ParameterWarning, stacklevel=2)
    elif family == "5.3.2":
        if p["lambda"] == 0.0:
            raise DomainError("family 5.3.2 requires lambda != 0")
        if p["lambda"] == 1.0:
            raise DomainError("family 5.3.2 requires lambda != 1")
    elif family == "5.3.3":
        if p["lambda"] == 1.0:
            raise DomainError("family 5.3.3 requires lambda != 1")
        if p["lambda"] == 0.0:
            warnings.warn(
                "family 5.3.3 with lambda = 0 is accepted, but the generic "
                "orbit case equations degenerate; classify_orbit refuses "
                "cases with gamma != 0 for these parameters",
                ParameterWarning, stacklevel=2)
    elif family == "5.3.5":
        if p["lambda"] == 1.0:
            raise DomainError("family 5.3.5 requires lambda != 1")
        if p["lambda"] == 0.0:
            warnings.warn(
                "family 5.3.5 with lambda = 0 is accepted, but the generic "
                "orbit case equations degenerate; classify_orbit refuses "
                "cases with gamma != 0 for these parameters",
                ParameterWarning, stacklevel=2)
    elif family == "5.3.6":
        if p["lambda"] == 0.0:
            raise DomainError("family 5.3.6 requires lambda != 0")
        if p["lambda"] == 1.0:
            raise DomainError("family 5.3.6 requires lambda != 1")
    elif family == "5.3.8":
        if p["lambda"] == 0.0:
            raise DomainError("family 5.3.8 requires lambda != 0")
        if not 0.0 < p["phi"] < math.pi:
            raise DomainError("family 5.3.8 requires phi in the open interval (0, pi)")
    return p


def ad2_matrix(family, params) -> np.ndarray:
    """The 3x3 matrix of ad_{X2} on the derived ideal, columns = images of X3..X5."""
    family = normalize_family(family)
    p = validate_params(family, params)
    if family == "5.3.1":
        return np.diag([p["lambda1"], p["lambda2"], 1.0])
    if family == "5.3.2":
        return np.diag([1.0, 1.0, p["lambda"]])
    if family == "5.3.3":
        return np.diag([p["lambda"], 1.0, 1.0])
    if family == "5.3.4":
        return np.eye(3)
    if family == "5.3.5":
        return np.array([[p["lambda"], 0.0, 0.0],
                         [0.0, 1.0, 1.0],
                         [0.0, 0.0, 1.0]])
    if family == "5.3.6":
        return np.array([[1.0, 1.0, 0.0],
                         [0.0, 1.0, 0.0],
                         [0.0, 0.0, p["lambda"]]])
    if family == "5.3.7":
        return np.array([[1.0, 1.0, 0.0],
                         [0.0, 1.0, 1.0],
                         [0.0, 0.0, 1.0]])
    # 5.3.8
    c, s = math.cos(p["phi"]), math.sin(p["phi"])
    return np.array([[c, -s, 0.0],
                     [s, c, 0.0],
                     [0.0, 0.0, p["lambda"]]])


@dataclass(frozen=True)
class LieAlgebra:
    """A validated family member: tag, parameters, structure tensor.

    c[i, j, k] is the X_{k+1} coefficient of [X_{i+1}, X_{j+1}] (0-based
    storage, 1-based basis labels). The tensor is exactly antisymmetric in
    (i, j) by construction and read-only.
    """
    family: str
    params: dict
    c: np.ndarray

    @property
    def dim(self) -> int:
        return 5


def build_algebra(family, params=None) -> LieAlgebra:
    """Construct the structure tensor for a family member."""
    family = normalize_family(family)
    p = validate_params(family, params)
    c = np.zeros((5, 5, 5))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    A = ad2_matrix(family, p)
    for j in range(3):
        for i in range(3):
            if A[i, j] != 0.0:
                c[1, 2 + j, 2 + i] = A[i, j]
                c[2 + j, 1, 2 + i] = -A[i, j]
    c.setflags(write=False)
    return LieAlgebra(family=family, params=p, c=c)


def as_vector5(v, what="vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (5,):
        raise DomainError(f"{what} must have 5 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} must have finite coordinates")
    return arr


def bracket(alg: LieAlgebra, U, V) -> np.ndarray:
    """Lie bracket [U, V] in basis coordinates.

    Computed from the antisymmetrized outer product so that
    bracket(U, V) == -bracket(V, U) holds to exact floating-point equality.
    """
    U = as_vector5(U)
    V = as_vector5(V)
    W = np.outer(U, V)
    W = W - W.T
    return 0.5 * np.einsum("ij,ijk->k", W, alg.c)


def ad_matrix(alg: LieAlgebra, U) -> np.ndarray:
    """Matrix of ad_U = [U, .] acting on coordinate columns."""
    U = as_vector5(U, "algebra element")
    return np.einsum("i,ijk->kj", U, alg.c)


def jacobi_residual(alg: LieAlgebra) -> float:
    """Max over basis triples of the sup-norm of the Jacobi cyclic sum."""
    E = np.eye(5)
    worst = 0.0
    for i, j, k in combinations(range(5), 3):
        v = (bracket(alg, E[i], bracket(alg, E[j], E[k]))
             + bracket(alg, E[j], bracket(alg, E[k], E[i]))
             + bracket(alg, E[k], bracket(alg, E[i], E[j])))
        worst = max(worst, float(np.max(np.abs(v))))
    return worst


_CATALOG = [
    {
        "tag": "5.3.1",
        "name": "G5.3.1",
        "parameters": ["lambda1", "lambda2"],
        "constraints": [
            "lambda1 != 1", "lambda2 != 0", "lambda2 != 1",
            "lambda1 != lambda2",
            "lambda1 = 0 accepted with a warning (orbit case equations degenerate)",
        ],
        "ad_x2": [["lambda1", 0, 0], [0, "lambda2", 0], [0, 0, 1]],
    },
    {
        "tag": "5.3.2",
        "name": "G5.3.2",
        "parameters": ["lambda"],
        "constraints": ["lambda != 0", "lambda != 1"],
        "ad_x2": [[1, 0, 0], [0, 1, 0], [0, 0, "lambda"]],
    },
    {
        "tag": "5.3.3",
        "name": "G5.3.3",
        "parameters": ["lambda"],
        "constraints": ["lambda != 1"],
        "ad_x2": [["lambda", 0, 0], [0, 1, 0], [0, 0, 1]],
    },
    {
        "tag": "5.3.4",
        "name": "G5.3.4",
        "parameters": [],
        "constraints": [],
        "ad_x2": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    },
    {
        "tag": "5.3.5",
        "name": "G5.3.5",
        "parameters": ["lambda"],
        "constraints": ["lambda != 1"],
        "ad_x2": [["lambda", 0, 0], [0, 1, 1], [0, 0, 1]],
    },
    {
        "tag": "5.3.6",
        "name": "G5.3.6",
        "parameters": ["lambda"],
        "constraints": ["lambda != 0", "lambda != 1"],
        "ad_x2": [[1, 1, 0], [0, 1, 0], [0, 0, "lambda"]],
    },
    {
        "tag": "5.3.7",
        "name": "G5.3.7",
        "parameters": [],
        "constraints": [],
        "ad_x2": [[1, 1, 0], [0, 1, 1], [0, 0, 1]],
    },
    {
        "tag": "5.3.8",
        "name": "G5.3.8",
        "parameters": ["lambda", "phi"],
        "constraints": ["lambda != 0", "phi in (0, pi)"],
        "ad_x2": [["cos(phi)", "-sin(phi)", 0],
                  ["sin(phi)", "cos(phi)", 0],
                  [0, 0, "lambda"]],
    },
]


def family_catalog() -> dict:
    """Machine-readable catalog: tags, parameter names, domain constraints,
    and the ad_{X2} matrix template for each family."""
    entries = []
    for row in _CATALOG:
        entry = {k: (list(v) if isinstance(v, list) else v) for k, v in row.items()}
        entry["defaults"] = dict(DEFAULT_PARAMS[row["tag"]])
        entries.append(entry)
    return {"basis": "X1..X5, derived ideal = span(X3, X4, X5), [X1, X2] = X3",
            "families": entries}
