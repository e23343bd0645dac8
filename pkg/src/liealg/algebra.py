"""Finite-dimensional Lie algebras given by structure constants."""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp
from pydantic import ValidationError

from src.errors import AntisymmetryViolation, JacobiViolation, LieAlgebraError, ParseError, UnknownAlgebra
from src.liealg.sympoly import SymPoly
from src.models import LieAlgebraFile
from src.types import BUILTIN_ALGEBRAS

logger = logging.getLogger(__name__)

StructureEntry = Tuple[int, int, int, Fraction]
StructureInput = Union[Mapping[Tuple[int, int], Mapping[int, object]], Iterable[Tuple[int, int, int, object]]]


@dataclass(frozen=True)
class LieAlgebra:
    """Lie algebra of dimension ``dim`` with [x_i, x_j] = sum_k f_ij^k x_k.

    Only entries with i < j are stored, sorted; the rest follow by antisymmetry.
    Build instances through ``make_lie_algebra`` so that Jacobi is checked.
    """
    dim: int
    structure: Tuple[StructureEntry, ...]
    name: str = ""
    basis: Tuple[str, ...] = ()

    @cached_property
    def table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        out: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for i, j, k, c in self.structure:
            out.setdefault((i, j), {})[k] = c
            out.setdefault((j, i), {})[k] = -c
        return out

    def bracket_of_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.table.get((i, j), {})

    def constant(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket_of_basis(i, j).get(k, Fraction(0))

    @property
    def label(self) -> str:
        return self.name or f"lie{self.dim}"

    def bracket(self, x: Sequence, y: Sequence) -> list:
        """Bracket of two coordinate vectors; entries may be numbers or SymPoly."""
        zero = x[0] * 0
        out = [zero] * self.dim
        for i, j, k, c in self.structure:
            out[k] = out[k] + (x[i] * y[j] - x[j] * y[i]) * c
        return out

    def scaled(self, t: Fraction) -> "LieAlgebra":
        """Same basis with structure constants multiplied by t."""
        t = Fraction(t)
        entries = tuple((i, j, k, c * t) for i, j, k, c in self.structure if c * t != 0)
        return LieAlgebra(self.dim, entries, f"{self.label}*{t}", self.basis)


def _entries(structure: StructureInput) -> Iterable[Tuple[int, int, int, Fraction]]:
    if isinstance(structure, Mapping):
        for (i, j), coeffs in structure.items():
            for k, c in coeffs.items():
                yield int(i), int(j), int(k), Fraction(c)
    else:
        for i, j, k, c in structure:
            yield int(i), int(j), int(k), Fraction(c)


def _jacobi_cycle(table: Dict[Tuple[int, int], Dict[int, Fraction]], dim: int, i: int, j: int, k: int):
    cycle = [Fraction(0)] * dim
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        for m, f_bcm in table.get((b, c), {}).items():
            for l, f_aml in table.get((a, m), {}).items():
                cycle[l] += f_bcm * f_aml
    return cycle


def make_lie_algebra(
    dim: int,
    structure: StructureInput,
    name: str = "",
    basis: Optional[Sequence[str]] = None,
) -> LieAlgebra:
    """Validate a structure-constant table and build the algebra.

    Entries may be given for (i, j) or (j, i); both orientations of one pair
    must agree up to sign, and (i, i) entries must vanish.

    Raises:
        AntisymmetryViolation: inconsistent or diagonal entries.
        JacobiViolation: the Jacobi identity fails; carries (i, j, k, l).
    """
    if dim < 1:
        raise LieAlgebraError(f"dimension must be positive, got {dim}")
    normalised: Dict[Tuple[int, int, int], Fraction] = {}
    for i, j, k, c in _entries(structure):
        if not all(0 <= index < dim for index in (i, j, k)):
            raise LieAlgebraError(f"index out of range in entry ({i}, {j}, {k}) for dimension {dim}")
        if i == j:
            if c != 0:
                raise AntisymmetryViolation(i, j, k)
            continue
        key, value = ((i, j, k), c) if i < j else ((j, i, k), -c)
        if key in normalised and normalised[key] != value:
            raise AntisymmetryViolation(i, j, k)
        normalised[key] = value
    entries = tuple(sorted((i, j, k, c) for (i, j, k), c in normalised.items() if c != 0))
    algebra = LieAlgebra(dim, entries, name, tuple(basis) if basis else tuple(f"x{i}" for i in range(dim)))
    table = algebra.table
    for i, j, k in combinations(range(dim), 3):
        cycle = _jacobi_cycle(table, dim, i, j, k)
        for l, value in enumerate(cycle):
            if value != 0:
                raise JacobiViolation((i, j, k, l), value)
    logger.debug("built Lie algebra %s of dimension %d with %d constants", algebra.label, dim, len(entries))
    return algebra


def abelian(dim: int) -> LieAlgebra:
    return make_lie_algebra(dim, {}, name=f"abelian{dim}")


def builtin_lie_algebra(name: str) -> LieAlgebra:
    """heis3, aff1, sl2, gl2 or abelian<d> (``abelian`` alone is d = 3)."""
    if name in BUILTIN_ALGEBRAS:
        labels, brackets = BUILTIN_ALGEBRAS[name]
        return make_lie_algebra(len(labels), brackets, name=name, basis=labels)
    match = re.fullmatch(r"abelian(\d*)", name)
    if match:
        return abelian(int(match.group(1) or 3))
    raise UnknownAlgebra(f"no built-in Lie algebra called {name!r}")


def lie_algebra_from_dict(data: Union[Mapping, LieAlgebraFile], name: str = "") -> LieAlgebra:
    if not isinstance(data, LieAlgebraFile):
        try:
            data = LieAlgebraFile.model_validate(data)
        except ValidationError as exc:
            raise ParseError(f"malformed Lie algebra description: {exc}") from exc
    return make_lie_algebra(data.dim, data.structure(), name=name, basis=data.basis)


def load_lie_algebra(source: str) -> LieAlgebra:
    """Resolve builtin:NAME (or a bare built-in name) or read a JSON description from a path."""
    if source.startswith("builtin:"):
        return builtin_lie_algebra(source[len("builtin:"):])
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise UnknownAlgebra(f"Lie algebra file {source!r} does not exist")
        try:
            description = LieAlgebraFile.model_validate_json(path.read_text())
        except ValidationError as exc:
            raise ParseError(f"{source}: {exc}") from exc
        return lie_algebra_from_dict(description, name=path.stem)
    return builtin_lie_algebra(source)


def _format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def dump_lie_algebra(g: LieAlgebra) -> dict:
    grouped: Dict[Tuple[int, int], Dict[str, str]] = {}
    for i, j, k, c in g.structure:
        grouped.setdefault((i, j), {})[str(k)] = _format_fraction(c)
    return {
        "dim": g.dim,
        "basis": list(g.basis),
        "brackets": [{"i": i, "j": j, "coeffs": coeffs} for (i, j), coeffs in sorted(grouped.items())],
    }


def ad_matrix_entries(g: LieAlgebra, x: Sequence) -> list:
    """(ad x)_{kj} = sum_i x_i f_ij^k as nested lists; entries follow the type of x."""
    zero = x[0] * 0 if len(x) else 0
    matrix = [[zero for _ in range(g.dim)] for _ in range(g.dim)]
    for i, j, k, c in g.structure:
        matrix[k][j] = matrix[k][j] + x[i] * c
        matrix[k][i] = matrix[k][i] - x[j] * c
    return matrix


def ad_matrix(g: LieAlgebra, x: Sequence) -> sp.Matrix:
    """Exact adjoint matrix of a rational coordinate vector."""
    if len(x) != g.dim:
        raise ValueError(f"vector has {len(x)} entries, algebra has dimension {g.dim}")
    exact = [Fraction(v) for v in x]
    entries = ad_matrix_entries(g, exact)
    return sp.Matrix(g.dim, g.dim, lambda r, c: sp.Rational(entries[r][c].numerator, entries[r][c].denominator))


def ad_matrix_numeric(g: LieAlgebra, x: Sequence[float]) -> np.ndarray:
    matrix = np.zeros((g.dim, g.dim))
    for i, j, k, c in g.structure:
        matrix[k, j] += float(c) * x[i]
        matrix[k, i] -= float(c) * x[j]
    return matrix


def poisson_bracket(g: LieAlgebra, f1: SymPoly, f2: SymPoly) -> SymPoly:
    """Kirillov-Kostant bracket {f1, f2} = sum f_ij^k x_k d_i f1 d_j f2 on the first dim variables."""
    if f1.nvars != f2.nvars or f1.nvars < g.dim:
        raise ValueError("both polynomials need the algebra's coordinates")
    n = f1.nvars
    total = SymPoly.zero(n)
    for i, j, k, c in g.structure:
        cross = f1.derivative(i) * f2.derivative(j) - f1.derivative(j) * f2.derivative(i)
        if not cross.is_zero():
            total = total + (SymPoly.variable(k, n) * cross).scale(c)
    return total
