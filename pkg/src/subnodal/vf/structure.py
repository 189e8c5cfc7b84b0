"""Sub-Riemannian structures: frame + measure + domain, and the built-in examples."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .poly import Polynomial
from .fields import VectorField, divergence
from .parse import parse_vector_field, parse_polynomial, eval_numeric


@dataclass(frozen=True)
class AxisDomain:
    """One axis of the box domain.

    kind:
      - "dirichlet": open interval (lo, hi), zero boundary condition
      - "periodic": circle of circumference ``length`` starting at ``lo``
      - "twisted": periodic with an affine volume-preserving shear applied on
        wrap-around: crossing the seam shifts ``shear_target`` by
        ``shear_coeff * x_{shear_source}``.
    """

    kind: str
    lo: float = 0.0
    hi: float = 0.0
    length: float = 0.0
    shear_target: int | None = None
    shear_source: int | None = None
    shear_coeff: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "periodic", "twisted"):
            raise ValueError(f"unknown axis kind {self.kind!r}")
        if self.kind == "dirichlet" and not self.hi > self.lo:
            raise ValueError("dirichlet interval requires hi > lo")
        if self.kind in ("periodic", "twisted") and not self.length > 0:
            raise ValueError("periodic axis requires positive length")

    @property
    def extent(self) -> float:
        return self.hi - self.lo if self.kind == "dirichlet" else self.length


@dataclass(frozen=True)
class SRStructure:
    """(M, mu, X_1..X_m) restricted to a box domain with per-axis boundary kinds."""

    dimension: int
    fields: tuple[VectorField, ...]
    measure_density: Polynomial
    domain: tuple[AxisDomain, ...]
    name: str = "structure"

    def __post_init__(self):
        if any(X.dim != self.dimension for X in self.fields):
            raise ValueError("field dimension mismatch")
        if self.measure_density.dim != self.dimension:
            raise ValueError("measure density dimension mismatch")
        if len(self.domain) != self.dimension:
            raise ValueError("domain axis count mismatch")
        if self.measure_density.is_zero():
            raise ValueError("measure density must be strictly positive")

    @property
    def num_fields(self) -> int:
        return len(self.fields)

    def field_divergences(self) -> list[Polynomial]:
        return [divergence(X, self.measure_density) for X in self.fields]

    def coefficient_variables(self) -> set[int]:
        """Axes the frame coefficients actually depend on (used to batch grid work)."""
        used: set[int] = set()
        for X in self.fields:
            used |= X.variables_used()
        return used

    def to_text(self) -> str:
        lines = [f"dimension = {self.dimension}"]
        lines.append("fields = " + " ; ".join(X.format() for X in self.fields))
        lines.append(f"measure = {self.measure_density.format()}")
        for i, ax in enumerate(self.domain):
            name = _axis_name(i, self.dimension)
            if ax.kind == "dirichlet":
                lines.append(f"domain.{name} = dirichlet({ax.lo:.17g}, {ax.hi:.17g})")
            elif ax.kind == "periodic":
                lines.append(f"domain.{name} = periodic({ax.length:.17g})")
            else:
                tgt = _axis_name(ax.shear_target, self.dimension)
                src = _axis_name(ax.shear_source, self.dimension)
                lines.append(
                    f"domain.{name} = twisted({ax.length:.17g}, {tgt} += {ax.shear_coeff:.17g}*{src})"
                )
        return "\n".join(lines) + "\n"


def _axis_name(i: int, dim: int) -> str:
    from .poly import var_name

    return var_name(i, dim)


def _axis_index(name: str, dim: int) -> int:
    from .poly import VAR_NAMES_SHORT

    if name in VAR_NAMES_SHORT[:dim]:
        return VAR_NAMES_SHORT.index(name)
    if name.startswith("x") and name[1:].isdigit():
        idx = int(name[1:]) - 1
        if 0 <= idx < dim:
            return idx
    raise ValueError(f"unknown axis {name!r} for dimension {dim}")


def structure_from_text(text: str, name: str = "structure") -> SRStructure:
    """Parse the documented key = value structure format."""
    dim = None
    fields_text = None
    measure_text = "1"
    domain_entries: dict[int, AxisDomain] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "dimension":
            dim = int(value)
        elif key == "fields":
            fields_text = value
        elif key == "measure":
            measure_text = value
        elif key.startswith("domain."):
            if dim is None:
                raise ValueError(f"line {lineno}: dimension must come before domain entries")
            axis = _axis_index(key[len("domain."):], dim)
            domain_entries[axis] = _parse_axis(value, dim, lineno)
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if dim is None or fields_text is None:
        raise ValueError("structure file needs 'dimension' and 'fields'")
    fields = tuple(
        parse_vector_field(part.strip(), dim) for part in fields_text.split(";") if part.strip()
    )
    measure = parse_polynomial(measure_text, dim)
    domain = []
    for i in range(dim):
        if i not in domain_entries:
            raise ValueError(f"missing domain.{_axis_name(i, dim)}")
        domain.append(domain_entries[i])
    return SRStructure(dim, fields, measure, tuple(domain), name=name)


def _parse_axis(value: str, dim: int, lineno: int) -> AxisDomain:
    m = value.strip()
    if m.startswith("dirichlet(") and m.endswith(")"):
        lo, hi = (eval_numeric(s) for s in _split_args(m[len("dirichlet("):-1], 2, lineno))
        return AxisDomain("dirichlet", lo=lo, hi=hi)
    if m.startswith("periodic(") and m.endswith(")"):
        (length,) = (eval_numeric(s) for s in _split_args(m[len("periodic("):-1], 1, lineno))
        return AxisDomain("periodic", length=length)
    if m.startswith("twisted(") and m.endswith(")"):
        args = _split_args(m[len("twisted("):-1], 2, lineno)
        length = eval_numeric(args[0])
        shear = args[1]
        if "+=" not in shear:
            raise ValueError(f"line {lineno}: twisted shear must look like 'z += c*y'")
        tgt, _, rhs = shear.partition("+=")
        coeff_text, _, src = rhs.strip().rpartition("*")
        return AxisDomain(
            "twisted",
            length=length,
            shear_target=_axis_index(tgt.strip(), dim),
            shear_source=_axis_index(src.strip(), dim),
            shear_coeff=eval_numeric(coeff_text) if coeff_text else 1.0,
        )
    raise ValueError(f"line {lineno}: unknown domain spec {value!r}")


def _split_args(body: str, n: int, lineno: int) -> list[str]:
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != n:
        raise ValueError(f"line {lineno}: expected {n} arguments, got {len(parts)}")
    return parts


def structure_from_file(path, name: str | None = None) -> SRStructure:
    with open(path) as fh:
        text = fh.read()
    return structure_from_text(text, name=name or str(path))


# -- built-in example structures ----------------------------------------------


def grushin(alpha: int = 1) -> SRStructure:
    """Generalized Baouendi-Grushin structure on (-1,1) x circle(2*pi).

    Frame: d/dx and x^alpha d/dy; Lebesgue measure. Elliptic off {x=0}, where
    alpha iterated brackets of the first field recover d/dy.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    X1 = parse_vector_field("dx", 2)
    X2 = parse_vector_field(f"x^{alpha}*dy" if alpha > 1 else "x*dy", 2)
    domain = (
        AxisDomain("dirichlet", lo=-1.0, hi=1.0),
        AxisDomain("periodic", length=2 * math.pi),
    )
    return SRStructure(2, (X1, X2), Polynomial.constant(2, 1), domain, name=f"grushin(alpha={alpha})")


def heisenberg(closed: bool = False) -> SRStructure:
    """Heisenberg frame d/dx, d/dy - x d/dz on the standard quotient box.

    Default domain is the Dirichlet slab |x| < sqrt(pi/2) with periodic y
    (length sqrt(2*pi)) and z (length 2*pi); the lattice x-shear never
    activates there. ``closed=True`` instead marks x as twisted-periodic with
    the shear z += sqrt(2*pi)*y picked up on wrap-around (the full quotient).
    """
    X = parse_vector_field("dx", 3)
    Y = parse_vector_field("dy - x*dz", 3)
    half = math.sqrt(math.pi / 2)
    ly = math.sqrt(2 * math.pi)
    if closed:
        ax_x = AxisDomain(
            "twisted", length=2 * half, shear_target=2, shear_source=1, shear_coeff=ly
        )
    else:
        ax_x = AxisDomain("dirichlet", lo=-half, hi=half)
    domain = (
        ax_x,
        AxisDomain("periodic", length=ly),
        AxisDomain("periodic", length=2 * math.pi),
    )
    name = "heisenberg(closed)" if closed else "heisenberg"
    return SRStructure(3, (X, Y), Polynomial.constant(3, 1), domain, name=name)


def desingularize_grushin(alpha: int = 1) -> SRStructure:
    """Global desingularization of the Grushin family.

    Lifts d/dx, x^alpha d/dy on (x,y) to d/dx, d/dz + x^alpha d/dy on (x,y,z).
    The lift is bracket-generating and equiregular; forgetting z projects the
    lifted frame onto the original one.
    """
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    X1 = parse_vector_field("dx", 3)
    X2 = parse_vector_field(f"dz + x^{alpha}*dy" if alpha > 1 else "dz + x*dy", 3)
    domain = (
        AxisDomain("dirichlet", lo=-1.0, hi=1.0),
        AxisDomain("periodic", length=2 * math.pi),
        AxisDomain("periodic", length=2 * math.pi),
    )
    return SRStructure(
        3, (X1, X2), Polynomial.constant(3, 1), domain, name=f"grushin_lift(alpha={alpha})"
    )
