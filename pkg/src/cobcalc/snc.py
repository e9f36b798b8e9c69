"""Fundamental classes of strict normal crossing divisors.

For ``E = n_1 E_1 + ... + n_m E_m`` the multi-sum
``F^{n_1..n_m}(u_1..u_m) = [n_1]u_1 +_F ... +_F [n_m]u_m`` is split by
the exact set ``J`` of variables occurring in each monomial:

    F^{n..} = sum_J (prod_{i in J} u_i) * G_J(u_i : i in J)

and ``G_J`` evaluated at the restricted first Chern classes contributes
on the face ``E^J`` (the intersection of the components in ``J``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from . import bmodel as B
from .errors import (
    InconsistentLatticeError,
    UnsupportedConfigurationError,
)
from .fgl import FormalGroupLaw
from .series import TruncatedSeries


def component_names(m: int) -> tuple[str, ...]:
    return tuple(f"u{i}" for i in range(1, m + 1))


def support_decomposition(law: FormalGroupLaw, mults: Sequence[int]) -> dict[tuple[int, ...], TruncatedSeries]:
    """Map each nonempty support ``J`` (1-based, sorted) to ``G_J``."""
    mults = list(mults)
    if not mults:
        raise ValueError("at least one component is required")
    names = component_names(len(mults))
    total = law.multi_sum(mults, names)
    groups: dict[tuple[int, ...], dict] = {}
    for exps, c in total.terms.items():
        J = tuple(i + 1 for i, e in enumerate(exps) if e)
        if not J:
            # the constant term of a multi-sum is zero
            raise ValueError("multi-sum has a constant term")
        reduced = tuple(exps[i - 1] - 1 for i in J)
        groups.setdefault(J, {})[reduced] = c
    out = {}
    for J in sorted(groups, key=lambda j: (len(j), j)):
        out[J] = TruncatedSeries(
            law.ring, tuple(names[i - 1] for i in J), law.order - len(J), groups[J]
        )
    return out


def reassemble(parts: Mapping[tuple[int, ...], TruncatedSeries], m: int, order: int) -> TruncatedSeries:
    """Inverse of :func:`support_decomposition` (for testing the split)."""
    names = component_names(m)
    acc = None
    for J, g in parts.items():
        ring = g.ring
        if acc is None:
            acc = TruncatedSeries.zero(ring, names, order)
        terms = {}
        for exps, c in g.terms.items():
            full = [0] * m
            for i, e in zip(J, exps):
                full[i - 1] = e + 1
            terms[tuple(full)] = c
        acc = acc + TruncatedSeries(ring, names, order, terms)
    return acc


@dataclass
class Face:
    J: tuple[int, ...]
    dim: int
    space: B.CellSpace | None = None
    restrictions: dict[int, str] = field(default_factory=dict)


@dataclass
class SNCDivisor:
    ambient: B.CellSpace
    components: list[tuple[str, int]]
    faces: dict[tuple[int, ...], Face]
    generic: bool = False

    def __post_init__(self):
        self.validate()

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def theory(self) -> B.OrientedTheory:
        return self.ambient.theory

    def validate(self):
        if not self.components:
            raise InconsistentLatticeError("a divisor needs at least one component")
        for sym, mult in self.components:
            if int(mult) < 1:
                raise InconsistentLatticeError(f"multiplicity of {sym} must be >= 1")
            self.ambient.c1(sym)
        for J, face in self.faces.items():
            if not J or any(not 1 <= i <= self.m for i in J) or tuple(sorted(set(J))) != J:
                raise InconsistentLatticeError(f"bad face index {list(J)}")
            if not 0 <= face.dim < self.ambient.dim:
                raise InconsistentLatticeError(f"face {list(J)} has dimension {face.dim}")
            for k in range(1, len(J)):
                for sub in combinations(J, k):
                    if sub not in self.faces:
                        raise InconsistentLatticeError(
                            f"face {list(J)} is present but {list(sub)} is not"
                        )
                    if self.faces[sub].dim <= face.dim:
                        raise InconsistentLatticeError(
                            f"face dimension must drop from {list(sub)} to {list(J)}"
                        )

    # constructors ----------------------------------------------------
    @classmethod
    def hyperplanes(cls, pn: B.CellSpace, mults: Sequence[int], bundle: str = "O(1)") -> SNCDivisor:
        """Components in general position on ``P^n``; face ``J`` is ``P^{n-|J|}``."""
        if pn.recipe[0] != "pn":
            raise UnsupportedConfigurationError("generic faces are defined on projective spaces only")
        n = pn.dim
        m = len(mults)
        faces = {}
        for k in range(1, min(m, n) + 1):
            for J in combinations(range(1, m + 1), k):
                faces[J] = Face(J, n - k, B.projective_space(n - k, pn.theory), {i: bundle for i in J})
        return cls(pn, [(bundle, int(x)) for x in mults], faces, generic=True)

    @classmethod
    def from_json(cls, data: Mapping, theory: B.OrientedTheory) -> SNCDivisor:
        amb = data.get("ambient", {})
        if amb.get("type") != "Pn":
            raise UnsupportedConfigurationError(f"unsupported ambient {amb!r}")
        pn = B.projective_space(int(amb["n"]), theory)
        comps = [(c.get("bundle", "O(1)"), int(c.get("mult", 1))) for c in data["components"]]
        faces_spec = data.get("faces", "generic")
        if faces_spec == "generic":
            bundles = {b for b, _ in comps}
            if len(bundles) != 1:
                raise UnsupportedConfigurationError("generic faces need a single bundle for all components")
            return cls.hyperplanes(pn, [m for _, m in comps], bundles.pop())
        if not isinstance(faces_spec, list):
            raise InconsistentLatticeError("faces must be 'generic' or a list")
        faces = {}
        for f in faces_spec:
            J = tuple(sorted(int(i) for i in f["J"]))
            dim = int(f["dim"])
            restr = {int(k): v for k, v in f.get("restrict", {}).items()}
            for i in J:
                if 1 <= i <= len(comps):
                    restr.setdefault(i, comps[i - 1][0])
            space = B.projective_space(dim, theory) if dim >= 0 else None
            faces[J] = Face(J, dim, space, restr)
        return cls(pn, comps, faces, generic=False)

    def to_json(self) -> dict:
        return {
            "ambient": {"type": "Pn", "n": self.ambient.dim},
            "components": [{"bundle": b, "mult": m} for b, m in self.components],
            "faces": "generic" if self.generic else [
                {"J": list(J), "dim": f.dim, "restrict": {str(i): s for i, s in f.restrictions.items()}}
                for J, f in self.faces.items()
            ],
        }

    def relabel(self, perm: Sequence[int]) -> SNCDivisor:
        """Component ``i`` becomes component ``perm[i-1]`` (1-based)."""
        comps = [None] * self.m
        for i, c in enumerate(self.components):
            comps[perm[i] - 1] = c
        faces = {}
        for J, f in self.faces.items():
            J2 = tuple(sorted(perm[i - 1] for i in J))
            faces[J2] = Face(J2, f.dim, f.space, {perm[i - 1]: s for i, s in f.restrictions.items()})
        return SNCDivisor(self.ambient, comps, faces, self.generic)


@dataclass
class FaceTerm:
    J: tuple[int, ...]
    dim: int
    operator: TruncatedSeries
    cls: B.BordismClass | None

    def to_json(self) -> dict:
        out = {"J": list(self.J), "dim": self.dim, "operator": str(self.operator)}
        if self.cls is not None:
            out["class"] = self.cls.to_json()
        return out


@dataclass
class SNCClass:
    divisor: SNCDivisor
    terms: list[FaceTerm]

    def __getitem__(self, J) -> FaceTerm:
        J = tuple(J)
        for t in self.terms:
            if t.J == J:
                return t
        raise KeyError(J)

    def to_json(self) -> dict:
        return {"faces": [t.to_json() for t in self.terms]}


def snc_class(E: SNCDivisor) -> SNCClass:
    """Per-face summands of the fundamental class of ``E``."""
    law = E.theory.law
    parts = support_decomposition(law, [m for _, m in E.components])
    terms = []
    for J, g in parts.items():
        face = E.faces.get(J)
        if face is None:
            continue
        op = g.truncate(min(g.order, face.dim))
        cls = None
        if face.space is not None:
            space = face.space
            mats = [space.c1(face.restrictions[i]) for i in J]
            cls = B.eval_series(op, mats)(space.unit())
        terms.append(FaceTerm(J, face.dim, op, cls))
    return SNCClass(E, terms)


def pushforward_to_ambient(E: SNCDivisor) -> B.BordismClass:
    """Push every face summand into the ambient projective space."""
    if not E.generic or any(b != "O(1)" for b, _ in E.components):
        raise UnsupportedConfigurationError(
            "push-forward is implemented for generic hyperplane configurations only"
        )
    pn = E.ambient
    total = B.BordismClass(pn, [pn.theory.ring.polys.zero] * len(pn.cells))
    for term in snc_class(E).terms:
        emb = B.linear_embedding(term.cls.space, pn)
        total = total + B.push_forward(emb, term.cls)
    return total

