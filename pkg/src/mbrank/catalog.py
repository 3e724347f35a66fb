"""Ground-truth catalog: every named tensor and module, with expected flags.

Entries load from the shipped JSON fixtures (data/catalog.json, data/edges.json);
WORKBENCH_FIXTURES overrides the directory.  Flags are re-derivable and
self_check() recomputes all of them.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .apolar import module_from_dual_generators, parse_dual
from .exact import QQ, Matrix
from .modules import (
    FiniteModule,
    direct_sum_concise,
    dual_separation_evidence,
    from_e_space,
    fingerprint,
    self_dual_verdict,
    support_decomposition,
)
from .pencils import n7_module, n8_module
from .tensor import (
    GenericityPattern,
    MatrixForm,
    Tensor3,
    e_space,
    genericity_pattern,
    matrix_form_to_tensor,
    stabilizer_dimension,
    strassen_and_end_closed,
)


class UnknownEntryError(KeyError):
    pass


class CatalogInconsistencyError(AssertionError):
    pass


_GENERIC_CODES = {
    "S": (True, True, True),
    "AC": (True, False, True),
    "A": (True, False, False),
    "NONE": (False, False, False),
}


@dataclass
class CatalogEntry:
    name: str
    m: int
    form: MatrixForm
    generic: tuple  # expected 1-genericity flags (A, B, C)
    end_closed: bool
    minimal_border_rank: bool
    self_dual_module: bool | None
    iso_weight: int | None = None
    _tensor: Tensor3 | None = field(default=None, repr=False)

    @property
    def tensor(self) -> Tensor3:
        if self._tensor is None:
            self._tensor = matrix_form_to_tensor(self.form)
        return self._tensor

    @property
    def one_star_generic(self):
        return any(self.generic)

    @property
    def symmetrizable(self):
        if self.generic == (False, False, False):
            return self.iso_weight == 1
        return all(self.generic)

    @property
    def algebra_type(self):
        return sum(self.generic) == 2


def data_dir() -> Path:
    override = os.environ.get("WORKBENCH_FIXTURES")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _piece(kind: str) -> FiniteModule:
    if kind == "point":
        return FiniteModule([], m=1, field=QQ)
    if kind.startswith("jordan"):
        k = int(kind[len("jordan") :])
        shift = Matrix(QQ, [[1 if i == j + 1 else 0 for j in range(k)] for i in range(k)])
        acts = []
        power = shift
        for _ in range(k - 1):
            acts.append(power)
            power = power * shift
        return FiniteModule(acts, m=k, field=QQ)
    if kind == "fat2":
        return FiniteModule(
            [Matrix(QQ, [[0, 0, 0], [1, 0, 0], [0, 0, 0]]), Matrix(QQ, [[0, 0, 0], [0, 0, 0], [1, 0, 0]])],
            m=3,
        )
    if kind == "fat3":
        rows = lambda i: [[1 if (r, c) == (i, 0) else 0 for c in range(4)] for r in range(4)]
        return FiniteModule([Matrix(QQ, rows(1)), Matrix(QQ, rows(2)), Matrix(QQ, rows(3))], m=4)
    if kind == "cyc_x2_xy_y3":
        return FiniteModule(
            [
                Matrix(QQ, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
                Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0]]),
                Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]),
            ],
            m=4,
        )
    if kind == "cyc_x2_y2":
        return FiniteModule(
            [
                Matrix(QQ, [[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]),
                Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0]]),
                Matrix(QQ, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 0]]),
            ],
            m=4,
        )
    if kind == "n7":
        return n7_module()
    if kind == "n8":
        return n8_module()
    raise UnknownEntryError(f"unknown piece kind {kind!r}")


class Catalog:
    def __init__(self, root: Path | None = None):
        root = root or data_dir()
        raw = json.loads((root / "catalog.json").read_text())
        edges = json.loads((root / "edges.json").read_text())
        self.version = raw["version"]
        self.entries: dict[str, CatalogEntry] = {}
        for obj in raw["tensors"]:
            entry = CatalogEntry(
                name=obj["name"],
                m=obj["m"],
                form=MatrixForm.from_json(obj["form"]),
                generic=_GENERIC_CODES[obj["generic"]],
                end_closed=obj["end_closed"],
                minimal_border_rank=obj["minimal_border_rank"],
                self_dual_module=obj["self_dual_module"],
                iso_weight=obj.get("iso_weight"),
            )
            self.entries[entry.name] = entry
        self.module_presentations = {m["name"]: m for m in raw["modules"]}
        self.composites = raw["composites"]
        self.edges_m5 = [tuple(e) for e in edges["edges_m5"]]
        self.non_edges_m5 = [tuple(e) for e in edges["non_edges_m5"]]
        self.edges_m4 = [tuple(e) for e in edges["edges_m4"]]
        self._module_cache: dict[str, FiniteModule] = {}
        self._stab_cache: dict[str, int] = {}
        self._fp_cache: dict[str, object] = {}

    # -- entry access ------------------------------------------------------
    def get_entry(self, name: str) -> CatalogEntry:
        if name not in self.entries:
            raise UnknownEntryError(name)
        return self.entries[name]

    def list_entries(self, m: int | None = None, filter: str | None = None):
        out = []
        for e in self.entries.values():
            if m is not None and e.m != m:
                continue
            if filter == "minimal-border-rank" and not e.minimal_border_rank:
                continue
            if filter == "one-generic" and not e.one_star_generic:
                continue
            if filter == "one-degenerate" and e.one_star_generic:
                continue
            out.append(e)
        return out

    def tensor_of(self, name: str) -> Tensor3:
        return self.get_entry(name).tensor

    def canonical_module_name(self, name: str) -> str:
        if name.startswith("M_{") and "," not in name:
            idx = name[3:-1]
            return f"M_{{1,{idx}}}"
        return name

    def module_of(self, name: str) -> FiniteModule:
        """Module for a tensor or module name (display grids for tensors)."""
        name = self.canonical_module_name(name)
        if name in self._module_cache:
            return self._module_cache[name]
        mod = self._build_module(name)
        self._module_cache[name] = mod
        return mod

    def _build_module(self, name: str) -> FiniteModule:
        if name in self.entries:
            entry = self.entries[name]
            if not entry.generic[0]:
                raise UnknownEntryError(f"{name} is not 1_A-generic; no module attached")
            return from_e_space(e_space(entry.tensor))
        if name.startswith("M_{1,"):
            idx = name[len("M_{1,") : -1]
            return self.module_of(f"T_{{1,{idx}}}")
        if name in self.composites:
            kinds = self.composites[name]
            manual = any(k in ("n7", "n8") for k in kinds)
            return direct_sum_concise([_piece(k) for k in kinds], allow_manual=manual)
        pres = self.module_presentations.get(name)
        if pres is None:
            raise UnknownEntryError(name)
        if pres["kind"] == "apolar":
            nv = pres["nvars"]
            gens = [parse_dual(nv, 2, g) for g in pres["gens"]]
            return module_from_dual_generators(gens, nv)
        if pres["kind"] == "blocks22":
            acts = []
            for blk in pres["blocks"]:
                rows = [[Fraction(0)] * 4 for _ in range(4)]
                for i in range(2):
                    for j in range(2):
                        rows[2 + i][j] = Fraction(blk[i][j])
                acts.append(Matrix(QQ, rows))
            return FiniteModule(acts, m=4, field=QQ)
        raise UnknownEntryError(name)

    def module_names(self):
        names = [f"M_{{1,{i}}}" for i in range(1, 21)]
        names += list(self.composites)
        names += [n for n in self.module_presentations if n.startswith("M_")]
        return names

    # -- computed invariants -------------------------------------------------
    def stabilizer_dim(self, name: str) -> int:
        if name not in self._stab_cache:
            self._stab_cache[name] = stabilizer_dimension(self.tensor_of(name))
        return self._stab_cache[name]

    def pattern(self, name: str) -> GenericityPattern:
        return genericity_pattern(self.tensor_of(name))

    def fingerprint_of(self, name: str):
        key = self.canonical_module_name(name)
        if key not in self._fp_cache:
            self._fp_cache[key] = fingerprint(self.module_of(key))
        return self._fp_cache[key]

    def degree_decomposition(self, name: str):
        return support_decomposition(self.module_of(name)).degree_decomposition()

    def minimal_names(self, m: int):
        return [e.name for e in self.list_entries(m, "minimal-border-rank")]

    # -- self-check ------------------------------------------------------------
    def self_check(self, names=None):
        """Recompute every stored expectation; returns a list of failure strings."""
        failures = []
        for entry in self.entries.values():
            if names is not None and entry.name not in names:
                continue
            pat = self.pattern(entry.name)
            if not pat.concise:
                failures.append(f"{entry.name}: expected concise")
            if pat.generic_flags() != entry.generic:
                failures.append(
                    f"{entry.name}: genericity {pat.generic_flags()} != stored {entry.generic}"
                )
            if entry.generic[0]:
                es = e_space(entry.tensor)
                commutes, end_closed = strassen_and_end_closed(es)
                if not commutes:
                    failures.append(f"{entry.name}: commutation check failed")
                if end_closed != entry.end_closed:
                    failures.append(
                        f"{entry.name}: End-closure {end_closed} != stored {entry.end_closed}"
                    )
                mod = self.module_of(entry.name)
                sd = self_dual_verdict(mod)[0] == "yes"
                if sd != entry.self_dual_module:
                    failures.append(
                        f"{entry.name}: self-duality witness {sd} != stored {entry.self_dual_module}"
                    )
                if not entry.self_dual_module and dual_separation_evidence(mod) is None:
                    failures.append(f"{entry.name}: no separation evidence from the dual")
        return failures


@lru_cache(maxsize=1)
def load_catalog() -> Catalog:
    return Catalog()
