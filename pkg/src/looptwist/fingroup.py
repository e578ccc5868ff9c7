"""Finite groups as validated multiplication tables, elements being indices.

A group is a table ``table[g][h] = g*h`` on indices 0..n-1.  Identity and
inverses are discovered by scanning, so imported tables need not put the
identity at index 0.  Validation (identity, inverses, associativity on all
triples) happens once at construction; everything downstream may assume a
valid group.  Supported orders are capped at MAX_ORDER to keep the O(n^3)
associativity sweep instant.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

MAX_ORDER = 64


@dataclass(frozen=True)
class FiniteGroup:
    n: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    name: str = "G"

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def elements(self) -> range:
        return range(self.n)

    def conjugate(self, s: int, g: int) -> int:
        """s * g * s^-1."""
        return self.table[self.table[s][g]][self.inv[s]]

    def power(self, g: int, k: int) -> int:
        if k < 0:
            return self.power(self.inv[g], -k)
        acc = self.identity
        for _ in range(k):
            acc = self.table[acc][g]
        return acc

    def element_order(self, g: int) -> int:
        acc = g
        order = 1
        while acc != self.identity:
            acc = self.table[acc][g]
            order += 1
        return order

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(self.n))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.n})"


@dataclass(frozen=True)
class ConjugacyPartition:
    """Partition of the element indices into conjugacy classes.

    Classes are sorted internally and listed by least member, so the partition
    of a given group is canonical.
    """

    classes: tuple[tuple[int, ...], ...]

    def class_of(self, g: int) -> tuple[int, ...]:
        for cls in self.classes:
            if g in cls:
                return cls
        raise ValueError(f"element {g} not covered by the partition")

    def __len__(self) -> int:
        return len(self.classes)


def make_from_table(table, name: str = "G") -> FiniteGroup:
    """Validate a multiplication table and return the group it defines."""
    n = len(table)
    if n == 0:
        raise ValueError("group order must be positive")
    if n > MAX_ORDER:
        raise ValueError(f"group order {n} exceeds the supported maximum {MAX_ORDER}")
    rows = []
    for i, row in enumerate(table):
        row = tuple(int(x) for x in row)
        if len(row) != n:
            raise ValueError(f"table row {i} has length {len(row)}, expected {n}")
        for x in row:
            if not 0 <= x < n:
                raise ValueError(f"table entry {x} in row {i} out of range 0..{n - 1}")
        rows.append(row)
    tbl = tuple(rows)

    identity = None
    for e in range(n):
        if all(tbl[e][g] == g and tbl[g][e] == g for g in range(n)):
            identity = e
            break
    if identity is None:
        raise ValueError("no identity element found in the table")

    inv = []
    for g in range(n):
        found = None
        for h in range(n):
            if tbl[g][h] == identity and tbl[h][g] == identity:
                found = h
                break
        if found is None:
            raise ValueError(f"element {g} has no inverse")
        inv.append(found)

    for a in range(n):
        ta = tbl[a]
        for b in range(n):
            tab = tbl[ta[b]]
            tb = tbl[b]
            for c in range(n):
                if tab[c] != ta[tb[c]]:
                    raise ValueError(f"associativity fails at triple ({a}, {b}, {c})")

    return FiniteGroup(n=n, table=tbl, identity=identity, inv=tuple(inv), name=name)


def make_cyclic(n: int) -> FiniteGroup:
    """The cyclic group Z/n with table[i][j] = (i + j) mod n."""
    if n < 1:
        raise ValueError(f"cyclic group order must be at least 1, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return make_from_table(table, name=f"C{n}")


def make_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Direct product, pairs encoded as index a * |H| + b."""
    n = g1.n * g2.n
    if n > MAX_ORDER:
        raise ValueError(f"product order {n} exceeds the supported maximum {MAX_ORDER}")
    m = g2.n
    table = [
        [g1.table[a1][b1] * m + g2.table[a2][b2] for b1 in range(g1.n) for b2 in range(m)]
        for a1 in range(g1.n)
        for a2 in range(m)
    ]
    return make_from_table(table, name=f"{g1.name}x{g2.name}")


def conjugacy_classes(group: FiniteGroup) -> ConjugacyPartition:
    """Orbit partition of the elements under conjugation by the whole group."""
    seen = [False] * group.n
    classes = []
    for g in range(group.n):
        if seen[g]:
            continue
        orbit = sorted({group.conjugate(s, g) for s in range(group.n)})
        for x in orbit:
            seen[x] = True
        classes.append(tuple(orbit))
    return ConjugacyPartition(classes=tuple(classes))


def group_from_spec(spec: str, base_dir: Path | None = None) -> FiniteGroup:
    """Parse a group spec string: cyclic:<n>, product:<spec>x<spec>, table:<path>."""
    spec = spec.strip()
    if spec.startswith("cyclic:"):
        body = spec[len("cyclic:"):]
        try:
            n = int(body)
        except ValueError:
            raise ValueError(f"invalid cyclic order {body!r}") from None
        return make_cyclic(n)
    if spec.startswith("product:"):
        body = spec[len("product:"):]
        errors = []
        for idx, ch in enumerate(body):
            if ch != "x":
                continue
            left, right = body[:idx], body[idx + 1:]
            try:
                return make_product(
                    group_from_spec(left, base_dir), group_from_spec(right, base_dir)
                )
            except ValueError as exc:
                errors.append(str(exc))
        detail = f" ({errors[-1]})" if errors else ""
        raise ValueError(f"cannot split product spec {spec!r} into two group specs{detail}")
    if spec.startswith("table:"):
        path = Path(spec[len("table:"):])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            payload = json.loads(path.read_text())
        except OSError as exc:
            raise ValueError(f"cannot read group table file {path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed JSON in group table file {path}: {exc}") from None
        if not isinstance(payload, dict) or "table" not in payload:
            raise ValueError(f"group table file {path} must be an object with a 'table' key")
        return make_from_table(payload["table"], name=path.stem)
    raise ValueError(f"unrecognized group spec {spec!r}")
