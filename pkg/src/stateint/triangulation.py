"""Triangulated pseudo 3-manifolds with shapes, levels, gauge moves and 3-2 moves.

Tetrahedra have ordered vertices 0..3. Face i is the face opposite vertex i and
face gluings are the unique vertex-order-preserving maps, so a gluing is just a
pair of (tet, face) slots. Angles are stored in units of pi per opposite-edge
pair, in the order (01|23, 02|13, 03|12).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from pathlib import Path
from typing import Iterable, Mapping, Sequence

EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
# opposite-edge pair index of each vertex pair: 01|23 -> 0, 02|13 -> 1, 03|12 -> 2
PAIR_OF = {(0, 1): 0, (2, 3): 0, (0, 2): 1, (1, 3): 1, (0, 3): 2, (1, 2): 2}
PAIR_EDGES = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


class GluingError(ValueError):
    pass


class OrientationError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class MoveError(ValueError):
    pass


def face_vertices(face: int) -> tuple[int, int, int]:
    return tuple(v for v in range(4) if v != face)


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)

    def classes(self) -> list[list]:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return sorted((sorted(v) for v in out.values()), key=lambda c: c[0])


# ---------------------------------------------------------------------------
# gluing data


@dataclass(frozen=True)
class TetGluingSpec:
    """Tetrahedron count plus face gluings as (tet, face, to_tet, to_face)."""

    tet_count: int
    gluings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        seen: dict[tuple[int, int], tuple[int, int]] = {}
        canon = set()
        for g in self.gluings:
            t, f, u, h = g
            if not (0 <= t < self.tet_count and 0 <= u < self.tet_count and 0 <= f < 4 and 0 <= h < 4):
                raise GluingError(f"gluing {g} out of range")
            if (t, f) == (u, h):
                raise GluingError(f"face {(t, f)} glued to itself")
            for a, b in (((t, f), (u, h)), ((u, h), (t, f))):
                if a in seen and seen[a] != b:
                    raise GluingError(f"face {a} glued twice")
                seen[a] = b
            canon.add(min((t, f, u, h), (u, h, t, f)))
        object.__setattr__(self, "gluings", tuple(sorted(canon)))

    def partner(self) -> dict[tuple[int, int], tuple[int, int]]:
        out = {}
        for t, f, u, h in self.gluings:
            out[(t, f)] = (u, h)
            out[(u, h)] = (t, f)
        return out

    @staticmethod
    def vertex_map(face: int, to_face: int) -> dict[int, int]:
        """Order-preserving map from the vertices of `face` to those of `to_face`."""
        return dict(zip(face_vertices(face), face_vertices(to_face)))


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class PseudoManifold:
    spec: TetGluingSpec
    signs: tuple[int, ...]
    edge_classes: tuple[tuple[tuple[int, tuple[int, int]], ...], ...]
    face_classes: tuple[tuple[tuple[int, int], ...], ...]
    vertex_classes: tuple[tuple[tuple[int, int], ...], ...]
    boundary_faces: tuple[tuple[int, int], ...]

    @property
    def tet_count(self) -> int:
        return self.spec.tet_count

    def face_sign(self, tet: int, face: int) -> int:
        return (-1) ** face * self.signs[tet]

    def boundary_split(self) -> tuple[list, list]:
        plus = [f for f in self.boundary_faces if self.face_sign(*f) > 0]
        minus = [f for f in self.boundary_faces if self.face_sign(*f) < 0]
        return plus, minus

    def edge_index(self, tet: int, edge: tuple[int, int]) -> int:
        return self._edge_lookup()[(tet, tuple(sorted(edge)))]

    def _edge_lookup(self) -> dict:
        cache = self.__dict__.get("_lookup")
        if cache is None:
            cache = {slot: k for k, cls in enumerate(self.edge_classes) for slot in cls}
            object.__setattr__(self, "_lookup", cache)
        return cache

    def boundary_edges(self) -> set[int]:
        out = set()
        for t, f in self.boundary_faces:
            for e in combinations(face_vertices(f), 2):
                out.add(self.edge_index(t, e))
        return out

    def interior_edges(self) -> list[int]:
        bnd = self.boundary_edges()
        return [k for k in range(len(self.edge_classes)) if k not in bnd]

    def counts(self) -> dict[str, int]:
        return {"vertices": len(self.vertex_classes), "edges": len(self.edge_classes),
                "faces": len(self.face_classes), "tetrahedra": self.tet_count,
                "boundary_faces": len(self.boundary_faces)}


def build_complex(spec: TetGluingSpec, orientations: Sequence[int]) -> PseudoManifold:
    """Cell classes of the quotient complex, with orientation validation."""
    signs = tuple(int(s) for s in orientations)
    if len(signs) != spec.tet_count or any(s not in (1, -1) for s in signs):
        raise OrientationError("need one orientation sign (+1/-1) per tetrahedron")
    for t, f, u, h in spec.gluings:
        if (-1) ** f * signs[t] == (-1) ** h * signs[u]:
            raise OrientationError(f"faces {(t, f)} and {(u, h)} have equal signs; gluing is not orientation reversing")
    tets = range(spec.tet_count)
    edges = _UnionFind((t, e) for t in tets for e in EDGES)
    verts = _UnionFind((t, v) for t in tets for v in range(4))
    for t, f, u, h in spec.gluings:
        vm = TetGluingSpec.vertex_map(f, h)
        for v, w in vm.items():
            verts.union((t, v), (u, w))
        for v1, v2 in combinations(face_vertices(f), 2):
            edges.union((t, (v1, v2)), (u, tuple(sorted((vm[v1], vm[v2])))))
    partner = spec.partner()
    faces, bnd = [], []
    for t in tets:
        for f in range(4):
            p = partner.get((t, f))
            if p is None:
                faces.append(((t, f),))
                bnd.append((t, f))
            elif (t, f) < p:
                faces.append(((t, f), p))
    pm = PseudoManifold(spec, signs, tuple(tuple(c) for c in edges.classes()), tuple(faces),
                        tuple(tuple(c) for c in verts.classes()), tuple(bnd))
    plus, minus = pm.boundary_split()
    if len(plus) != len(minus):
        raise OrientationError(f"boundary split {len(plus)} vs {len(minus)} is unbalanced")
    return pm


# ---------------------------------------------------------------------------
# shapes


def _as_number(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class LeveledShape:
    """Angles in units of pi per tetrahedron and pair, plus the level."""

    angles: tuple[tuple, ...]
    level: Fraction | float = Fraction(0)
    generalized: bool = False

    def __post_init__(self):
        angles = tuple(tuple(_as_number(a) for a in tri) for tri in self.angles)
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "level", _as_number(self.level))
        for k, tri in enumerate(angles):
            if len(tri) != 3:
                raise ShapeError(f"tetrahedron {k} needs 3 angles")
            total = sum(tri)
            if all(isinstance(a, Fraction) for a in tri):
                if total != 1:
                    raise ShapeError(f"angles of tetrahedron {k} sum to {total} pi, not pi")
            elif abs(float(total) - 1.0) > 1e-12:
                raise ShapeError(f"angles of tetrahedron {k} sum to {float(total)} pi, not pi")
            if not self.generalized and any(a <= 0 for a in tri):
                raise ShapeError(f"tetrahedron {k} has a non-positive angle")

    @classmethod
    def from_charges(cls, charges: Sequence[Sequence], level=Fraction(0), generalized=False) -> "LeveledShape":
        """Charges (a, b, c) are angles over 2 pi."""
        return cls(tuple(tuple(2 * _as_number(x) for x in tri) for tri in charges), level, generalized)

    def charges(self) -> list[tuple]:
        return [tuple(a / 2 for a in tri) for tri in self.angles]

    def radians(self) -> list[tuple[float, float, float]]:
        import math
        return [tuple(float(a) * math.pi for a in tri) for tri in self.angles]

    def angle(self, tet: int, edge: tuple[int, int]):
        return self.angles[tet][PAIR_OF[tuple(sorted(edge))]]

    def is_positive(self) -> bool:
        return all(a > 0 for tri in self.angles for a in tri)


def _check_dims(X: PseudoManifold, s: LeveledShape):
    if len(s.angles) != X.tet_count:
        raise ShapeError(f"shape has {len(s.angles)} tetrahedra, complex has {X.tet_count}")


def weights(X: PseudoManifold, s: LeveledShape) -> list:
    """Edge weights in units of pi, indexed like X.edge_classes."""
    _check_dims(X, s)
    return [sum((s.angle(t, e) for t, e in cls), Fraction(0)) for cls in X.edge_classes]


def balanced_edges(X: PseudoManifold, s: LeveledShape, tol: float = 1e-12) -> list[bool]:
    out = []
    for w in weights(X, s):
        out.append(w == 2 if isinstance(w, Fraction) else abs(float(w) - 2) <= tol)
    return out


def pair_epsilon(sign: int, p: int, q: int) -> int:
    """Cyclic order (01|23) -> (02|13) -> (03|12) for positive tetrahedra."""
    d = (q - p) % 3
    return 0 if d == 0 else (sign if d == 1 else -sign)


def epsilon_pair(X: PseudoManifold, slot_a: tuple[int, tuple[int, int]], slot_b: tuple[int, tuple[int, int]]) -> int:
    """epsilon of two edge (or pair) slots; a slot is (tet, vertex pair)."""
    (ta, ea), (tb, eb) = slot_a, slot_b
    if ta != tb:
        return 0
    pa = ea if isinstance(ea, int) else PAIR_OF[tuple(sorted(ea))]
    pb = eb if isinstance(eb, int) else PAIR_OF[tuple(sorted(eb))]
    return pair_epsilon(X.signs[ta], pa, pb)


def _gauge_dict(X: PseudoManifold, g) -> dict[int, object]:
    if isinstance(g, Mapping):
        gd = {int(k): _as_number(v) for k, v in g.items()}
    else:
        gd = {k: _as_number(v) for k, v in enumerate(g)}
    for k in gd:
        if not 0 <= k < len(X.edge_classes):
            raise ShapeError(f"unknown edge class {k}")
    bad = [k for k in X.boundary_edges() if gd.get(k, 0) != 0]
    if bad:
        raise ShapeError(f"gauge must vanish on boundary edges, nonzero on {bad}")
    return gd


def apply_gauge(X: PseudoManifold, s: LeveledShape, g) -> LeveledShape:
    """Gauge transformation by g: edge class -> real (angles in units of pi)."""
    _check_dims(X, s)
    gd = _gauge_dict(X, g)
    new = [list(tri) for tri in s.angles]
    level = s.level
    for t in range(X.tet_count):
        for e in EDGES:
            ge = gd.get(X.edge_index(t, e), 0)
            if ge == 0:
                continue
            q = PAIR_OF[e]
            for p in range(3):
                new[t][p] += pair_epsilon(X.signs[t], p, q) * ge
            level += ge * (Fraction(1, 3) - s.angles[t][q])
    return LeveledShape(tuple(tuple(tri) for tri in new), level, generalized=True)


def level_shift_oracle(X: PseudoManifold, s: LeveledShape, g) -> object:
    """Level change of a gauge move by direct summation over edge classes."""
    gd = _gauge_dict(X, g)
    total = Fraction(0)
    for k, cls in enumerate(X.edge_classes):
        inner = sum((Fraction(1, 3) - s.angle(t, e) for t, e in cls), Fraction(0))
        total += gd.get(k, 0) * inner
    return total


# ---------------------------------------------------------------------------
# 3-2 Pachner move


@dataclass(frozen=True)
class PachnerResult:
    complex: PseudoManifold
    shape: LeveledShape
    new_tets: tuple[int, int]
    edge_map: dict
    angle_map: dict


def pachner32(X: PseudoManifold, s: LeveledShape, e: int, strict: bool = True) -> PachnerResult:
    """Replace the three tetrahedra around the balanced edge class e by two."""
    _check_dims(X, s)
    cls = X.edge_classes[e]
    tets = [t for t, _ in cls]
    if len(cls) != 3 or len(set(tets)) != 3:
        raise MoveError(f"edge {e} is not shared by exactly 3 distinct tetrahedra")
    if e in X.boundary_edges():
        raise MoveError(f"edge {e} is a boundary edge")
    if not balanced_edges(X, s)[e]:
        raise MoveError(f"edge {e} is not balanced")
    partner = X.spec.partner()
    local = {t: edge for t, edge in cls}

    # global vertex labels: P, Q, then one label R per internal triangle around e
    gl: dict[tuple[int, int], str] = {}
    for t in tets:
        p, q = local[t]
        gl[(t, p)], gl[(t, q)] = "P", "Q"
    # walk around the edge to name the third vertices of the internal faces
    counter = 0
    for t in tets:
        p, q = local[t]
        for r in (v for v in range(4) if v not in (p, q)):
            if (t, r) in gl:
                continue
            counter += 1
            name = f"R{counter}"
            gl[(t, r)] = name
            # the face opposite the other off-edge vertex contains r
            other = next(v for v in range(4) if v not in (p, q, r))
            u, h = partner[(t, other)]
            if u not in local:
                raise MoveError("internal face around the edge is not glued to another tetrahedron of the star")
            vm = TetGluingSpec.vertex_map(other, h)
            gl[(u, vm[r])] = name
    if counter != 3:
        raise MoveError("star of the edge is not a triangulated 3-ball")
    rs = ("R1", "R2", "R3")

    # one order on {P, Q, R1, R2, R3} compatible with all old local orders
    before = {v: set() for v in ("P", "Q", *rs)}
    for t in tets:
        names = [gl[(t, v)] for v in range(4)]
        for i, j in combinations(range(4), 2):
            before[names[j]].add(names[i])
    order = _toposort(before)
    rank = {v: k for k, v in enumerate(order)}

    # angles at PR_j and QR_j from the old tetrahedra
    src_p: dict[str, list] = {r: [] for r in rs}
    src_q: dict[str, list] = {r: [] for r in rs}
    for t in tets:
        inv = {gl[(t, v)]: v for v in range(4)}
        for r in rs:
            if r in inv:
                src_p[r].append((t, PAIR_OF[tuple(sorted((inv["P"], inv[r])))]))
                src_q[r].append((t, PAIR_OF[tuple(sorted((inv["Q"], inv[r])))]))

    keep = [t for t in range(X.tet_count) if t not in tets]
    renum = {t: k for k, t in enumerate(keep)}
    t4, t5 = len(keep), len(keep) + 1
    verts4 = sorted(("P", *rs), key=rank.get)
    verts5 = sorted(("Q", *rs), key=rank.get)

    # angle map: (new tet, pair) -> old (tet, pair) slots summed
    angle_map: dict[tuple[int, int], tuple] = {}
    for t in keep:
        for p in range(3):
            angle_map[(renum[t], p)] = ((t, p),)
    for nt, verts, apex, src in ((t4, verts4, "P", src_p), (t5, verts5, "Q", src_q)):
        for i, j in combinations(range(4), 2):
            if apex in (verts[i], verts[j]):
                r = verts[j] if verts[i] == apex else verts[i]
                angle_map[(nt, PAIR_OF[(i, j)])] = tuple(src[r])

    def new_angles(nt):
        return tuple(sum((s.angles[t][p] for t, p in angle_map[(nt, q)]), 0) for q in range(3))

    a4, a5 = new_angles(t4), new_angles(t5)
    if strict and any(x <= 0 for x in (*a4, *a5)):
        raise MoveError("3-2 move produces a non-positive angle")

    # old outer faces -> new faces
    face_map: dict[tuple[int, int], tuple[int, int]] = {}
    for t in tets:
        names = [gl[(t, v)] for v in range(4)]
        for f in range(4):
            if names[f] == "Q":
                face_map[(t, f)] = (t4, verts4.index(next(r for r in rs if r not in names)))
            elif names[f] == "P":
                face_map[(t, f)] = (t5, verts5.index(next(r for r in rs if r not in names)))

    gluings = []
    for t, f, u, h in X.spec.gluings:
        a = face_map.get((t, f), (renum.get(t), f))
        b = face_map.get((u, h), (renum.get(u), h))
        if a[0] is None or b[0] is None:
            continue
        gluings.append((*a, *b))
    gluings.append((t4, verts4.index("P"), t5, verts5.index("Q")))

    # orientation of the new tetrahedra from the face signs of the old outer faces
    signs = [X.signs[t] for t in keep] + [0, 0]
    for (t, f), (nt, nf) in face_map.items():
        want = X.face_sign(t, f) * (-1) ** nf
        if signs[nt] == 0:
            signs[nt] = want
        elif signs[nt] != want:
            raise MoveError("vertex orders around the edge are not compatible with a 3-2 move")
    spec = TetGluingSpec(t4 + 2, tuple(gluings))
    Y = build_complex(spec, signs)

    # level: l' = l + (1/12 pi) sum_{a over e} sum_b eps(p(a), p(b)) alpha(b)
    shift = 0
    for t, edge in cls:
        pa = PAIR_OF[edge]
        for q in range(3):
            shift += 2 * pair_epsilon(X.signs[t], pa, q) * s.angles[t][q]
    level = s.level + shift / 12
    new_shape = LeveledShape(tuple(s.angles[t] for t in keep) + (a4, a5), level, generalized=not strict)

    # surviving edge classes of X -> edge classes of Y
    emap = {}
    for k, c in enumerate(X.edge_classes):
        if k == e:
            continue
        t, edge = c[0]
        if t in renum:
            emap[k] = Y.edge_index(renum[t], edge)
            continue
        # edge lies in the star: locate it through the global names
        n1, n2 = gl[(t, edge[0])], gl[(t, edge[1])]
        verts = verts4 if "Q" not in (n1, n2) else verts5
        nt = t4 if "Q" not in (n1, n2) else t5
        emap[k] = Y.edge_index(nt, (verts.index(n1), verts.index(n2)))
    return PachnerResult(Y, new_shape, (t4, t5), emap, angle_map)


def _toposort(before: dict[str, set]) -> list[str]:
    out, left = [], dict(before)
    while left:
        ready = sorted(v for v, deps in left.items() if not (deps & set(left)))
        if not ready:
            raise MoveError("vertex orders around the edge are cyclic; no compatible order")
        out.append(ready[0])
        del left[ready[0]]
    return out


# ---------------------------------------------------------------------------
# admissibility via the truncated-cell model


def smith_normal_form(mat: list[list[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix."""
    a = [list(map(int, row)) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    r = 0
    while r < m and r < n:
        piv = None
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best):
                    best, piv = abs(a[i][j]), (i, j)
        if piv is None:
            break
        i, j = piv
        a[r], a[i] = a[i], a[r]
        for row in a:
            row[r], row[j] = row[j], row[r]
        while True:
            done = True
            p = a[r][r]
            for i in range(r + 1, m):
                if a[i][r]:
                    qt = a[i][r] // p
                    a[i] = [x - qt * y for x, y in zip(a[i], a[r])]
                    if a[i][r]:
                        done = False
            for j in range(r + 1, n):
                if a[r][j]:
                    qt = a[r][j] // p
                    for row in a:
                        row[j] -= qt * row[r]
                    if a[r][j]:
                        done = False
            if done:
                # divisibility of the remaining block
                bad = next(((i, j) for i in range(r + 1, m) for j in range(r + 1, n) if a[i][j] % p), None)
                if bad is None:
                    break
                a[r] = [x + y for x, y in zip(a[r], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column r to the pivot
            cand = [(abs(a[i][r]), i, r) for i in range(r, m) if a[i][r]] + \
                   [(abs(a[r][j]), r, j) for j in range(r, n) if a[r][j]]
            _, i, j = min(cand)
            a[r], a[i] = a[i], a[r]
            for row in a:
                row[r], row[j] = row[j], row[r]
        diag.append(abs(a[r][r]))
        r += 1
    return diag


@dataclass(frozen=True)
class HomologyReport:
    free_rank: int
    torsion: tuple[int, ...]
    cell_counts: tuple[int, int, int, int]

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def describe(self) -> str:
        parts = ([f"Z^{self.free_rank}"] if self.free_rank else []) + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _truncated_cells(X: PseudoManifold):
    """Identified points (t, i, j), long edges (t, (i, j)) and short edges
    (t, i, j, k) of the truncated tetrahedra."""
    partner = X.spec.partner()
    pts = _UnionFind((t, i, j) for t in range(X.tet_count) for i in range(4) for j in range(4) if i != j)
    longs = _UnionFind((t, e) for t in range(X.tet_count) for e in EDGES)
    shorts = _UnionFind((t, i, j, k) for t in range(X.tet_count) for i in range(4)
                        for j, k in combinations([v for v in range(4) if v != i], 2))
    for (t, f), (u, h) in partner.items():
        vm = TetGluingSpec.vertex_map(f, h)
        fv = face_vertices(f)
        for i in fv:
            for j in fv:
                if i != j:
                    pts.union((t, i, j), (u, vm[i], vm[j]))
        for i, j in combinations(fv, 2):
            longs.union((t, (i, j)), (u, (vm[i], vm[j])))
        for i in fv:
            j, k = (v for v in fv if v != i)
            shorts.union((t, i, j, k), (u, vm[i], vm[j], vm[k]))
    return pts, longs, shorts


def _truncated_chain(X: PseudoManifold, corner_signs: tuple[int, ...] | None = None):
    """Boundary matrices of the quotient of truncated tetrahedra."""
    pts, longs, shorts = _truncated_cells(X)
    p_idx = {x: k for k, cls in enumerate(pts.classes()) for x in cls}
    l_idx = {x: k for k, cls in enumerate(longs.classes()) for x in cls}
    nl = len(longs.classes())
    s_idx = {x: nl + k for k, cls in enumerate(shorts.classes()) for x in cls}
    n0, n1 = len(pts.classes()), nl + len(shorts.classes())

    # 2-cells: hexagons (one per face class) then corner triangles
    hexes: dict[tuple[int, int], int] = {}
    for k, fc in enumerate(X.face_classes):
        for slot in fc:
            hexes[slot] = k
    nh = len(X.face_classes)
    corner = {(t, i): nh + 4 * t + i for t in range(X.tet_count) for i in range(4)}
    n2 = nh + 4 * X.tet_count

    d1 = [[0] * n1 for _ in range(n0)]
    for cls in longs.classes():
        t, (i, j) = cls[0]
        k = l_idx[cls[0]]
        d1[p_idx[(t, j, i)]][k] += 1
        d1[p_idx[(t, i, j)]][k] -= 1
    for cls in shorts.classes():
        t, i, j, k = cls[0]
        c = s_idx[cls[0]]
        d1[p_idx[(t, i, k)]][c] += 1
        d1[p_idx[(t, i, j)]][c] -= 1

    def hex_boundary(t, m):
        u, v, w = face_vertices(m)
        return ((l_idx[(t, (u, v))], 1), (l_idx[(t, (v, w))], 1), (l_idx[(t, (u, w))], -1),
                (s_idx[(t, v, u, w)], 1), (s_idx[(t, w, u, v)], -1), (s_idx[(t, u, v, w)], -1))

    def corner_boundary(t, i):
        j, k, l = (v for v in range(4) if v != i)
        return ((s_idx[(t, i, j, k)], 1), (s_idx[(t, i, k, l)], 1), (s_idx[(t, i, j, l)], -1))

    d2 = [[0] * n2 for _ in range(n1)]
    for fc_k, fc in enumerate(X.face_classes):
        for r, v in hex_boundary(*fc[0]):
            d2[r][fc_k] += v
    for (t, i), c in corner.items():
        for r, v in corner_boundary(t, i):
            d2[r][c] += v

    d3 = [[0] * X.tet_count for _ in range(n2)]
    signs = corner_signs if corner_signs is not None else _corner_signs()
    for t in range(X.tet_count):
        for m in range(4):
            d3[hexes[(t, m)]][t] += (-1) ** m
            d3[corner[(t, m)]][t] += signs[m]
    return d1, d2, d3, (n0, n1, n2, X.tet_count)


@lru_cache(maxsize=None)
def _corner_signs() -> tuple[int, ...]:
    """Corner-triangle coefficients in the boundary of a truncated tetrahedron
    making d2 d3 = 0 (solved once on a single tetrahedron)."""
    single = build_complex(TetGluingSpec(1, ()), (1,))
    for cand in product((1, -1), repeat=4):
        _, d2, d3, _ = _truncated_chain(single, cand)
        if all(sum(d2[r][k] * d3[k][0] for k in range(len(d3))) == 0 for r in range(len(d2))):
            return cand
    raise RuntimeError("no consistent corner orientation")


def homology_h2(X: PseudoManifold) -> HomologyReport:
    """H_2 of the complex with its vertices removed."""
    d1, d2, d3, counts = _truncated_chain(X)
    n2 = counts[2]
    rank2 = len(smith_normal_form(d2)) if d2 and d2[0] else 0
    sn3 = smith_normal_form(d3)
    free = n2 - rank2 - len(sn3)
    torsion = tuple(x for x in sn3 if x > 1)
    return HomologyReport(free, torsion, counts)


def admissible(X: PseudoManifold) -> bool:
    return homology_h2(X).trivial


def link_euler_characteristics(X: PseudoManifold) -> list[int]:
    """Euler characteristic of the link of each vertex class, in the order of
    X.vertex_classes."""
    pts, _, shorts = _truncated_cells(X)
    vidx = {slot: k for k, cls in enumerate(X.vertex_classes) for slot in cls}
    chi = [0] * len(X.vertex_classes)
    for cls in pts.classes():
        t, i, _ = cls[0]
        chi[vidx[(t, i)]] += 1
    for cls in shorts.classes():
        t, i, _, _ = cls[0]
        chi[vidx[(t, i)]] -= 1
    for t in range(X.tet_count):
        for i in range(4):
            chi[vidx[(t, i)]] += 1
    return chi


# ---------------------------------------------------------------------------
# file format and fixtures


def _fmt_number(x) -> str | float:
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def to_json(X: PseudoManifold, s: LeveledShape | None = None) -> str:
    doc = {"tetrahedra": X.tet_count,
           "gluings": [{"tet": t, "face": f, "to_tet": u, "to_face": h} for t, f, u, h in X.spec.gluings],
           "orientations": list(X.signs)}
    if s is not None:
        doc["angles"] = [[_fmt_number(a) for a in tri] for tri in s.angles]
        doc["level"] = _fmt_number(s.level)
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def from_json(text: str) -> tuple[PseudoManifold, LeveledShape | None]:
    doc = json.loads(text)
    try:
        n = int(doc["tetrahedra"])
        gl = tuple((int(g["tet"]), int(g["face"]), int(g["to_tet"]), int(g["to_face"])) for g in doc["gluings"])
        orient = doc["orientations"]
    except (KeyError, TypeError) as exc:
        raise GluingError(f"malformed triangulation file: {exc}") from exc
    X = build_complex(TetGluingSpec(n, gl), orient)
    s = None
    if "angles" in doc:
        s = LeveledShape(tuple(tuple(doc["angles"][k]) for k in range(n)), doc.get("level", 0),
                         generalized=bool(doc.get("generalized", False)))
        _check_dims(X, s)
    return X, s


def load(path: str | Path) -> tuple[PseudoManifold, LeveledShape | None]:
    return from_json(Path(path).read_text())


_FIXTURES: dict[str, tuple[int, tuple, tuple]] = {
    "3_1_complement": (2, tuple((0, i, 1, 3 - i) for i in range(4)), (1, 1)),
    "h31": (1, ((0, 0, 0, 3), (0, 1, 0, 2)), (1,)),
    "one_tet_one_face": (1, ((0, 0, 0, 1),), (1,)),
    "4_1_complement": (2, ((0, 0, 1, 2), (0, 1, 1, 3), (0, 2, 1, 0), (0, 3, 1, 1)), (1, -1)),
    "5_2_complement": (3, ((0, 0, 2, 3), (0, 2, 1, 3), (0, 1, 2, 2), (0, 3, 1, 0), (1, 2, 2, 1), (1, 1, 2, 0)),
                       (1, 1, 1)),
    "h41": (3, ((0, 0, 0, 1), (0, 2, 1, 1), (0, 3, 2, 3), (1, 0, 2, 2), (1, 2, 2, 0), (1, 3, 2, 1)), (1, 1, -1)),
    "h52": (4, ((0, 0, 0, 1), (0, 3, 1, 3), (0, 2, 2, 0), (1, 0, 3, 3), (1, 2, 2, 3), (1, 1, 3, 2),
                (2, 2, 3, 1), (2, 1, 3, 0)), (-1, 1, 1, 1)),
    # closed one-vertex complex with spherical vertex link, H_1 = H_2 = Z
    "s2xs1_fixture": (3, ((0, 0, 1, 1), (0, 1, 1, 2), (0, 2, 2, 0), (0, 3, 1, 0), (1, 3, 2, 3), (2, 1, 2, 2)),
                      (1, 1, -1)),
}


def fixture_names() -> list[str]:
    return sorted(_FIXTURES) + ["sp_3_ordered", "sp_n"]


def fixture(name: str, n: int = 3) -> PseudoManifold:
    if name == "sp_3_ordered":
        return simplex_star()
    if name == "sp_n" or name.startswith("sp_"):
        if name != "sp_n":
            n = int(name[3:])
        return sp_n(n)
    if name not in _FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    count, gl, signs = _FIXTURES[name]
    return build_complex(TetGluingSpec(count, gl), signs)


def sp_n(n: int) -> PseudoManifold:
    """Suspension of an n-gon: n positive tetrahedra around the edge v2v3,
    face 1 of tetrahedron j glued to face 0 of tetrahedron j+1."""
    if n < 3:
        raise ValueError("sp_n needs n >= 3")
    gl = tuple((j, 1, (j + 1) % n, 0) for j in range(n))
    return build_complex(TetGluingSpec(n, gl), (1,) * n)


def sp_n_central_edge(X: PseudoManifold) -> int:
    return X.edge_index(0, (2, 3))


def simplex_star(omit: Sequence[int] = (0, 2, 4)) -> PseudoManifold:
    """Three faces of an ordered 4-simplex glued along their common faces.

    The default (faces 0, 2, 4) is the suspension of a triangle around the
    edge {1, 3} with vertex orders induced from 0 < 1 < 2 < 3 < 4, the setting
    in which a 3-2 move keeps every gluing order-preserving.
    """
    omit = tuple(sorted(omit))
    if len(omit) != 3 or not set(omit) <= set(range(5)):
        raise ValueError("choose three of the five faces of the 4-simplex")
    verts = [tuple(v for v in range(5) if v != k) for k in omit]
    gl = []
    for x, y in combinations(range(3), 2):
        shared = set(verts[x]) & set(verts[y])
        fx = next(i for i, v in enumerate(verts[x]) if v not in shared)
        fy = next(i for i, v in enumerate(verts[y]) if v not in shared)
        gl.append((x, fx, y, fy))
    signs = tuple((-1) ** k for k in omit)
    return build_complex(TetGluingSpec(3, tuple(gl)), signs)


def simplex_star_edge(X: PseudoManifold) -> int:
    """The edge shared by all three tetrahedra of `simplex_star`."""
    common = set(range(len(X.edge_classes)))
    for t in range(3):
        common &= {X.edge_index(t, e) for e in EDGES}
    (e,) = common
    return e
