"""Fans: validation, completeness/smoothness predicates, a small catalog,
stellar subdivision and the one-skeleton."""
import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from math import gcd

from .errors import InputError
from .lattice import MAX_RANK, Cone, extreme_rays, is_primitive, pairing, smith_normal_form


@dataclass(frozen=True)
class Fan:
    """Primitive rays plus maximal cones given as sorted ray-index tuples.

    Construction normalises the data but does not validate it; use
    `validate` (or `Fan.from_json`, which refuses invalid fans).
    """

    rays: tuple
    max_cones: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        if not rays:
            raise InputError("fan has no rays")
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)

    @property
    def rank(self):
        return len(self.rays[0])

    @property
    def n_rays(self):
        return len(self.rays)

    def cone(self, index):
        return Cone(tuple(self.rays[i] for i in self.max_cones[index]))

    @cached_property
    def cones(self):
        return tuple(self.cone(i) for i in range(len(self.max_cones)))

    def to_json(self):
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, obj, name=""):
        try:
            rank = int(obj["rank"])
            rays = [[int(x) for x in r] for r in obj["rays"]]
            cones = [[int(i) for i in c] for c in obj["max_cones"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed fan JSON: {exc}") from exc
        if any(len(r) != rank for r in rays):
            raise InputError("ray length does not match rank")
        fan = cls(tuple(map(tuple, rays)), tuple(map(tuple, cones)), name=name)
        report = validate(fan)
        if not report.ok:
            raise InputError("invalid fan: " + "; ".join(report.violations))
        return fan

    def fingerprint(self):
        canon = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).hexdigest()


@dataclass
class FanReport:
    violations: list

    @property
    def ok(self):
        return not self.violations


def _intersection_is_common_face(sigma, tau, shared):
    """True iff sigma ∩ tau = cone(shared) and it is a face of both."""
    for c in (sigma, tau):
        if sorted(c.face_rays(shared)) != sorted(shared):
            return False
    n = sigma.ambient_rank
    meet = extreme_rays(
        sigma.facet_normals + tau.facet_normals, sigma.span_equations + tau.span_equations, n
    )
    for c in (sigma, tau):
        normals = [w for w in c.facet_normals if all(pairing(w, v) == 0 for v in shared)]
        if any(pairing(w, x) != 0 for x in meet for w in normals):
            return False
    return True


def validate(f):
    """Check every fan invariant; collect violations instead of raising."""
    out = []
    n = f.rank
    if n > MAX_RANK:
        out.append(f"rank {n} exceeds supported maximum {MAX_RANK}")
        return FanReport(out)
    for i, r in enumerate(f.rays):
        if len(r) != n:
            out.append(f"ray {i} has wrong length")
        elif not is_primitive(r):
            out.append(f"ray {i} {r} is not primitive")
    if len(set(f.rays)) != len(f.rays):
        out.append("duplicate rays")
    for k, c in enumerate(f.max_cones):
        if not c or any(i < 0 or i >= f.n_rays for i in c):
            out.append(f"cone {k} has bad ray indices {c}")
        elif len(set(c)) != len(c):
            out.append(f"cone {k} repeats a ray index")
    if out:
        return FanReport(out)
    used = {i for c in f.max_cones for i in c}
    for i in range(f.n_rays):
        if i not in used:
            out.append(f"ray {i} lies in no cone")
    for k, cone in enumerate(f.cones):
        out.extend(f"cone {k}: {msg}" for msg in cone.violations())
    if out:
        return FanReport(out)
    for (i, ci), (j, cj) in combinations(enumerate(f.max_cones), 2):
        shared = [f.rays[r] for r in sorted(set(ci) & set(cj))]
        if not _intersection_is_common_face(f.cones[i], f.cones[j], shared):
            out.append(f"intersection not a face: cones {i} and {j}")
    return FanReport(out)


@lru_cache(maxsize=None)
def is_complete(f):
    """Facet-pairing completeness test for fans with full-dimensional maximal cones."""
    facet_count = {}
    for k, cone in enumerate(f.cones):
        if cone.dim != f.rank:
            raise InputError(f"completeness not testable: cone {k} is not full-dimensional")
        idx = f.max_cones[k]
        for w in cone.facet_normals:
            facet = frozenset(i for i in idx if pairing(w, f.rays[i]) == 0)
            facet_count[facet] = facet_count.get(facet, 0) + 1
    return all(c == 2 for c in facet_count.values())


@lru_cache(maxsize=None)
def is_simplicial(f):
    return all(len(c) == cone.dim for c, cone in zip(f.max_cones, f.cones))


def cone_is_smooth(f, index):
    idx = f.max_cones[index]
    if len(idx) != f.cones[index].dim:
        return False
    divisors, _, _ = smith_normal_form([f.rays[i] for i in idx])
    return all(d == 1 for d in divisors)


@lru_cache(maxsize=None)
def is_smooth(f):
    return all(cone_is_smooth(f, k) for k in range(len(f.max_cones)))


def one_skeleton(f):
    """The fan of all one-dimensional cones (same rays)."""
    return Fan(f.rays, tuple((i,) for i in range(f.n_rays)), name=f"{f.name}_1skel" if f.name else "")


def stellar_subdivision(f, cone_index):
    """Star subdivision at a smooth maximal cone: the toric blow-up of its fixed point."""
    if not 0 <= cone_index < len(f.max_cones):
        raise InputError(f"no cone with index {cone_index}")
    if not cone_is_smooth(f, cone_index):
        raise InputError(f"cone {cone_index} is not smooth; only smooth cones can be blown up here")
    idx = f.max_cones[cone_index]
    new_ray = tuple(sum(f.rays[i][k] for i in idx) for k in range(f.rank))
    new_index = f.n_rays
    cones = [c for k, c in enumerate(f.max_cones) if k != cone_index]
    for drop in idx:
        cones.append(tuple(i for i in idx if i != drop) + (new_index,))
    name = f"bl({f.name})" if f.name else ""
    return Fan(f.rays + (new_ray,), tuple(cones), name=name)


# catalog -------------------------------------------------------------------

def _all_subsets_fan(rays, n, name):
    return Fan(tuple(rays), tuple(combinations(range(len(rays)), n)), name=name)


def projective_space(n):
    if not 1 <= n <= MAX_RANK:
        raise InputError(f"projective space dimension must be in 1..{MAX_RANK}")
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    return _all_subsets_fan(rays, n, f"P{n}")


def hirzebruch(a):
    if a < 0:
        raise InputError("Hirzebruch parameter must be >= 0")
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    return Fan(rays, ((0, 1), (1, 2), (2, 3), (0, 3)), name=f"F{a}")


def weighted_projective(*weights):
    """P(w_0, ..., w_n): rays v_1..v_n, v_0 with sum_i w_i v_i = 0.

    With w_0 = 1 the rays are e_1, ..., e_n, -(w_1, ..., w_n).
    """
    w = [int(x) for x in weights]
    n = len(w) - 1
    if not 1 <= n <= 3 or any(x <= 0 for x in w):
        raise InputError("weighted projective space needs 2..4 positive weights")
    for k in range(len(w)):
        g = 0
        for i, x in enumerate(w):
            if i != k:
                g = gcd(g, x)
        if g != 1:
            raise InputError(f"weights {w} are not well-formed (common factor {g})")
    if w[0] == 1:
        rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        rays.append(tuple(-x for x in w[1:]))
    else:
        # a unimodular u with u w = e_0 exhibits Z^{n+1}/Zw as the last n coordinates
        _, u, _ = smith_normal_form([[x] for x in w])
        img = [sum(u[0][j] * w[j] for j in range(n + 1))]
        if img[0] == -1:
            u = [[-x for x in row] for row in u]
        cols = [tuple(u[k][j] for k in range(1, n + 1)) for j in range(n + 1)]
        rays = cols[1:] + cols[:1]
    name = "P(" + ",".join(map(str, w)) + ")"
    return _all_subsets_fan(rays, n, name)


def product(f, g):
    zf, zg = (0,) * g.rank, (0,) * f.rank
    rays = tuple(r + zf for r in f.rays) + tuple(zg + r for r in g.rays)
    off = f.n_rays
    cones = tuple(c + tuple(i + off for i in d) for c in f.max_cones for d in g.max_cones)
    name = f"{f.name}x{g.name}" if f.name and g.name else ""
    return Fan(rays, cones, name=name)


def catalog(name, *params):
    """Catalog constructor by family name.

    Families: projective_space(n), product(f, g), hirzebruch(a),
    weighted_projective(w0, ..., wn). Every output is validated and complete.
    """
    builders = {
        "projective_space": projective_space,
        "product": product,
        "hirzebruch": hirzebruch,
        "weighted_projective": weighted_projective,
    }
    if name not in builders:
        raise InputError(f"unknown fan family {name!r}")
    fan = builders[name](*params)
    report = validate(fan)
    if not report.ok or not is_complete(fan):
        raise InputError(f"catalog produced a bad fan: {report.violations}")
    return fan


def _blowups(f, times):
    for _ in range(times):
        f = stellar_subdivision(f, 0)
    return f


NAMED_FANS = {
    "p1": lambda: projective_space(1),
    "p2": lambda: projective_space(2),
    "p3": lambda: projective_space(3),
    "p1xp1": lambda: product(projective_space(1), projective_space(1)),
    "f0": lambda: hirzebruch(0),
    "f1": lambda: hirzebruch(1),
    "f2": lambda: hirzebruch(2),
    "f3": lambda: hirzebruch(3),
    "p112": lambda: weighted_projective(1, 1, 2),
    "p113": lambda: weighted_projective(1, 1, 3),
    "bl1_p2": lambda: _blowups(projective_space(2), 1),
    "bl2_p2": lambda: _blowups(projective_space(2), 2),
}


def named_fan(name):
    """Catalog fan by short name (see NAMED_FANS)."""
    try:
        f = NAMED_FANS[name]()
    except KeyError:
        raise InputError(f"unknown catalog fan {name!r}; known: {', '.join(NAMED_FANS)}") from None
    return Fan(f.rays, f.max_cones, name=name)
