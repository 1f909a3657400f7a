"""Randomized harness for the bivariant axioms B1-B7 and Behrend-subgroup closure.

An instance is a small dictionary of named maps, functions and Behrend data.
Checks rebuild every derived object (composites, fiber squares, lattices)
from those names, so a serialized instance replays exactly.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor

from . import behrend as bh
from . import bivariant as bv
from . import codec
from . import randomgen as rg
from .cellspace import CellMap, CellSpace, compose_maps, fiber_product
from .constructible import ConstructibleFunction
from .rng import Lcg64

AXIOMS = ("B1", "B2", "B3", "B4", "B5", "B6", "B7")
CLOSURE = ("BEH-product", "BEH-pushforward", "BEH-pullback")
KINDS = AXIOMS + CLOSURE
_MASK = (1 << 64) - 1


def _E(f, value):
    return bv.BivariantElement(f, value)


def _compare(lhs, rhs) -> str | None:
    if not bv.same_assign(lhs.morphism, rhs.morphism):
        return "the two sides live over different morphisms"
    if lhs.value != rhs.value:
        return f"lhs {dict(lhs.value.items())} != rhs {dict(rhs.value.items())}"
    return None


# ---------------------------------------------------------------- generators

def _gen_chain3(rng, inst):
    f, g, h = rg.random_chain(rng, 3)
    inst["maps"].update(f=f, g=g, h=h)
    return f, g, h


def gen_B1(rng):
    inst = {"maps": {}, "functions": {}, "behrend": {}}
    f, g, h = _gen_chain3(rng, inst)
    inst["functions"].update(a=rg.random_cf(rng, f.source), b=rg.random_cf(rng, g.source), c=rg.random_cf(rng, h.source))
    return inst


def gen_B2(rng):
    inst = {"maps": {}, "functions": {}, "behrend": {}}
    f, _, _ = _gen_chain3(rng, inst)
    inst["functions"]["a"] = rg.random_cf(rng, f.source)
    return inst


def gen_B3(rng):
    y = rg.random_space(rng, "Y")
    f = rg.random_space_over(rng, y, "X")
    kind = rng.choice(["inclusion", "smooth"])
    g = rg.random_base_change(rng, y, "Yp", kind)
    h = rg.random_base_change(rng, g.source, "Ypp", kind)
    return {"maps": {"f": f, "g": g, "h": h}, "functions": {"a": rg.random_cf(rng, f.source)}, "behrend": {}}


def gen_B4(rng):
    inst = {"maps": {}, "functions": {}, "behrend": {}}
    f, g, h = _gen_chain3(rng, inst)
    inst["functions"].update(a=rg.random_cf(rng, f.source), b=rg.random_cf(rng, h.source))
    return inst


def _gen_two_and_change(rng):
    f, h = rg.random_chain(rng, 2)
    g = rg.random_base_change(rng, h.target, "Zp")
    return {"maps": {"f": f, "h": h, "g": g}, "functions": {}, "behrend": {}}


def gen_B5(rng):
    inst = _gen_two_and_change(rng)
    m = inst["maps"]
    inst["functions"].update(a=rg.random_cf(rng, m["f"].source), b=rg.random_cf(rng, m["h"].source))
    return inst


def gen_B6(rng):
    inst = _gen_two_and_change(rng)
    inst["functions"]["a"] = rg.random_cf(rng, inst["maps"]["f"].source)
    return inst


def gen_B7(rng):
    f, h = rg.random_chain(rng, 2)
    g = rg.random_base_change(rng, f.target, "Yp")
    return {
        "maps": {"f": f, "h": h, "g": g},
        "functions": {"a": rg.random_cf(rng, f.source), "b": rg.random_cf(rng, g.source)},
        "behrend": {},
    }


def _random_member(rng, lattice: bv.GeneratorLattice) -> ConstructibleFunction:
    return lattice.recombine({c: rng.integer(-3, 3) for c in lattice.columns})


def gen_BEH_product(rng, locally_closed=False):
    f, g = rg.random_chain(rng, 2)
    ny, nz = rg.random_behrend(rng, f.target), rg.random_behrend(rng, g.target)
    a = _random_member(rng, bv.beh_subgroup(f, ny, locally_closed))
    b = _random_member(rng, bv.beh_subgroup(g, nz, locally_closed))
    return {"maps": {"f": f, "g": g}, "functions": {"a": a, "b": b}, "behrend": {"nuY": ny, "nuZ": nz}}


def gen_BEH_pushforward(rng, locally_closed=False):
    f, g = rg.random_chain(rng, 2)
    nz = rg.random_behrend(rng, g.target)
    a = _random_member(rng, bv.beh_subgroup(compose_maps(f, g), nz, locally_closed))
    return {"maps": {"f": f, "g": g}, "functions": {"a": a}, "behrend": {"nuZ": nz}}


def gen_BEH_pullback(rng, locally_closed=False):
    y = rg.random_space(rng, "Y")
    f = rg.random_space_over(rng, y, "X")
    g = rg.random_smooth_over(rng, y, "Yp")
    ny = rg.random_behrend(rng, y)
    a = _random_member(rng, bv.beh_subgroup(f, ny, locally_closed))
    return {"maps": {"f": f, "g": g}, "functions": {"a": a}, "behrend": {"nuY": ny}}


# ---------------------------------------------------------------- checks

def check_B1(inst, locally_closed=False):
    m, fn = inst["maps"], inst["functions"]
    a, b, c = _E(m["f"], fn["a"]), _E(m["g"], fn["b"]), _E(m["h"], fn["c"])
    return _compare(bv.biv_product(bv.biv_product(a, b), c), bv.biv_product(a, bv.biv_product(b, c)))


def check_B2(inst, locally_closed=False):
    f, g, h = (inst["maps"][k] for k in "fgh")
    a = _E(compose_maps(compose_maps(f, g), h), inst["functions"]["a"])
    lhs = bv.biv_pushforward(compose_maps(f, g), a, h)
    rhs = bv.biv_pushforward(g, bv.biv_pushforward(f, a, compose_maps(g, h)), h)
    return _compare(lhs, rhs)


def check_B3(inst, locally_closed=False):
    f, g, h = (inst["maps"][k] for k in "fgh")
    a = _E(f, inst["functions"]["a"])
    sq1 = fiber_product(f, g)
    sq2 = fiber_product(sq1.f_prime, h)
    pairing = {w: (sq1.pairing[w1][0], y2) for w, (w1, y2) in sq2.pairing.items()}
    direct = fiber_product(f, compose_maps(h, g), corner=sq2.corner, pairing=pairing)
    lhs = bv.biv_pullback(sq2, bv.biv_pullback(sq1, a))
    rhs = bv.biv_pullback(direct, a)
    return _compare(lhs, rhs)


def check_B4(inst, locally_closed=False):
    f, g, h = (inst["maps"][k] for k in "fgh")
    a = _E(compose_maps(f, g), inst["functions"]["a"])
    b = _E(h, inst["functions"]["b"])
    lhs = bv.biv_pushforward(f, bv.biv_product(a, b), compose_maps(g, h))
    rhs = bv.biv_product(bv.biv_pushforward(f, a, g), b)
    return _compare(lhs, rhs)


def _stacked(f, h, g):
    """Squares for ``X -f-> Y -h-> Z`` pulled back along ``g: Z' -> Z``.

    Returns the square over ``h``, the square over ``f`` and the outer square
    over ``h . f`` sharing its corner with the one over ``f``.
    """
    sq_y = fiber_product(h, g)
    sq_x = fiber_product(f, sq_y.g_prime)
    pairing = {w: (e, sq_y.pairing[y2][1]) for w, (e, y2) in sq_x.pairing.items()}
    outer = fiber_product(compose_maps(f, h), g, corner=sq_x.corner, pairing=pairing)
    return sq_y, sq_x, outer


def check_B5(inst, locally_closed=False):
    f, h, g = (inst["maps"][k] for k in "fhg")
    sq_y, sq_x, outer = _stacked(f, h, g)
    a, b = _E(f, inst["functions"]["a"]), _E(h, inst["functions"]["b"])
    lhs = bv.biv_pullback(outer, bv.biv_product(a, b))
    rhs = bv.biv_product(bv.biv_pullback(sq_x, a), bv.biv_pullback(sq_y, b))
    return _compare(lhs, rhs)


def check_B6(inst, locally_closed=False):
    f, h, g = (inst["maps"][k] for k in "fhg")
    sq_y, sq_x, outer = _stacked(f, h, g)
    a = _E(compose_maps(f, h), inst["functions"]["a"])
    lhs = bv.biv_pullback(sq_y, bv.biv_pushforward(f, a, h))
    rhs = bv.biv_pushforward(sq_x.f_prime, bv.biv_pullback(outer, a), sq_y.f_prime)
    return _compare(lhs, rhs)


def check_B7(inst, locally_closed=False):
    f, h, g = (inst["maps"][k] for k in "fhg")
    sq = fiber_product(f, g)
    a, b = _E(f, inst["functions"]["a"]), _E(compose_maps(g, h), inst["functions"]["b"])
    pulled = bv.biv_pullback(sq, a)
    lhs = bv.biv_pushforward(sq.g_prime, bv.biv_product(pulled, b), compose_maps(f, h))
    rhs = bv.biv_product(a, bv.biv_pushforward(g, b, h))
    return _compare(lhs, rhs)


def _certified(lattice, alpha, label) -> str | None:
    result = bv.membership(lattice, alpha)
    if not bv.verify_certificate(lattice, alpha, result):
        return f"{label}: membership certificate does not verify"
    if not result.member:
        return f"{label}: not a member (stuck at cell {result.column}, pivot {result.pivot})"
    return None


def check_BEH_product(inst, locally_closed=False):
    f, g = inst["maps"]["f"], inst["maps"]["g"]
    ny, nz = inst["behrend"]["nuY"], inst["behrend"]["nuZ"]
    a, b = _E(f, inst["functions"]["a"]), _E(g, inst["functions"]["b"])
    return (
        _certified(bv.beh_subgroup(f, ny, locally_closed), a.value, "premise a")
        or _certified(bv.beh_subgroup(g, nz, locally_closed), b.value, "premise b")
        or _certified(bv.beh_subgroup(compose_maps(f, g), nz, locally_closed), bv.biv_product(a, b).value, "product")
    )


def check_BEH_pushforward(inst, locally_closed=False):
    f, g = inst["maps"]["f"], inst["maps"]["g"]
    nz = inst["behrend"]["nuZ"]
    gf = compose_maps(f, g)
    a = _E(gf, inst["functions"]["a"])
    return (
        _certified(bv.beh_subgroup(gf, nz, locally_closed), a.value, "premise a")
        or _certified(bv.beh_subgroup(g, nz, locally_closed), bv.biv_pushforward(f, a, g).value, "pushforward")
    )


def check_BEH_pullback(inst, locally_closed=False):
    f, g = inst["maps"]["f"], inst["maps"]["g"]
    ny = inst["behrend"]["nuY"]
    a = _E(f, inst["functions"]["a"])
    sq = fiber_product(f, g)
    ny_prime = bh.smooth_pullback_behrend(g, ny)
    pulled = bv.biv_pullback(sq, a, track_behrend=True)
    return (
        _certified(bv.beh_subgroup(f, ny, locally_closed), a.value, "premise a")
        or _certified(bv.beh_subgroup(sq.f_prime, ny_prime, locally_closed), pulled.value, "pullback")
    )


GENERATORS = {
    "B1": gen_B1, "B2": gen_B2, "B3": gen_B3, "B4": gen_B4, "B5": gen_B5, "B6": gen_B6, "B7": gen_B7,
    "BEH-product": gen_BEH_product, "BEH-pushforward": gen_BEH_pushforward, "BEH-pullback": gen_BEH_pullback,
}
CHECKS = {
    "B1": check_B1, "B2": check_B2, "B3": check_B3, "B4": check_B4, "B5": check_B5, "B6": check_B6, "B7": check_B7,
    "BEH-product": check_BEH_product, "BEH-pushforward": check_BEH_pushforward, "BEH-pullback": check_BEH_pullback,
}


# ---------------------------------------------------------------- (de)serialization

def instance_to_doc(inst) -> dict:
    spaces: dict[str, CellSpace] = {}

    def note(space):
        spaces.setdefault(space.name, space)

    for f in inst["maps"].values():
        note(f.source)
        note(f.target)
    for a in inst["functions"].values():
        note(a.space)
    for b in inst["behrend"].values():
        note(b.space)
    return {
        "spaces": [codec.save(s) for s in spaces.values()],
        "maps": {k: codec.save(f) for k, f in inst["maps"].items()},
        "functions": {k: codec.save(a) for k, a in inst["functions"].items()},
        "behrend": {k: codec.save(b) for k, b in inst["behrend"].items()},
    }


def instance_from_doc(doc) -> dict:
    registry: dict[str, CellSpace] = {}
    codec.load_bundle(doc["spaces"], registry)
    return {
        "maps": {k: codec.load(d, registry, ("maps", k)) for k, d in doc["maps"].items()},
        "functions": {k: codec.load(d, registry, ("functions", k)) for k, d in doc["functions"].items()},
        "behrend": {k: codec.load(d, registry, ("behrend", k)) for k, d in doc.get("behrend", {}).items()},
    }


# ---------------------------------------------------------------- runner

def instance_seed(seed: int, index: int) -> int:
    return (seed + index) & _MASK


def kind_for(index: int) -> str:
    return KINDS[index % len(KINDS)]


def generate(kind: str, seed: int, locally_closed: bool = False):
    rng = Lcg64(seed)
    gen = GENERATORS[kind]
    return gen(rng, locally_closed) if kind in CLOSURE else gen(rng)


def run_check(kind: str, inst, locally_closed: bool = False) -> str | None:
    try:
        return CHECKS[kind](inst, locally_closed)
    except Exception as exc:  # a crash inside a check is a counterexample too
        return f"{type(exc).__name__}: {exc}"


def _run_indices(args):
    seed, indices, locally_closed = args
    out = []
    for i in indices:
        kind, s = kind_for(i), instance_seed(seed, i)
        inst = generate(kind, s, locally_closed)
        detail = run_check(kind, inst, locally_closed)
        failure = None
        if detail is not None:
            failure = {"axiom": kind, "seed": s, "detail": detail, "instance": instance_to_doc(inst)}
        out.append((kind, s, failure))
    return out


def _report(results, locally_closed, elapsed) -> dict:
    by_axiom = {k: {"run": 0, "passed": 0} for k in KINDS}
    seeds, failures = [], []
    for kind, s, failure in results:
        by_axiom[kind]["run"] += 1
        seeds.append(s)
        if failure is None:
            by_axiom[kind]["passed"] += 1
        else:
            failures.append(failure)
    total = len(results)
    return {
        "schemaVersion": codec.SCHEMA_VERSION,
        "kind": "report",
        "checks": {
            "total": total,
            "passed": total - len(failures),
            "failed": len(failures),
            "byAxiom": {k: v for k, v in by_axiom.items() if v["run"]},
            "locallyClosedGenerators": locally_closed,
            "seconds": round(elapsed, 3),
        },
        "seeds": seeds,
        "failures": failures,
    }


def check_axioms(seed: int = 0, count: int = 1000, workers: int = 1, locally_closed: bool = False) -> dict:
    """Run ``count`` instances, cycling through the seven axioms and the three closure checks.

    Instance ``i`` uses seed ``seed + i`` and check ``KINDS[i % 10]``.
    """
    start = time.perf_counter()
    if workers <= 1:
        results = _run_indices((seed, range(count), locally_closed))
    else:
        chunks = [(seed, range(w, count, workers), locally_closed) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_indices, chunks))
        results = sorted((r for part in parts for r in part), key=lambda r: (r[1] - seed) & _MASK)
    return _report(results, locally_closed, time.perf_counter() - start)


def replay_report(report: dict) -> dict:
    """Re-run the stored counterexamples, or regenerate from the seeds if there are none."""
    locally_closed = bool(report.get("checks", {}).get("locallyClosedGenerators", False))
    start = time.perf_counter()
    results = []
    if report.get("failures"):
        for failure in report["failures"]:
            kind = failure["axiom"]
            inst = instance_from_doc(failure["instance"])
            detail = run_check(kind, inst, locally_closed)
            record = None
            if detail is not None:
                record = {"axiom": kind, "seed": failure["seed"], "detail": detail, "instance": failure["instance"]}
            results.append((kind, failure["seed"], record))
    else:
        seeds = report.get("seeds", [])
        if seeds:
            base = seeds[0]
            for s in seeds:
                results.extend(_run_indices((base, [(s - base) & _MASK], locally_closed)))
    return _report(results, locally_closed, time.perf_counter() - start)
