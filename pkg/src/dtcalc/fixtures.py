"""Named cell models used throughout the tests and shipped as JSON documents."""

from .cellspace import Mode, point, validate_map, validate_space


def pt(mode=Mode.ALGEBRAIC):
    return point(mode)


def affine(d: int = 1):
    """One algebraic cell of dimension ``d``."""
    return validate_space(f"A{d}", Mode.ALGEBRAIC, [(f"a{d}", d)])


def a1():
    return validate_space("A1", Mode.ALGEBRAIC, [("a1", 1)])


def projective(m: int):
    """Chain ``a0 < a1 < ... < am``: the Schubert cells of projective m-space."""
    cells = [(f"a{i}", i) for i in range(m + 1)]
    return validate_space(f"P{m}", Mode.ALGEBRAIC, cells, [(f"a{i}", f"a{i + 1}") for i in range(m)])


def node():
    """Algebraic curve model ``x0 < e`` with a distinguished special point."""
    return validate_space("NODE", Mode.ALGEBRAIC, [("x0", 0), ("e", 1)], [("x0", "e")])


NODE_BEHREND = {"e": -1, "x0": -3}


def seg():
    return validate_space("SEG", Mode.TOPOLOGICAL, [("p", 0), ("q", 0), ("i", 1)], [("p", "i"), ("q", "i")])


def r1():
    return validate_space("R1", Mode.TOPOLOGICAL, [("r", 1)])


def circ():
    return validate_space("CIRC", Mode.TOPOLOGICAL, [("v", 0), ("e", 1)], [("v", "e")])


def dbl():
    """Connected double cover of :func:`circ`."""
    cells = [("v1", 0), ("v2", 0), ("e1", 1), ("e2", 1)]
    closure = [(v, e) for v in ("v1", "v2") for e in ("e1", "e2")]
    return validate_space("DBL", Mode.TOPOLOGICAL, cells, closure)


def dbl_cover():
    return validate_map(dbl(), circ(), {"v1": "v", "v2": "v", "e1": "e", "e2": "e"}, smooth=True)


def isolated_point(a0: int):
    """``NODE`` with twisted Behrend values ``1 + a0`` at ``x0`` and ``1`` elsewhere.

    Returns the space and the untwisted values (the space has dimension one).
    """
    return node(), {"e": -1, "x0": -(1 + a0)}


def all_spaces():
    """Every fixed fixture space, keyed by a short lowercase name."""
    return {
        "pt": pt(),
        "a1": a1(),
        "p1": projective(1),
        "p2": projective(2),
        "node": node(),
        "seg": seg(),
        "r1": r1(),
        "circ": circ(),
        "dbl": dbl(),
    }


def fixture_documents() -> dict:
    """The JSON documents shipped under ``fixtures/``, keyed by file name."""
    from .behrend import smooth_behrend, user_behrend
    from .codec import save

    docs = {f"{key}.space.json": save(space) for key, space in all_spaces().items()}
    docs["p2.behrend.json"] = save(smooth_behrend(projective(2)))
    docs["a1.behrend.json"] = save(smooth_behrend(a1()))
    docs["node.behrend.json"] = save(user_behrend(node(), NODE_BEHREND))
    docs["dbl.map.json"] = save(dbl_cover())
    return docs
