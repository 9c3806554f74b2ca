"""The named algebras used throughout the tests and the command line."""

from .algebra import Quiver, build_algebra
from .exactlinalg import parse_field

DEFAULT_CHAR = {"A1": 2, "A2": 3, "A3": 2, "A4": 2, "A5": 2, "PATH_A2": 2}


def dual_numbers(field=2):
    """k[x]/(x^2)."""
    return build_algebra(Quiver(["1"], [("x", "1", "1")]), ["x*x"], field, length_cap=4, name="A1")


def truncated_polynomial(n, field=3):
    """k[x]/(x^n)."""
    n = int(n)
    if n < 2:
        raise ValueError("need n >= 2")
    return build_algebra(Quiver(["1"], [("x", "1", "1")]), ["*".join(["x"] * n)], field,
                         length_cap=n + 2, name=f"A2({n})")


def exterior_plane(field=2):
    """k<x,y>/(x^2, y^2, xy + yx); the group algebra of a Klein four-group in char 2."""
    q = Quiver(["1"], [("x", "1", "1"), ("y", "1", "1")])
    return build_algebra(q, ["x*x", "y*y", "x*y + y*x"], field, length_cap=4, name="A3")


def radical_square_zero_local(n=2, field=2):
    """k<a1..an> modulo all paths of length 2."""
    n = int(n)
    labels = [f"a{i + 1}" for i in range(n)]
    q = Quiver(["1"], [(a, "1", "1") for a in labels])
    rels = [f"{a}*{b}" for a in labels for b in labels]
    return build_algebra(q, rels, field, length_cap=4, name=f"A4({n})")


def nakayama_two_cycle(field=2):
    """Quiver 1 -a-> 2 -b-> 1 with all paths of length 2 zero."""
    q = Quiver(["1", "2"], [("a", "1", "2"), ("b", "2", "1")])
    return build_algebra(q, ["a*b", "b*a"], field, length_cap=4, name="A5")


def path_algebra_a2(field=2):
    """Path algebra of 1 -> 2."""
    return build_algebra(Quiver(["1", "2"], [("a", "1", "2")]), [], field, length_cap=4, name="PATH_A2")


def fixture(name, field=None, n=None):
    """Look up a fixture by name, e.g. 'A1', 'A2(3)', 'A4(2)'."""
    name = name.strip().upper()
    if "(" in name:
        base, arg = name.split("(", 1)
        n = int(arg.rstrip(")"))
        name = base
    if field is None:
        field = DEFAULT_CHAR.get(name, 2)
    field = parse_field(field)
    if name == "A1":
        return dual_numbers(field)
    if name == "A2":
        return truncated_polynomial(n if n is not None else 3, field)
    if name == "A3":
        return exterior_plane(field)
    if name == "A4":
        return radical_square_zero_local(n if n is not None else 2, field)
    if name == "A5":
        return nakayama_two_cycle(field)
    if name in ("PATH_A2", "A2PATH"):
        return path_algebra_a2(field)
    raise KeyError(f"unknown fixture {name!r}")
