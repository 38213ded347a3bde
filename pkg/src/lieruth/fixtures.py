"""Small algebroids and connections used by the test-suite, the CLI samples and the docs."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List

from .algebroid import ChartAlgebroid, Connection
from .symcore import Poly


def abelian(rank: int) -> ChartAlgebroid:
    return ChartAlgebroid.from_brackets((), rank, name=f"abelian{rank}")


def aff1() -> ChartAlgebroid:
    return ChartAlgebroid.from_brackets((), 2, brackets={(0, 1): ["0", "1"]}, name="aff1")


def sl2() -> ChartAlgebroid:
    # basis h, e, f
    return ChartAlgebroid.from_brackets(
        (), 3, brackets={(0, 1): ["0", "2", "0"], (0, 2): ["0", "0", "-2"], (1, 2): ["1", "0", "0"]},
        name="sl2")


def heisenberg() -> ChartAlgebroid:
    return ChartAlgebroid.from_brackets((), 3, brackets={(0, 1): ["0", "0", "1"]}, name="h3")


def so3() -> ChartAlgebroid:
    return ChartAlgebroid.from_brackets(
        (), 3, brackets={(0, 1): ["0", "0", "1"], (1, 2): ["1", "0", "0"], (0, 2): ["0", "-1", "0"]},
        name="so3")


def line_action() -> ChartAlgebroid:
    """ℝ acting on ℝ by translations: ρ(e_1) = ∂_x, c = 0."""
    return ChartAlgebroid.from_brackets(("x",), 1, anchor=[["1"]], name="R⋉R")


def lie_bundle_x() -> ChartAlgebroid:
    """Bundle of Lie algebras over ℝ with [e_1, e_2] = x e_3."""
    return ChartAlgebroid.from_brackets(("x",), 3, brackets={(0, 1): ["0", "0", "x"]}, name="bundle c3_12=x")


def tangent(coordinates) -> ChartAlgebroid:
    coordinates = tuple(coordinates)
    m = len(coordinates)
    anchor = [["1" if a == i else "0" for a in range(m)] for i in range(m)]
    return ChartAlgebroid.from_brackets(coordinates, m, anchor=anchor, name=f"T R^{m}")


def rotation_action() -> ChartAlgebroid:
    """so(3) acting on ℝ³ by infinitesimal rotations (action algebroid, constant c)."""
    anchor = [
        ["0", "z", "-y"],
        ["-z", "0", "x"],
        ["y", "-x", "0"],
    ]
    return ChartAlgebroid.from_brackets(
        ("x", "y", "z"), 3, anchor=anchor,
        brackets={(0, 1): ["0", "0", "1"], (1, 2): ["1", "0", "0"], (0, 2): ["0", "-1", "0"]},
        name="so3⋉R3")


def affine_line_action() -> ChartAlgebroid:
    """aff(1) acting on ℝ: e_1 ↦ -x∂_x, e_2 ↦ ∂_x."""
    return ChartAlgebroid.from_brackets(("x",), 2, anchor=[["-x"], ["1"]],
                                        brackets={(0, 1): ["0", "1"]}, name="aff1⋉R")


def split_bundle() -> ChartAlgebroid:
    """Bundle over ℝ with [e_1,e_2]=e_2, [e_1,e_3]=e_3 (valid for every x)."""
    return ChartAlgebroid.from_brackets(("x",), 3, brackets={(0, 1): ["0", "1", "0"], (0, 2): ["0", "0", "1"]},
                                        name="split bundle")


def perturbed_split_bundle() -> ChartAlgebroid:
    """The split bundle with c^1_{23} changed from 0 to x; breaks the Jacobi identity."""
    return ChartAlgebroid.from_brackets(
        ("x",), 3, brackets={(0, 1): ["0", "1", "0"], (0, 2): ["0", "0", "1"], (1, 2): ["x", "0", "0"]},
        name="perturbed split bundle")


def curvature_fixtures() -> Dict[str, ChartAlgebroid]:
    return {
        "abelian2": abelian(2),
        "aff1": aff1(),
        "sl2": sl2(),
        "h3": heisenberg(),
        "R⋉R": line_action(),
        "bundle c3_12=x": lie_bundle_x(),
    }


def lie_algebra_fixtures() -> Dict[str, ChartAlgebroid]:
    return {"abelian2": abelian(2), "aff1": aff1(), "sl2": sl2(), "h3": heisenberg()}


def random_poly(rng: random.Random, variables, degree: int = 1, density: float = 0.6) -> Poly:
    """Random polynomial of total degree ≤ ``degree`` with small rational coefficients."""
    variables = tuple(variables)
    m = len(variables)
    exps = [()]
    for _ in range(m):
        exps = [e + (k,) for e in exps for k in range(degree + 1)]
    terms = {}
    for e in exps:
        if sum(e) <= degree and rng.random() < density:
            num = rng.randint(-3, 3)
            if num:
                terms[e] = Fraction(num, rng.randint(1, 3))
    return Poly(variables, terms)


def random_connection(A: ChartAlgebroid, rng: random.Random, degree: int = 1) -> Connection:
    gamma = [[[random_poly(rng, A.coordinates, degree) for _ in range(A.r)] for _ in range(A.r)]
             for _ in range(A.m)]
    return Connection(A, gamma)


def random_connections(A: ChartAlgebroid, count: int, seed: int = 0, degree: int = 1) -> List[Connection]:
    rng = random.Random(seed)
    return [random_connection(A, rng, degree) for _ in range(count)]
