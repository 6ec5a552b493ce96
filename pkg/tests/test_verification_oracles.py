import ast
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

import projcauchy.verification_oracles as vo
from projcauchy import (
    BudgetExceededError,
    ImpracticalBoundError,
    InvalidBinningError,
    InvalidBoundError,
    PlanePolygon,
    cauchy_elliptic_pdf,
    cauchy_std_pdf,
    integrate_cauchy_elliptic,
    integrate_cauchy_std,
    simulate_cauchy_std,
)
from projcauchy import rng
from projcauchy.verification_oracles import (
    chi_square_gof,
    chi_square_two_sample,
    quadrature_integrate,
    rejection_sample,
    triangle_bins,
)

from oracles import UNIT_TRIANGLE_MASS, UNIT_TRIANGLE_MASS_FIG4


def ones(x):
    return np.ones(len(x))


def test_radon_rule_is_exact_for_quintics():
    tri = np.array([[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]])
    # integral of x^a y^b over the unit simplex is a! b! / (a + b + 2)!
    from math import factorial

    for a in range(6):
        for b in range(6 - a):
            got = vo._apply_rule(lambda p: p[:, 0] ** a * p[:, 1] ** b, tri)[0]
            assert got == pytest.approx(factorial(a) * factorial(b) / factorial(a + b + 2), rel=1e-13)


def test_quadrature_area(unit_triangle):
    r = quadrature_integrate(ones, unit_triangle)
    assert abs(r.value - 0.5) < 1e-12
    assert r.error_estimate >= 0 and r.evaluations > 0


def test_quadrature_cauchy(unit_triangle):
    r = quadrature_integrate(cauchy_std_pdf, unit_triangle, tol=1e-10)
    assert abs(r.value - UNIT_TRIANGLE_MASS) < 1e-9
    assert abs(r.value - UNIT_TRIANGLE_MASS) <= max(r.error_estimate, 1e-13)


def test_quadrature_elliptic(unit_triangle, fig4):
    r = quadrature_integrate(lambda x: cauchy_elliptic_pdf(x, fig4), unit_triangle, tol=1e-10)
    assert abs(r.value - integrate_cauchy_elliptic(unit_triangle, fig4)) < 1e-8
    assert abs(r.value - UNIT_TRIANGLE_MASS_FIG4) < 1e-8


def test_quadrature_non_convex_area():
    p = PlanePolygon([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])
    assert quadrature_integrate(ones, p).value == pytest.approx(3.0, abs=1e-12)


@pytest.mark.parametrize("which", ["area", "cauchy", "elliptic"])
def test_quadrature_convergence_when_halving_tol(unit_triangle, fig4, which):
    f, ref = {
        "area": (ones, 0.5),
        "cauchy": (cauchy_std_pdf, UNIT_TRIANGLE_MASS),
        "elliptic": (lambda x: cauchy_elliptic_pdf(x, fig4), UNIT_TRIANGLE_MASS_FIG4),
    }[which]
    errors = [abs(quadrature_integrate(f, unit_triangle, tol=1e-4 / 2**k).value - ref) for k in range(14)]
    for e0, e1 in zip(errors, errors[1:]):
        assert e1 <= e0 + 1e-15


def test_quadrature_budget(unit_triangle):
    with pytest.raises(BudgetExceededError) as info:
        quadrature_integrate(cauchy_std_pdf, unit_triangle, tol=1e-15, max_evaluations=2000)
    assert info.value.best is not None
    assert info.value.best.value == pytest.approx(UNIT_TRIANGLE_MASS, abs=1e-6)


def test_quadrature_rejects_bad_tol(unit_triangle):
    with pytest.raises(ValueError):
        quadrature_integrate(ones, unit_triangle, tol=0)


def test_rejection_constant_density_is_uniform():
    p = PlanePolygon([[0, 0], [3, 0], [3, 1], [1, 2], [0, 1]])
    x = rejection_sample(lambda x: np.full(len(x), 0.25), p, 1.0, seed=3, n=20_000)
    assert x.shape == (20_000, 2)
    bins = triangle_bins(p, levels=1)
    report = chi_square_gof(x, bins, [b.area for b in bins])
    assert report.p_value > 1e-3


def test_rejection_invalid_bound(unit_triangle):
    with pytest.raises(InvalidBoundError):
        rejection_sample(cauchy_std_pdf, unit_triangle, 0.1, seed=1, n=100)


def test_rejection_impractical_bound(unit_triangle):
    with pytest.raises(ImpracticalBoundError):
        rejection_sample(lambda x: np.full(len(x), 1e-9), unit_triangle, 1.0, seed=1, n=10)


def test_rejection_agrees_with_spherical_sampler(unit_triangle):
    n = 100_000
    a = rejection_sample(cauchy_std_pdf, unit_triangle, 1 / (2 * np.pi), seed=5, n=n)
    b = simulate_cauchy_std(unit_triangle, rng.uniform_pairs(5, n))
    bins = triangle_bins(unit_triangle)
    assert chi_square_two_sample(a, b, bins).p_value > 1e-3
    assert chi_square_gof(a, bins, [integrate_cauchy_std(t) for t in bins]).p_value > 1e-3


def test_gof_proportional_counts():
    bins = triangle_bins([[0, 0], [1, 0], [0, 1]], levels=1)
    centers = np.array([b.vertices.mean(axis=0) for b in bins])
    samples = np.repeat(centers, [10, 20, 30, 40], axis=0)
    report = chi_square_gof(samples, bins, [1, 2, 3, 4])
    assert report.statistic == 0.0
    assert report.p_value == 1.0
    assert report.dof == 3
    assert sum(o for _, o in report.bin_counts) == 100
    assert sum(e for e, _ in report.bin_counts) == pytest.approx(100, abs=1e-9)


def test_gof_detects_swapped_masses(unit_triangle):
    x = simulate_cauchy_std(unit_triangle, rng.uniform_pairs(12, 100_000))
    bins = triangle_bins(unit_triangle)
    masses = np.array([integrate_cauchy_std(b) for b in bins])
    i, j = int(np.argmax(masses)), int(np.argmin(masses))
    masses[[i, j]] = masses[[j, i]]
    assert chi_square_gof(x, bins, masses).p_value < 1e-6


def test_gof_rejects_thin_bins(unit_triangle):
    bins = triangle_bins(unit_triangle)
    x = simulate_cauchy_std(unit_triangle, rng.uniform_pairs(1, 40))
    with pytest.raises(InvalidBinningError):
        chi_square_gof(x, bins, [1.0] * len(bins))


def test_gof_rejects_uncovered_samples(unit_triangle):
    bins = triangle_bins(unit_triangle)[:8]
    x = simulate_cauchy_std(unit_triangle, rng.uniform_pairs(1, 1000))
    with pytest.raises(InvalidBinningError):
        chi_square_gof(x, bins, [1.0] * len(bins))


def test_chi_square_sf_reference():
    for stat, dof in [(3.0, 1), (15.0, 15), (40.0, 15), (0.5, 4)]:
        assert vo.chi_square_sf(stat, dof) == pytest.approx(stats.chi2.sf(stat, dof), rel=1e-12)


def test_chi_square_calibration_under_null(unit_triangle):
    bins = triangle_bins(unit_triangle)
    masses = [integrate_cauchy_std(b) for b in bins]
    pvals = [
        chi_square_gof(simulate_cauchy_std(unit_triangle, rng.uniform_pairs(1000 + k, 2000)), bins, masses).p_value
        for k in range(200)
    ]
    assert stats.kstest(pvals, "uniform").statistic < 0.1


def _imported_modules(path):
    tree = ast.parse(Path(path).read_text())
    names = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom) and node.module:
            names.add(node.module)
        elif isinstance(node, ast.Import):
            names.update(a.name for a in node.names)
    return names


def test_oracles_do_not_depend_on_the_solid_angle_path():
    forbidden = {"projcauchy.spherical_polygon", "projcauchy.cauchy_distributions", "projcauchy.student_extension"}
    seen = set()
    todo = [vo.__file__]
    pkg = Path(vo.__file__).parent
    while todo:
        mods = _imported_modules(todo.pop())
        for m in mods:
            if m.startswith("projcauchy") and m not in seen:
                seen.add(m)
                sub = m.split(".", 1)[1] if "." in m else "__init__"
                if sub != "__init__":
                    todo.append(str(pkg / f"{sub}.py"))
    assert not (seen & forbidden), seen & forbidden
