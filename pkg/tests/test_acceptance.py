"""End-to-end acceptance gate.

Each test checks one advertised guarantee at its stated tolerance and
prints a single pass/fail line so the whole gate reads as a checklist.
"""

import numpy as np
import pytest

from schrostab.continuous import SampledFunction, apply_continuous_inverse, characteristic_roots
from schrostab.dynamics import fit_decay_rate, initial_state, simulate
from schrostab.grid import Mesh, triple_sum_identity_gap, yh_inner, yh_norm
from schrostab.identities import run_identity_suite
from schrostab.spectral import (
    resolvent_sweep,
    spectral_abscissa,
    spectral_norm_estimate,
    uniformity_report,
)
from schrostab.systems import CLASSICAL, ORDER_REDUCTION, SemiDiscreteSystem, apply_order_reduction


def _report(capsys, number, passed, detail):
    with capsys.disabled():
        status = "PASS" if passed else "FAIL"
        print(f"criterion {number:2d}: {status}  {detail}")
    assert passed, detail


def _batch(rng, size, count):
    return rng.standard_normal((size, count)) + 1j * rng.standard_normal((size, count))


def test_criterion_01_dissipation_identity(capsys):
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in (1, 4, 16, 64, 256, 1023):
        mesh = Mesh(n)
        for k in (0.1, 1.0, 10.0):
            Y = _batch(rng, n + 1, 1000)
            AY = apply_order_reduction(Y, k, mesh)
            gap = np.abs(np.real(yh_inner(AY, Y, mesh)) + k * np.abs(Y[-1]) ** 2)
            scale = yh_norm(Y, mesh) * yh_norm(AY, mesh) + k * np.abs(Y[-1]) ** 2
            worst = max(worst, float(np.max(gap / scale)))
    _report(capsys, 1, worst <= 1e-10, f"max relative dissipation gap {worst:.3e}")


def test_criterion_02_triple_sum_identity(capsys):
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(1000):
        size = int(rng.integers(2, 4098))
        u, v, w = (_batch(rng, size, 1)[:, 0] for _ in range(3))
        gap = abs(triple_sum_identity_gap(u, v, w))
        scale = np.max(np.abs(u)) * np.max(np.abs(v)) * np.max(np.abs(w)) * size
        worst = max(worst, gap / scale)
    _report(capsys, 2, worst <= 1e-12, f"max relative telescoping gap {worst:.3e}")


def test_criterion_03_multiplier_identities(capsys):
    reports = run_identity_suite(
        n_values=(1, 2, 7, 64, 255, 1023), samples=1000, seed=103
    )
    checked = [r for r in reports if r.identity != "triple_sum"]
    worst = max(r.relative_gap for r in checked)
    passed = all(r.passed for r in checked)
    _report(capsys, 3, passed, f"max relative identity gap {worst:.3e} over {len(checked)} configs")


def test_criterion_04_spectrum_location(capsys):
    worst_abs = -np.inf
    worst_res = 0.0
    for n in (1, 2, 4, 8, 16, 32, 64, 128, 256, 512):
        for k in (0.1, 1.0, 10.0):
            system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), k)
            rep = spectral_abscissa(system)
            worst_abs = max(worst_abs, rep.abscissa)
            norm = spectral_norm_estimate(system.generator)
            worst_res = max(worst_res, rep.max_eigen_residual / norm)
    passed = worst_abs < 0 and worst_res <= 1e-8
    _report(
        capsys, 4, passed,
        f"max abscissa {worst_abs:.4f}, max relative eigen-residual {worst_res:.3e}",
    )


def test_criterion_05_abscissa_trends(capsys):
    n_values = (9, 19, 39, 79, 159, 319, 639, 999)
    abs_or = []
    abs_cl = []
    for n in n_values:
        abs_or.append(spectral_abscissa(SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), 1.0)).abscissa)
        abs_cl.append(spectral_abscissa(SemiDiscreteSystem(CLASSICAL, Mesh(n), 1.0)).abscissa)
    shrink = abs(abs_cl[0]) / abs(abs_cl[-1])
    non_monotone = sum(
        1 for a, b in zip(abs_cl, abs_cl[1:]) if abs(b) >= abs(a)
    )
    spread = (max(abs_or) - min(abs_or)) / abs(min(abs_or))
    continuous = float(np.max(characteristic_roots(1.0, 50).real))
    at_511 = spectral_abscissa(SemiDiscreteSystem(ORDER_REDUCTION, Mesh(511), 1.0)).abscissa
    agree = abs(at_511 - continuous) / abs(continuous)
    passed = shrink >= 10 and non_monotone <= 2 and spread < 0.20 and agree < 0.05
    _report(
        capsys, 5, passed,
        f"classical shrink x{shrink:.1f}, non-monotone pairs {non_monotone}, "
        f"order-reduction spread {100 * spread:.1f}%, continuous agreement {100 * agree:.2f}%",
    )


def test_criterion_06_resolvent_uniformity(capsys):
    sup_or = []
    sup_cl = []
    for n in (15, 63, 255):
        mesh = Mesh(n)
        sup_or.append(
            resolvent_sweep(SemiDiscreteSystem(ORDER_REDUCTION, mesh, 1.0), -20.0, 20.0).sup_norm
        )
        sup_cl.append(
            resolvent_sweep(SemiDiscreteSystem(CLASSICAL, mesh, 1.0), -20.0, 20.0).sup_norm
        )
    ratio = max(sup_or) / min(sup_or)
    growing = sup_cl[0] < sup_cl[1] < sup_cl[2]
    passed = ratio <= 2.0 and growing
    _report(
        capsys, 6, passed,
        f"order-reduction sup ratio {ratio:.3f}, classical sups "
        + " < ".join(f"{s:.1f}" for s in sup_cl),
    )


def test_criterion_07_midpoint_energy_identity(capsys):
    # the identity is exact in exact arithmetic; in floats its defect
    # inherits roundoff of order eps * dt * ||A||, and ||A|| grows like
    # (N+1)^3, so the 1e-12 * E(0) bound is checked at desk scales
    worst = 0.0
    monotone = True
    rng = np.random.default_rng(107)
    configs = [(n, k) for n in (15, 31, 63) for k in (0.1, 1.0, 10.0)]
    for n, k in configs:
        dt = 5e-4 if n == 63 else 1e-3
        system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), k)
        W0 = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        trace = simulate(system, W0, dt, 0.5)
        worst = max(worst, float(np.max(np.abs(trace.step_gaps)) / trace.energies[0]))
        monotone &= bool(np.all(np.diff(trace.energies) <= 1e-14 * trace.energies[0]))
    passed = worst <= 1e-12 and monotone
    _report(
        capsys, 7, passed,
        f"max per-step energy defect {worst:.3e} of E(0), monotone={monotone}",
    )


def test_criterion_08_decay_rate_uniformity(capsys):
    t_final = 3.0
    fits = {}
    deviations = {}
    for n in (31, 63, 127, 255):
        system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), 1.0)
        W0 = initial_state("smooth", system, seed=108)
        trace = simulate(system, W0, 1e-3, t_final)
        omega = fit_decay_rate(trace, t_final / 2, t_final)
        fits[n] = omega
        abscissa = abs(spectral_abscissa(system).abscissa)
        deviations[n] = abs(omega - abscissa) / abscissa
    values = list(fits.values())
    spread = (max(values) - min(values)) / min(values)
    passed = spread <= 0.10 and all(d <= 0.15 for d in deviations.values())
    _report(
        capsys, 8, passed,
        f"omega_fit spread {100 * spread:.1f}%, max abscissa deviation "
        f"{100 * max(deviations.values()):.1f}%",
    )


def test_criterion_09_continuous_inverse(capsys):
    k = 1.0
    residuals = {}
    for num in (257, 513):
        f = SampledFunction.from_callable(lambda x: np.cos(2 * np.pi * x) + 1j * x, num)
        g = apply_continuous_inverse(f, k)
        dx = g.grid[1] - g.grid[0]
        v = g.values
        # fourth-order stencil: the three-point second difference is exact
        # by construction and would only measure roundoff
        gpp = (-v[:-4] + 16 * v[1:-3] - 30 * v[2:-2] + 16 * v[3:-1] - v[4:]) / (12 * dx**2)
        residuals[num] = float(np.max(np.abs(-1j * gpp - f.values[2:-2])))
    ratio = residuals[257] / residuals[513]
    f = SampledFunction.from_callable(lambda x: np.cos(2 * np.pi * x) + 1j * x, 513)
    g = apply_continuous_inverse(f, k)
    dx = g.grid[1] - g.grid[0]
    gp1 = (3 * g.values[-1] - 4 * g.values[-2] + g.values[-3]) / (2 * dx)
    bc = abs(gp1 + 1j * k * g.values[-1])
    passed = 3.0 <= ratio <= 5.0 and g.values[0] == 0 and bc <= 100 * dx**2
    _report(
        capsys, 9, passed,
        f"interior residual ratio {ratio:.2f}, boundary defect {bc:.2e} at dx={dx:.1e}",
    )


def test_criterion_10_eigensolver_oracle(capsys):
    from schrostab.spectral import eigenvalues

    A = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(1), 1.0).generator
    tr = A[0, 0] + A[1, 1]
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = np.sqrt(tr**2 - 4 * det + 0j)
    oracle = np.sort_complex(np.array([(tr + disc) / 2, (tr - disc) / 2]))
    solved = np.sort_complex(eigenvalues(A))
    err = float(np.max(np.abs(solved - oracle)))
    ident = np.max(np.abs(np.sort(eigenvalues(np.eye(4)).real) - 1.0))
    diag = np.sort_complex(eigenvalues(np.diag([1.0, -2.0, 3.0j])))
    diag_err = float(np.max(np.abs(diag - np.sort_complex(np.array([1.0, -2.0, 3.0j])))))
    passed = err <= 1e-10 and ident == 0 and diag_err == 0
    _report(
        capsys, 10, passed,
        f"quadratic-oracle error {err:.2e}, identity/diagonal exact={ident == 0 and diag_err == 0}",
    )
