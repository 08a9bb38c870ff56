import numpy as np
import pytest

from schrostab.dynamics import (
    EnergyTrace,
    MidpointStepper,
    fit_decay_rate,
    initial_state,
    simulate,
    step_midpoint,
)
from schrostab.grid import Mesh
from schrostab.systems import ORDER_REDUCTION, SemiDiscreteSystem

from conftest import random_complex


def make_system(n=7, k=1.0):
    return SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), k)


class TestStepper:
    def test_zero_state_fixed_point(self):
        system = make_system()
        W = step_midpoint(system, np.zeros(8), 1e-2)
        np.testing.assert_array_equal(W, np.zeros(8))

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            MidpointStepper(make_system(), 0.0)
        with pytest.raises(ValueError):
            MidpointStepper(make_system(), -1e-3)

    def test_matches_direct_solve(self, rng):
        system = make_system(5)
        dt = 1e-2
        W = random_complex(rng, 6)
        A = system.generator
        eye = np.eye(6)
        expect = np.linalg.solve(eye - 0.5 * dt * A, (eye + 0.5 * dt * A) @ W)
        np.testing.assert_allclose(step_midpoint(system, W, dt), expect, rtol=1e-12)

    def test_second_order_convergence(self):
        # global error ratio under step halving approaches 4; the data must
        # live on the slowest eigenmodes because the generator's spectrum
        # reaches |lambda| ~ 1e4 even at N = 7 and the asymptotic regime
        # needs dt * |lambda| << 1, so the exact mode solution e^{lambda t}
        # serves as the reference
        from schrostab.spectral import eigenpairs

        system = make_system(7)
        ev, V = eigenpairs(system.generator)
        order = np.argsort(np.abs(ev))
        lams = ev[order[:2]]
        vecs = V[:, order[:2]]
        W0 = vecs.sum(axis=1)
        t_final = 0.1
        exact = vecs @ np.exp(lams * t_final)
        errors = {}
        for dt in (1e-3, 5e-4, 2.5e-4):
            errors[dt] = np.linalg.norm(_state_at_end(system, W0, dt, t_final) - exact)
        r1 = errors[1e-3] / errors[5e-4]
        r2 = errors[5e-4] / errors[2.5e-4]
        assert 3.5 <= r1 <= 4.5
        assert 3.5 <= r2 <= 4.5


def _state_at_end(system, W0, dt, t_final):
    stepper = MidpointStepper(system, dt)
    W = np.asarray(W0, dtype=complex).copy()
    for _ in range(int(round(t_final / dt))):
        W = stepper.step(W)
    return W


class TestSimulate:
    def test_trace_shapes(self):
        system = make_system()
        trace = simulate(system, initial_state("sine", system), 1e-2, 0.1)
        assert trace.times.size == 11
        assert trace.energies.size == 11
        assert trace.boundary_values.size == 10
        assert trace.step_gaps.size == 10
        assert trace.times[0] == 0.0
        assert trace.times[-1] == pytest.approx(0.1)

    def test_rejects_bad_windows(self):
        system = make_system()
        with pytest.raises(ValueError):
            simulate(system, np.zeros(8), -1e-2, 1.0)
        with pytest.raises(ValueError):
            simulate(system, np.zeros(8), 1e-2, 1e-3)

    @pytest.mark.parametrize("n,k,dt", [(7, 1.0, 1e-2), (31, 0.5, 1e-3), (63, 10.0, 1e-3)])
    def test_per_step_energy_identity(self, n, k, dt, rng):
        system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(n), k)
        W0 = random_complex(rng, n + 1)
        trace = simulate(system, W0, dt, 0.05)
        assert np.max(np.abs(trace.step_gaps)) <= 1e-12 * trace.energies[0]

    def test_energies_nonincreasing(self, rng):
        system = make_system(31)
        trace = simulate(system, random_complex(rng, 32), 1e-3, 0.5)
        assert np.all(np.diff(trace.energies) <= 1e-14 * trace.energies[0])

    def test_undamped_limit_conserves(self, rng):
        # a vanishing boundary value over the step leaves the energy fixed;
        # with tiny gain the drift over many steps stays proportional to k
        system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(15), 1e-8)
        trace = simulate(system, random_complex(rng, 16), 1e-3, 0.2)
        drop = trace.energies[0] - trace.energies[-1]
        assert 0 <= drop <= 1e-5 * trace.energies[0]


class TestFitDecayRate:
    def synthetic_trace(self, omega, t_final=2.0, dt=1e-2):
        times = np.arange(0.0, t_final + dt / 2, dt)
        energies = np.exp(-2.0 * omega * times)
        return EnergyTrace(
            times=times,
            energies=energies,
            boundary_values=np.zeros(times.size - 1, dtype=complex),
            step_gaps=np.zeros(times.size - 1),
        )

    @pytest.mark.parametrize("omega", [0.0, 1.0, 1.94])
    def test_exact_exponential(self, omega):
        trace = self.synthetic_trace(omega)
        assert fit_decay_rate(trace, 0.5, 2.0) == pytest.approx(omega, abs=1e-10)

    def test_window_too_small(self):
        trace = self.synthetic_trace(1.0)
        with pytest.raises(ValueError):
            fit_decay_rate(trace, 0.0, 0.05)

    def test_nonpositive_energy_rejected(self):
        trace = self.synthetic_trace(1.0)
        object.__setattr__(trace, "energies", trace.energies - 0.5)
        with pytest.raises(ValueError):
            fit_decay_rate(trace, 1.5, 2.0)

    def test_simulated_rate_near_abscissa(self):
        system = SemiDiscreteSystem(ORDER_REDUCTION, Mesh(63), 1.0)
        W0 = initial_state("smooth", system, seed=0)
        trace = simulate(system, W0, 1e-3, 3.0)
        omega = fit_decay_rate(trace, 1.5, 3.0)
        assert omega == pytest.approx(1.94, rel=0.15)


class TestInitialState:
    def test_presets_shapes(self):
        system = make_system(9)
        for preset in ("random", "smooth", "sine"):
            W = initial_state(preset, system, seed=1)
            assert W.shape == (10,)
            assert W.dtype == complex

    def test_seeded_reproducibility(self):
        system = make_system(9)
        a = initial_state("smooth", system, seed=7)
        b = initial_state("smooth", system, seed=7)
        c = initial_state("smooth", system, seed=8)
        np.testing.assert_array_equal(a, b)
        assert np.any(a != c)

    def test_sine_values(self):
        system = make_system(3)
        W = initial_state("sine", system)
        np.testing.assert_allclose(W, np.sin(np.pi * system.mesh.nodes[1:]))

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            initial_state("hat", make_system())
