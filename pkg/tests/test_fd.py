"""Staggered-grid finite-difference oracle."""

import numpy as np
import pytest

from gkheat.fd import (FdGrid, FdInstabilityError, fd_energy_audit, fd_solve,
                       grid_for)
from gkheat.params import PhysicalParams
from gkheat.signals import SourceTerm, SpaceProfile, TimeSignal
from gkheat.solver import Scenario

P = PhysicalParams(alpha=1.0, tau=0.02, mu2=0.02, l=1.0)


def manufactured_scenario():
    """e = cos(pi x) e^{-t}, q = sin(pi x) e^{-t} with the forcing, boundary
    data, and initial state that make these the exact solution."""
    tt = np.linspace(0.0, 1.2, 24001)
    expsig = TimeSignal(kind="tabulated", times=tt, values=np.exp(-tt))
    negexp = TimeSignal(kind="tabulated", times=tt, values=-np.exp(-tt))
    xs = np.linspace(0.0, 1.0, 4001)
    sinprof = SpaceProfile(kind="tabulated", l=1.0, xs=xs,
                           values=np.sin(np.pi * xs))
    src = SourceTerm(profile=SpaceProfile(kind="cosine", l=1.0,
                                          value=np.pi - 1.0),
                     signal=expsig)
    cq = 1.0 - P.tau + P.mu2 * np.pi**2 - P.alpha * np.pi
    q_source = lambda xf, t: cq * np.sin(np.pi * xf) * np.exp(-t)
    scn = Scenario(params=P, gamma0=1.0, gammal=1.0, g=expsig, h=negexp,
                   phi=SpaceProfile(kind="cosine", l=1.0, value=1.0),
                   psi=sinprof, source=src)
    return scn, q_source


def test_grid_validation():
    with pytest.raises(ValueError):
        FdGrid(nx=8, nt=100, t_end=1.0)
    g = FdGrid(nx=100, nt=50, t_end=1.0)
    assert g.dt == pytest.approx(0.02)


def test_grid_for_caps_time_step():
    scn = Scenario(params=P)
    g = grid_for(scn, 1.0, 100)
    assert g.dt <= P.tau / 10.0 + 1e-15


def test_spatial_convergence_second_order():
    scn, q_source = manufactured_scenario()
    errs = []
    for nx in (50, 100, 200):
        field = fd_solve(scn, FdGrid(nx=nx, nt=8000, t_end=0.5),
                         q_source=q_source)
        xf = field.x_grid
        e, q = field(xf, 0.5)
        errs.append(np.max(np.abs(e - np.cos(np.pi * xf) * np.exp(-0.5))))
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert min(orders) > 1.9


def test_flux_field_also_converges():
    scn, q_source = manufactured_scenario()
    field = fd_solve(scn, FdGrid(nx=200, nt=8000, t_end=0.5),
                     q_source=q_source)
    xf = field.x_grid
    _, q = field(xf, 0.5)
    assert np.max(np.abs(q - np.sin(np.pi * xf) * np.exp(-0.5))) < 5e-4


def test_energy_audit_telescopes():
    scn = Scenario(params=P, g=TimeSignal(kind="laser_flash", tau_delta=0.04))
    field = fd_solve(scn, FdGrid(nx=200, nt=1000, t_end=1.0))
    total, inflow, residual = fd_energy_audit(field, scn)
    assert np.max(np.abs(residual)) < 1e-13
    # after the pulse the injected unit of energy is fully inside
    assert total[-1] == pytest.approx(1.0, abs=1e-10)
    assert inflow[-1] == pytest.approx(1.0, abs=1e-10)


def test_insulated_decay_conserves_energy():
    scn = Scenario(params=P, phi=SpaceProfile(kind="cosine", l=1.0, value=1.0))
    field = fd_solve(scn, FdGrid(nx=200, nt=1000, t_end=1.0))
    total, inflow, residual = fd_energy_audit(field, scn)
    assert np.max(np.abs(total - total[0])) < 1e-12
    assert np.max(np.abs(inflow)) < 1e-12


def test_nonfinite_input_raises_instability():
    tt = np.linspace(0.0, 1.0, 11)
    vals = np.zeros(11)
    vals[5] = np.nan
    scn = Scenario(params=P, g=TimeSignal(kind="tabulated", times=tt,
                                          values=vals))
    with pytest.raises(FdInstabilityError):
        fd_solve(scn, FdGrid(nx=50, nt=100, t_end=1.0))


def test_field_time_interpolation():
    scn = Scenario(params=P, g=TimeSignal(kind="laser_flash", tau_delta=0.04))
    field = fd_solve(scn, FdGrid(nx=100, nt=500, t_end=1.0))
    e_mid, _ = field(np.array([1.0]), 0.501)
    e_lo, _ = field(np.array([1.0]), 0.5)
    e_hi, _ = field(np.array([1.0]), 0.502)
    assert min(e_lo[0], e_hi[0]) - 1e-12 <= e_mid[0] <= max(e_lo[0], e_hi[0]) + 1e-12
