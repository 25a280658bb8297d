"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import metrix


def test_integrate_constant_on_torus():
    g = metrix.GridSpec.torus2d(32)
    ones = np.ones(g.size())
    vol = metrix.integrate(g, ones)
    assert vol == pytest.approx(4.0 * math.pi**2, rel=1e-12)


def test_poisson_periodic_eigenfunction():
    n = 32
    g = metrix.GridSpec.torus2d(n)
    x = np.arange(n) * (2.0 * math.pi / n)
    omega = np.repeat(np.cos(x), n)  # cos(x1), row-major node order
    phi = metrix.poisson_periodic(g, omega)
    assert np.max(np.abs(phi - omega)) < 1e-12


def test_gradient_shapes():
    g = metrix.GridSpec.torus2d(16)
    f = np.random.default_rng(0).normal(size=g.size())
    comps = metrix.gradient(g, f)
    assert len(comps) == 2
    assert all(len(c) == g.size() for c in comps)


def test_gs_solve_zero():
    g = metrix.GridSpec.gs_rect2d(16, 16)
    psi = metrix.gs_solve(g, np.zeros(g.size()))
    assert np.all(psi == 0.0)


def test_rate_fit():
    t = np.linspace(0.0, 5.0, 101)
    v = np.exp(-2.0 * t)
    rate, _, _, resid = metrix.fit_exponential_rate(list(t), list(v), 0.0)
    assert rate == pytest.approx(2.0, rel=1e-8)
    assert resid < 1e-8


def test_presets_and_config_round_trip():
    names = metrix.preset_names()
    assert len(names) == 13
    assert "heat1d" in names
    text = metrix.emit_config("heat1d")
    ok, errors = metrix.parse_config(text)
    assert ok, errors
    ok, errors = metrix.parse_config("problem = heat1d\n[run]\ndt = -1\n")
    assert not ok
    assert errors[0][0] == 3  # line number


def test_run_heat_preset():
    summary = metrix.run_preset("heat1d", {"t_end": 1.0})
    assert summary["completed"]
    assert summary["decay_ratio_max"] <= 1.0 + 1e-6
