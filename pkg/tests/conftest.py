"""Shared fixtures: the bundled molecule, its triad levels, spec builders."""

import numpy as np
import pytest

from chiraloop.dipole import BodyDipole
from chiraloop.fields import DriveField, linear_polarization
from chiraloop.loop import LoopSpec
from chiraloop.rotor import RotationalConstants, rotor_levels

PROPANEDIOL = RotationalConstants(A=8572.05, B=3640.10, C=2790.96)
PROPANEDIOL_DIPOLE = BodyDipole(mu_x=1.916, mu_y=0.365, mu_z=1.201)

Z = (0.0, 0.0, 1.0)
X = (1.0, 0.0, 0.0)
Y = (0.0, 1.0, 0.0)


@pytest.fixture(scope="session")
def constants():
    return PROPANEDIOL


@pytest.fixture(scope="session")
def dipole():
    return PROPANEDIOL_DIPOLE


@pytest.fixture(scope="session")
def ground(constants):
    return rotor_levels(constants, 0)[0]


@pytest.fixture(scope="session")
def j1_levels(constants):
    return {level.tau: level for level in rotor_levels(constants, 1)}


@pytest.fixture(scope="session")
def triad_a(ground, j1_levels):
    """(a, b, c) = (|0,0>, |1,-1>, |1,1>), the worked-example triad."""
    return ground, j1_levels[-1], j1_levels[1]


def pure_loop_spec(levels, dip, sigmas, amplitudes=(1.0, 1.0, 1.0), phases=(0.0, 0.0, 0.0)):
    a, b, c = levels
    return LoopSpec(
        level_a=a,
        level_b=b,
        level_c=c,
        field1=DriveField.pure(sigmas[0], amplitudes[0], b.freq - a.freq, phases[0]),
        field2=DriveField.pure(sigmas[1], amplitudes[1], c.freq - b.freq, phases[1]),
        field3=DriveField.pure(sigmas[2], amplitudes[2], c.freq - a.freq, phases[2]),
        dipole=dip,
    )


def linear_loop_spec(levels, dip, directions, amplitudes=(1.0, 1.0, 1.0), phases=(0.0, 0.0, 0.0)):
    a, b, c = levels
    freqs = (b.freq - a.freq, c.freq - b.freq, c.freq - a.freq)
    f1, f2, f3 = (
        linear_polarization(direction, amp, phase, freq)
        for direction, amp, phase, freq in zip(directions, amplitudes, phases, freqs)
    )
    return LoopSpec(
        level_a=a, level_b=b, level_c=c, field1=f1, field2=f2, field3=f3, dipole=dip
    )


def random_drive(rng, freq, max_amp=2.0):
    comps = {
        sigma: (rng.uniform(0.05, max_amp), rng.uniform(-np.pi, np.pi))
        for sigma in (-1, 0, 1)
    }
    return DriveField(freq=freq, comps=comps)


def random_loop_spec(rng, levels, dip):
    a, b, c = levels
    return LoopSpec(
        level_a=a,
        level_b=b,
        level_c=c,
        field1=random_drive(rng, b.freq - a.freq),
        field2=random_drive(rng, c.freq - b.freq),
        field3=random_drive(rng, c.freq - a.freq),
        dipole=dip,
    )


def rk4_propagate(h, psi0, t, steps=4000):
    """Fixed-step RK4 for d psi/dt = -2 pi i H psi; independent oracle."""
    h = np.asarray(h, dtype=complex)
    psi = np.asarray(psi0, dtype=complex).copy()
    dt = t / steps
    for _ in range(steps):
        k1 = -2j * np.pi * (h @ psi)
        k2 = -2j * np.pi * (h @ (psi + 0.5 * dt * k1))
        k3 = -2j * np.pi * (h @ (psi + 0.5 * dt * k2))
        k4 = -2j * np.pi * (h @ (psi + dt * k3))
        psi = psi + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi
