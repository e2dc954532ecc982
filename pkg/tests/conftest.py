"""Shared material builders for the test suite."""
import math

import pytest

from casimir_mm.constants import C, OMEGA_BAR as W
from casimir_mm.materials import medium as md
from casimir_mm.materials import models as m
from casimir_mm.reflection import LayerSpec

LAMBDA = 2 * math.pi * C / W
MM_RES = m.LorentzParams(0.04 * W, 0.1 * W, 0.005 * W)
MM_DRUDE = m.DrudeParams(W, 0.006 * W)
MM_MU = m.LorentzParams(0.1 * W, 0.1 * W, 0.005 * W)


def gold(damping=0.004):
    return LayerSpec(md.Medium.isotropic(md.Drude(m.DrudeParams(0.96 * W, damping * W))))


def metamaterial(f=0.0, magnetic=True):
    eps = md.Composite(m.CompositeAxisParams(f, MM_RES, MM_DRUDE))
    mu = md.Lorentz(MM_MU) if magnetic else md.VACUUM
    return LayerSpec(md.Medium.isotropic(eps, mu))


def plasma(omega):
    return LayerSpec(md.Medium.isotropic(md.Drude(m.DrudeParams(omega, 0.0))))


def magnetic_plasma(omega):
    """Plate with mu = 1 + omega^2 / xi^2 and eps = 1."""
    return LayerSpec(md.Medium.isotropic(md.VACUUM, md.Lorentz(m.LorentzParams(omega, 0.0, 0.0))))


_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per criterion; the lines are echoed
    immediately and repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def report(number, title, passed, detail):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        lines.append(line)
        print(line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
