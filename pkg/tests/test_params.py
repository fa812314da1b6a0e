import math

import numpy as np
import pytest

from rabicav import (ParameterError, PhysicalParams, VacuumSpectrum,
                     bare_from_physical, params_from_config, renormalize,
                     vacuum_energy)


def test_renormalize_identity_at_unit_weight():
    assert renormalize(2.0, 3.0, 4.0, 5.0, 1.0) == (2.0, 3.0, 4.0, 5.0)


def test_renormalize_quarter_weight():
    q, g1, g2, g3 = renormalize(2.0, 3.0, 4.0, 5.0, 0.25)
    assert q == pytest.approx(1.0, rel=1e-15)
    assert g1 == pytest.approx(0.75, rel=1e-15)
    assert g2 == pytest.approx(1.0, rel=1e-15)
    assert g3 == 5.0


def test_renormalize_rejects_bad_weight():
    for z in (0.0, -0.1, 1.5, math.inf, math.nan):
        with pytest.raises(ParameterError):
            renormalize(1.0, 1.0, 1.0, 1.0, z)
    with pytest.raises(ParameterError):
        renormalize(-1.0, 1.0, 1.0, 1.0, 0.5)


def test_renormalize_round_trip_random(rng):
    for _ in range(100):
        q, g1, g2, g3 = rng.uniform(0.01, 10.0, size=4)
        z = rng.uniform(1e-6, 1.0)
        n = int(rng.integers(1, 10**6))
        p = PhysicalParams.from_bare(1.0, q, g1, g2, g3, n, z)
        qb, g1b, g2b, g3b = bare_from_physical(p)
        assert qb == pytest.approx(q, rel=1e-12)
        assert g1b == pytest.approx(g1, rel=1e-12)
        assert g2b == pytest.approx(g2, rel=1e-12)
        assert g3b == g3


def test_bare_coupling_examples():
    p = PhysicalParams(omega=1.0, q_ph=1.0, gamma1_ph=0.0, gamma2_ph=0.0,
                       gamma3=0.0, n_oscillators=100, varsigma=4.0)
    assert p.q_bare == pytest.approx(5.0, rel=1e-15)
    p2 = PhysicalParams(omega=1.0, q_ph=3.0, gamma1_ph=0.0, gamma2_ph=0.0,
                        gamma3=0.0, n_oscillators=17, varsigma=17.0)
    assert p2.q_bare == pytest.approx(3.0, rel=1e-15)


def test_coupling_identity_independent_of_n(rng):
    # q_ph / sqrt(varsigma) == q_bare / sqrt(N) for any draw.
    for _ in range(50):
        n = int(rng.integers(1, 10**7))
        vs = rng.uniform(0.5, n)
        q_ph = rng.uniform(0.1, 10.0)
        p = PhysicalParams(omega=1.0, q_ph=q_ph, gamma1_ph=1.0, gamma2_ph=1.0,
                           gamma3=1.0, n_oscillators=n, varsigma=vs)
        lhs = p.q_ph / math.sqrt(p.varsigma)
        rhs = p.q_bare / math.sqrt(p.n_oscillators)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_thermodynamic_contract_doubling_n():
    p = PhysicalParams(omega=1.0, q_ph=2.0, gamma1_ph=3.0, gamma2_ph=4.0,
                       gamma3=5.0, n_oscillators=1000, varsigma=40.0)
    doubled = p.replace(n_oscillators=2000)
    assert doubled.z == p.z / 2.0
    # Physical quantities are untouched; only the bare ones move.
    assert (doubled.q_ph, doubled.gamma1_ph, doubled.gamma2_ph,
            doubled.gamma3) == (p.q_ph, p.gamma1_ph, p.gamma2_ph, p.gamma3)
    assert doubled.q_bare == pytest.approx(math.sqrt(2.0) * p.q_bare, rel=1e-12)


def test_params_validation():
    good = dict(omega=1.0, q_ph=1.0, gamma1_ph=1.0, gamma2_ph=1.0, gamma3=1.0,
                n_oscillators=10, varsigma=5.0)
    PhysicalParams(**good)
    for bad in (dict(good, varsigma=0.0), dict(good, varsigma=11.0),
                dict(good, n_oscillators=0), dict(good, q_ph=-1.0),
                dict(good, omega=math.nan), dict(good, mode_ratio=0.0),
                dict(good, hbar=0.0)):
        with pytest.raises(ParameterError):
            PhysicalParams(**bad)


def test_config_parsing_and_unknown_keys():
    cfg = {"omega": 1.0, "q_ph": 2.0, "gamma1_ph": 3.0, "gamma2_ph": 4.0,
           "gamma3": 5.0, "N": 7, "varsigma": 3.5}
    p = params_from_config(cfg)
    assert p.n_oscillators == 7 and p.varsigma == 3.5 and p.mode_ratio is None
    with pytest.raises(ParameterError):
        params_from_config(dict(cfg, extra_key=1.0))
    with pytest.raises(ParameterError):
        params_from_config({k: v for k, v in cfg.items() if k != "gamma3"})
    with pytest.raises(ParameterError):
        params_from_config(dict(cfg, N=7.5))


def test_vacuum_spectrum_invariants():
    spec = VacuumSpectrum.from_mapping({1.0: 0.5, 3.0: 0.5})
    assert spec.z_max == 0.5
    chi = dict(spec.chi())
    assert chi[1.0] == 1.0 and chi[3.0] == 1.0
    with pytest.raises(ParameterError):
        VacuumSpectrum.from_mapping({1.0: 0.4, 3.0: 0.5})
    with pytest.raises(ParameterError):
        VacuumSpectrum(())


def test_vacuum_energy_single_mode():
    spec = VacuumSpectrum.from_mapping({2.5: 1.0})
    assert vacuum_energy(spec, 2) == pytest.approx(2.5, rel=1e-15)


def test_vacuum_energy_two_equal_modes():
    spec = VacuumSpectrum.from_mapping({1.0: 0.5, 3.0: 0.5})
    assert vacuum_energy(spec, 1) == pytest.approx(1.0, rel=1e-15)


def test_vacuum_energy_brute_force_oracle(rng):
    freqs = rng.uniform(0.1, 50.0, size=50)
    raw = rng.uniform(0.01, 1.0, size=50)
    weights = raw / raw.sum()
    # Compensate normalization rounding so the spectrum validates.
    weights[0] += 1.0 - weights.sum()
    spec = VacuumSpectrum.from_mapping(dict(zip(freqs.tolist(), weights.tolist())))
    n = 37
    hbar = 1.054e-34
    expected = 0.5 * n * sum(hbar * w * zw for w, zw in zip(freqs, weights))
    assert vacuum_energy(spec, n, hbar=hbar) == pytest.approx(expected, rel=1e-12)


def test_vacuum_energy_groupings_agree(rng):
    freqs = rng.uniform(0.1, 10.0, size=20)
    raw = rng.uniform(0.01, 1.0, size=20)
    weights = raw / raw.sum()
    weights[0] += 1.0 - weights.sum()
    spec = VacuumSpectrum.from_mapping(dict(zip(freqs.tolist(), weights.tolist())))
    n = 12
    direct = vacuum_energy(spec, n)
    z = spec.z_max
    via_cutoff = 0.5 * z * n * sum(freq * chi for freq, chi in spec.chi())
    assert direct == pytest.approx(via_cutoff, rel=1e-12)


def test_vacuum_energy_linear_in_n():
    spec = VacuumSpectrum.from_mapping({1.0: 0.25, 2.0: 0.75})
    e1 = vacuum_energy(spec, 1)
    for n in (2, 5, 100):
        assert vacuum_energy(spec, n) == pytest.approx(n * e1, rel=1e-12)
