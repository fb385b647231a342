import json
import math

import numpy as np
import pytest

import spinchain as sc


def test_coupling_and_kac():
    j, kac = sc.coupling_matrix(sc.ModelSpec.power_law(4, 1.0, 1.0))
    assert np.allclose(j, j.T)
    assert j[0, 2] == pytest.approx(0.5)
    pairs = [1.0 / abs(m - n) for m in range(4) for n in range(m + 1, 4)]
    assert kac == pytest.approx(sum(pairs) / 4)


def test_sector_and_neel():
    assert sc.sector_dimension(12, 6) == 924
    states = sc.sector_states(6, 3)
    assert len(states) == 20 and states == sorted(states)
    assert sc.neel_mask(4) == 0b1010
    psi = sc.neel_state(4)
    assert np.count_nonzero(psi) == 1


def test_evolution_is_unitary_and_engines_agree():
    spec = sc.ModelSpec.power_law(8, 1.0, 0.5)
    psi0 = sc.neel_state(8)
    times = [0.0, 0.5, 1.0, 2.0]
    dense = sc.evolve(spec, 4, psi0, times, engine="dense")
    krylov = sc.evolve(spec, 4, psi0, times, engine="krylov")
    assert dense.shape == (4, 70)
    assert np.allclose(np.linalg.norm(dense, axis=1), 1.0, atol=1e-12)
    assert np.max(np.abs(dense - krylov)) < 1e-9


def test_single_excitation_matches_onebody_propagator():
    spec = sc.ModelSpec.power_law(6, 1.0, 2.0)
    psi = sc.evolve(spec, 1, sc.single_excitation_state(6, 2), [0.7])[0]
    u = sc.onebody_propagator(spec, 0.7)
    assert np.max(np.abs(psi - u[:, 2])) < 1e-10


def test_entropy_table_and_tmi():
    spec = sc.ModelSpec.nearest_neighbour(8)
    psi = sc.evolve(spec, 4, sc.neel_state(8), [1.3])[0]
    table = sc.entropy_table(8, 4, psi)
    assert table.shape == (256,)
    assert table[0] == 0.0
    for m in (1, 0b1100, 0b10101):
        assert table[m] == pytest.approx(table[255 ^ m], abs=1e-12)
        assert table[m] == pytest.approx(sc.entanglement_entropy(8, 4, psi, m), abs=1e-12)
    a, b, c = sc.contiguous_quarters(8)
    assert sc.tmi(table, a, b, c) == pytest.approx(-sc.monogamy_gap(table, a, b, c), abs=1e-12)
    d = 255 ^ (a | b | c)
    assert sc.tmi(table, a, b, c) == pytest.approx(sc.tmi(table, b, c, d), abs=1e-9)
    assert sc.mutual_information(table, a, b) >= -1e-9


def test_binary_entropy_route():
    assert sc.binary_entropy(0.5) == pytest.approx(1.0)
    assert sc.tmi_binary(0.25, 0.25, 0.25) == pytest.approx(4 * sc.binary_entropy(0.25) - 3, abs=1e-12)
    assert sc.tmi_binary(0.0, 0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        sc.binary_entropy(1.5)


def test_partitions_and_minmax():
    assert sc.all_assignments_count(4) == 10
    parts = sc.enumerate_partitions(4, "all")
    assert parts.shape == (10, 3)
    assert len(sc.enumerate_partitions(8, "contiguous")) == math.comb(7, 2) + math.comb(7, 3)
    psi = sc.neel_state(6)
    table = sc.entropy_table(6, 3, psi)
    ext = sc.minmax_tmi(table, sc.enumerate_partitions(6, "all"))
    assert ext["min"] == 0.0 and ext["max"] == 0.0
    with pytest.raises(MemoryError):
        sc.enumerate_partitions(17, "all")


def test_tau_and_lightcone():
    assert sc.tau_sign_change([0, 1, 2], [0.0, 0.5, -0.5]) == pytest.approx(1.5)
    assert sc.tau_sign_change([0, 1], [0.0, 0.1]) is None
    a, b, c = sc.contiguous_quarters(16)
    assert sc.lightcone_onset(sc.ModelSpec.nearest_neighbour(16), a, b, c) == pytest.approx(5 / 4)


def test_onebody_scan_nonnegative():
    out = sc.onebody_scan(sc.ModelSpec.power_law(8, 1.0, 0.5), 4, list(np.linspace(0, 3, 7)))
    assert out["global_min"] >= -1e-10
    assert out["extrema"][0]["min"] == 0.0 and out["extrema"][0]["max"] == 0.0
    assert np.allclose(np.sum(out["occupations"], axis=1), 1.0)


def test_run_in_process():
    res = sc.run("tmi-grid", {"n-sites": "8", "alpha": "1.0,nn", "t-max": "2", "n-points": "5"})
    ds = res["datasets"]["tmi_grid"]
    assert ds["columns"][:3] == ["alpha", "nn_limit", "t"]
    assert len(ds["rows"]) == 10
    meta = json.loads(ds["meta"])
    assert meta["partitions"] == "quarters" and len(meta["config_hash"]) == 16
    assert res["failure"] is None
    with pytest.raises(ValueError):
        sc.run("tmi-grid", {"n-sites": "8", "alpha": "1.0"})
