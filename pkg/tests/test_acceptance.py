"""Exit criteria for the simulator.

Each test prints one ``PASS``/``FAIL`` line naming its criterion. Run with
``pytest tests/test_acceptance.py -v``; the lines appear even without ``-s``.
"""
import math
from dataclasses import replace

import numpy as np
import pytest

from rispls import cli
from rispls.channel import LinkBudget, cascaded_channel, dbm_to_watts, path_loss_linear, sample_batch
from rispls.config import apply_overrides, load, to_scenario
from rispls.geometry import Topology
from rispls.metrics import outage_indicator, secrecy_rate
from rispls.montecarlo import ScenarioConfig, argbest, run_scenario, sweep
from rispls.ris import optimal_phase_array, quantize_phase_array

SEED = 20240601


def report(capsys, criterion: str, ok: bool, detail: str = "") -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}" + (f": {detail}" if detail else ""))
    assert ok, f"{criterion}: {detail}"


def separated_above(a, b) -> bool:
    """a lies above b with non-overlapping 95% intervals."""
    return a.ci_low > b.ci_high


def run_preset(name, trials=None):
    exp = load(name)
    overrides = [("seed", SEED)]
    if trials is not None:
        overrides.append(("trials", trials))
    exp = apply_overrides(exp, overrides)
    return exp, cli.run_experiment(exp)


def series_index(exp, **match):
    for i, s in enumerate(exp.series):
        if all(s.get(k) == v for k, v in match.items()):
            return i
    raise KeyError(match)


@pytest.fixture(scope="module")
def fig5b():
    return run_preset("fig5b", trials=10_000)


@pytest.fixture(scope="module")
def fig5d():
    return run_preset("fig5d", trials=100_000)


@pytest.fixture(scope="module")
def fig5e():
    return run_preset("fig5e", trials=10_000)


def test_c01_ris_benefit(fig5b, capsys):
    exp, sweeps = fig5b
    bad = []
    for alpha in (2.5, 3.0):
        with_ris = sweeps[series_index(exp, alpha=alpha, include_ris=True)].rates
        direct = sweeps[series_index(exp, alpha=alpha, include_ris=False)].rates
        for theta, a, b in zip(exp.sweep_values, with_ris, direct):
            if not separated_above(a, b):
                bad.append((alpha, theta))
    report(capsys, "C1 RIS benefit (fig5b, 1e4 trials)", not bad, f"violations {bad}" if bad else "14/14 points separated")


def test_c02_alpha_ordering(fig5b, capsys):
    exp, sweeps = fig5b
    bad = []
    for ris in (True, False):
        lo = sweeps[series_index(exp, alpha=3.0, include_ris=ris)].rates
        hi = sweeps[series_index(exp, alpha=2.5, include_ris=ris)].rates
        for theta, a, b in zip(exp.sweep_values, hi, lo):
            if not separated_above(a, b):
                bad.append((ris, theta))
    report(capsys, "C2 alpha=3.0 below alpha=2.5 (fig5b)", not bad, f"violations {bad}" if bad else "all points separated")


def test_c03_theta_degradation(fig5b, capsys):
    exp, sweeps = fig5b
    values = list(exp.sweep_values)
    details, ok = [], True
    for alpha in (2.5, 3.0):
        rates = sweeps[series_index(exp, alpha=alpha, include_ris=True)].rates
        r0, r60 = rates[values.index(0.0)], rates[values.index(60.0)]
        ok &= separated_above(r0, r60)
        details.append(f"alpha={alpha}: {r0.mean:.3f} -> {r60.mean:.3f}")
    report(capsys, "C3 rate(60deg) < rate(0deg) with RIS", ok, "; ".join(details))


def _monotone_with_overlap(ests, direction: int) -> tuple[bool, list]:
    bad = []
    for i, (a, b) in enumerate(zip(ests, ests[1:])):
        violated = (b.mean - a.mean) * direction < 0
        if violated and not a.overlaps(b):
            bad.append(i)
    ends = separated_above(ests[-1], ests[0]) if direction > 0 else separated_above(ests[0], ests[-1])
    return not bad and ends, bad


def test_c04_n_monotonicity(fig5d, capsys):
    exp, sweeps = fig5d
    ok, notes = True, []
    for i, s in enumerate(sweeps):
        rate_ok, rb = _monotone_with_overlap(s.rates, +1)
        out_ok, ob = _monotone_with_overlap(s.outages, -1)
        ok &= rate_ok and out_ok
        notes.append(
            f"{exp.series_label(i)}: rate {s.rates[0].mean:.2f}->{s.rates[-1].mean:.2f}, "
            f"outage {s.outages[0].mean:.3f}->{s.outages[-1].mean:.3f}"
            + (f" bad rate steps {rb} outage steps {ob}" if (rb or ob) else "")
        )
    report(capsys, "C4 N monotonicity (fig5c/d, 1e5 trials)", ok, " | ".join(notes))


def test_c05_three_bits_suffice(capsys):
    exp = load("fig5c")
    base = replace(to_scenario(exp.point(0, 50)), seed=SEED)
    s = sweep(base, "quantization_bits", [1, 2, 3, None])
    r1, r2, r3, rc = (e.mean for e in s.rates)
    gap = abs(r3 - rc)
    ok = gap <= 0.1 and rc >= r3 >= r2 >= r1
    report(
        capsys,
        "C5 3-bit within 0.1 of continuous at N=50",
        ok,
        f"1b={r1:.4f} 2b={r2:.4f} 3b={r3:.4f} cont={rc:.4f} gap={gap:.4f}",
    )


def test_c06_optimal_placement(capsys):
    base = ScenarioConfig(
        topology=Topology(20.0, 30.0, 40.0, 0.0),
        budget=LinkBudget(alpha=2.5),
        n_elements=50,
        quantization_bits=3,
        r_th=3.0,
        trials=100_000,
        seed=SEED,
    )
    grid = [float(x) for x in range(0, 61, 5)]
    s = sweep(base, "theta", [math.radians(x) for x in grid])
    best_rate = math.degrees(argbest(s, "max-rate"))
    best_out = math.degrees(argbest(s, "min-outage"))
    ok = abs(best_rate - 25) <= 5 + 1e-9 and abs(best_out - 30) <= 5 + 1e-9
    report(
        capsys,
        "C6 argbest theta: max-rate 25+-5, min-outage 30+-5",
        ok,
        f"max-rate at {best_rate:g} deg, min-outage at {best_out:g} deg",
    )


def test_c07_eavesdropper_distance(fig5e, capsys):
    exp, sweeps = fig5e
    bad = []
    for alpha in (2.5, 3.0):
        near = sweeps[series_index(exp, d_te_m=30.0, alpha=alpha)].rates
        far = sweeps[series_index(exp, d_te_m=35.0, alpha=alpha)].rates
        for theta, a, b in zip(exp.sweep_values, far, near):
            if a.mean < b.mean and not a.overlaps(b):
                bad.append((alpha, theta))
    report(capsys, "C7 rate(d_te=35) >= rate(d_te=30) at every theta", not bad, f"violations {bad}" if bad else "no violations")


def test_c08_coherent_combining(capsys):
    ns = [16, 32, 64, 128, 256, 512]
    base = ScenarioConfig(
        topology=Topology(20.0, 30.0, 40.0, math.radians(10)),
        include_direct=False,
        trials=2000,
        seed=SEED,
    )
    s = sweep(base, "n_elements", ns)
    gamma = [r.gamma_rx.mean for r in s.results]
    slope = np.polyfit(np.log(ns), np.log(gamma), 1)[0]

    real = sample_batch(SEED, 0, 10_000, 16)
    aligned = cascaded_channel(real.h, real.g_rx, optimal_phase_array(real.h, real.g_rx), 1.0, 1.0)
    per_element = float(np.mean(aligned.real / 16))
    rel = abs(per_element / (math.pi / 4) - 1)
    ok = 1.8 <= slope <= 2.1 and rel <= 0.01
    report(
        capsys,
        "C8 coherent combining: slope in [1.8, 2.1], mean |h g| within 1% of pi/4",
        ok,
        f"slope={slope:.4f}, mean={per_element:.5f} (rel err {rel:.4%})",
    )


def test_c09_quantization_sinc_law(capsys):
    n = 256
    real = sample_batch(SEED, 0, 1000, n)
    phases = optimal_phase_array(real.h, real.g_rx)
    continuous = float(np.mean(np.sum(np.abs(real.h * real.g_rx), axis=-1)))
    ok, notes = True, []
    for b in (1, 2, 3):
        q = quantize_phase_array(phases, b)
        amp = float(np.mean(np.abs(cascaded_channel(real.h, real.g_rx, q, 1.0, 1.0))))
        ratio = amp / continuous
        expected = (2**b / math.pi) * math.sin(math.pi / 2**b)
        err = abs(ratio / expected - 1)
        ok &= err <= 0.01
        notes.append(f"b={b}: {ratio:.4f} vs {expected:.4f} ({err:.3%})")
    report(capsys, "C9 quantization amplitude ratio within 1% of sinc law", ok, "; ".join(notes))


@pytest.mark.parametrize("preset", ["fig5b", "fig5c", "fig5d", "fig5e", "fig5f"])
def test_c10_determinism(preset, tmp_path, capsys):
    a, b = tmp_path / "serial", tmp_path / "parallel"
    args = ["run", preset, "--seed", str(SEED), "--trials", "5000"]
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b), "--workers", "2"]) == 0
    same_csv = (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()

    exp = apply_overrides(load(preset), [("seed", SEED), ("trials", 5000)])
    cfg = exp.base_config(0)
    bitwise = run_scenario(cfg) == run_scenario(cfg, workers=2)
    report(capsys, f"C10 determinism ({preset})", same_csv and bitwise, f"csv identical={same_csv}, serial==parallel={bitwise}")


def test_c11_unit_checks(capsys):
    checks = {
        "path_loss(1 m) == 1e-3": path_loss_linear(1.0, LinkBudget()) == 1e-3,
        "dbm_to_watts(20) == 0.1": dbm_to_watts(20) == 0.1,
        "secrecy_rate(3, 1) == 1": secrecy_rate(3, 1) == 1.0,
        "secrecy_rate(1, 3) == 0": secrecy_rate(1, 3) == 0.0,
        "secrecy_rate(g, g) == 0": secrecy_rate(7.5, 7.5) == 0.0,
        "outage(3.0, 2.5) == 0": outage_indicator(3.0, 2.5) == 0,
        "outage(2.0, 2.5) == 1": outage_indicator(2.0, 2.5) == 1,
        "outage(c, 0) == 0": outage_indicator(0.0, 0.0) == 0,
    }
    failed = [k for k, v in checks.items() if not v]
    report(capsys, "C11 unit checks", not failed, f"failed {failed}" if failed else f"{len(checks)} checks")
