"""Acceptance suite: one test per release criterion.

Each test prints a single ``ACCEPTANCE <name>: PASS|FAIL`` line (visible
with ``pytest -s``) and asserts the same condition, so the printed verdict
always matches the pytest outcome.

Two criteria are currently red; both are documented in the README under
"Known acceptance failures" and pin externally documented expectations
that the faithfully assembled model reproducibly contradicts.
"""

from __future__ import annotations

import math
import time

import numpy as np

from ptlattice import (
    IDENTITY_RAY,
    TAU_Z,
    GainRay,
    LatticeSpec,
    RingSpec,
    ScalarLatticeSpec,
    SpinMatrix,
    TunnelingProfile,
    assemble_hamiltonian,
    assemble_scalar_hamiltonian,
    check_pt_symmetry,
    classify_spectrum,
    constant_profile,
    decompose,
    eigenvalues,
    find_threshold,
    multiset_distance,
    phase_diagram,
    ring_threshold_bisection,
    ring_threshold_formula,
    sector_threshold_min,
    threshold_along_ray,
    verify_direct_sum,
)


def verdict(name: str, ok: bool, detail: str = "") -> bool:
    line = f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line)
    return ok


def uniform_scalar_family(n: int, site: int, t: float = 1.0):
    bonds = (t,) * (n - 1)

    def spec_at(gamma: float) -> ScalarLatticeSpec:
        return ScalarLatticeSpec(n, "open", bonds, site, gamma)

    return spec_at


def sample_mirrored_profile(rng, n, boundary, top=1.0, flip=True, split=False):
    half = {}
    for k in range(1, n // 2 + 1):
        s = rng.uniform(0.2, top)
        x = rng.uniform(0.0, 1.0) * s if flip and rng.random() < 0.7 else 0.0
        z = rng.uniform(-1.0, 1.0) * s if split and rng.random() < 0.5 else 0.0
        half[k] = SpinMatrix(s=s, x=x, z=z)
    bonds = [half[min(k, n - k)] for k in range(1, n)]
    if boundary == "periodic":
        s = rng.uniform(0.2, top)
        bonds.append(SpinMatrix(s=s, x=rng.uniform(0.0, 1.0) * s if flip else 0.0))
    return TunnelingProfile(n, boundary, tuple(bonds))


def test_acceptance_odd_chain_edge_threshold():
    start = time.perf_counter()
    base = LatticeSpec(constant_profile(41, 1.0, 0.0), 1, TAU_Z.direction, 0.0)
    result = threshold_along_ray(base, TAU_Z, tolerance=1e-4)
    elapsed = time.perf_counter() - start
    documented = math.sqrt(1 + 1 / 41)
    exact_form = math.sqrt((41 + 1) / (41 - 1))
    ok = (
        result.converged
        and abs(result.gamma_pt - documented) <= 2e-3
        and elapsed < 10.0
    )
    verdict(
        "odd-chain-edge-threshold",
        ok,
        f"gamma_pt={result.gamma_pt:.6f}, documented={documented:.6f}, "
        f"elapsed={elapsed:.2f}s",
    )
    assert ok, (
        f"bisection gives gamma_pt={result.gamma_pt:.6f}, which is "
        f"sqrt((N+1)/(N-1))={exact_form:.6f} for N=41, not the documented "
        f"sqrt(1+1/N)={documented:.6f}; the two agree only to first order "
        "in 1/N. See README 'Known acceptance failures' for the analysis; "
        "the computed value is reproducible and independently verified."
    )


def test_acceptance_dimer_oracle():
    result = find_threshold(uniform_scalar_family(2, 1), scale=1.0)
    ok = result.converged and abs(result.gamma_pt - 1.0) <= 1e-4
    verdict("dimer-oracle", ok, f"gamma_pt={result.gamma_pt:.6f}")
    assert ok


def test_acceptance_direct_sum_equivalence():
    rng = np.random.default_rng(20240501)
    start = time.perf_counter()
    worst = 0.0
    for i in range(50):
        n = int(rng.integers(2, 17))
        boundary = "open" if i % 2 == 0 else "periodic"
        profile = sample_mirrored_profile(rng, n, boundary, top=1.5)
        site = int(rng.integers(1, n // 2 + 1))
        gamma_s = rng.uniform(0.0, 1.0)
        gamma_d = rng.uniform(0.0, 1.0) * gamma_s
        gain = SpinMatrix(s=gamma_s, x=gamma_d) if gamma_s > 0 else SpinMatrix(s=1.0)
        spec = LatticeSpec(profile, site, gain, rng.uniform(0.0, 2.0))
        report = verify_direct_sum(spec)
        worst = max(worst, report.max_multiset_distance)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 30.0
    verdict(
        "direct-sum-equivalence",
        ok,
        f"worst distance={worst:.3e} over 50 specs, elapsed={elapsed:.2f}s",
    )
    assert ok


def test_acceptance_threshold_consistency():
    rng = np.random.default_rng(20240502)
    worst = 0.0
    for i in range(20):
        n = int(rng.integers(3, 13))
        boundary = "open" if i % 2 == 0 else "periodic"
        profile = sample_mirrored_profile(rng, n, boundary, top=1.0)
        site = int(rng.integers(1, n // 2 + 1))
        gamma_s = rng.uniform(0.2, 1.0)
        gamma_d = rng.uniform(0.0, 1.0) * gamma_s
        ray = GainRay.from_components(s=gamma_s, x=gamma_d)
        base = LatticeSpec(profile, site, ray.direction, 0.0)
        full = threshold_along_ray(base, ray)
        sector = sector_threshold_min(base, ray)
        assert full.converged, (i, full)
        worst = max(worst, abs(full.gamma_pt - sector))
    ok = worst <= 2e-4
    verdict("threshold-consistency", ok, f"worst route gap={worst:.3e}")
    assert ok


def test_acceptance_symmetric_gain_plus_sector():
    rng = np.random.default_rng(20240503)
    worst_gap = 0.0
    worst_imag = 0.0
    for i in range(5):
        n = int(rng.integers(4, 13))
        profile = sample_mirrored_profile(
            rng, n, "open" if i % 2 == 0 else "periodic", top=1.0
        )
        site = int(rng.integers(1, n // 2 + 1))
        ray = GainRay.from_components(s=1.0, x=1.0)
        base = LatticeSpec(profile, site, ray.direction, 0.0)
        parts = decompose(LatticeSpec(profile, site, ray.direction, 1.0))
        assert parts.minus.impurity_strength == 0.0
        unit = parts.plus.impurity_strength

        def plus_at(gamma, template=parts.plus, unit=unit):
            return ScalarLatticeSpec(
                template.n_sites,
                template.boundary,
                template.bonds,
                template.impurity_site,
                gamma * unit,
            )

        full = threshold_along_ray(base, ray)
        plus_only = find_threshold(plus_at, scale=profile.scale)
        worst_gap = max(worst_gap, abs(full.gamma_pt - plus_only.gamma_pt))
        for gamma in (0.5, 2.0, 7.5):
            hermitian = ScalarLatticeSpec(
                parts.minus.n_sites,
                parts.minus.boundary,
                parts.minus.bonds,
                parts.minus.impurity_site,
                gamma * parts.minus.impurity_strength,
            )
            w = eigenvalues(assemble_scalar_hamiltonian(hermitian))
            worst_imag = max(worst_imag, float(np.max(np.abs(w.imag))))
    ok = worst_gap <= 2e-4 and worst_imag <= 1e-10
    verdict(
        "symmetric-gain-plus-sector",
        ok,
        f"worst threshold gap={worst_gap:.3e}, worst minus-sector "
        f"imag={worst_imag:.3e}",
    )
    assert ok


def test_acceptance_ring_distance_independence():
    ring_at = lambda m: RingSpec(12, m, SpinMatrix(s=1.0), SpinMatrix(s=0.5))
    formula = ring_threshold_formula(ring_at(1))
    values = []
    for m in range(1, 7):
        result = ring_threshold_bisection(ring_at(m))
        assert result.converged, (m, result)
        values.append(result.gamma_pt)
    spread = max(values) - min(values)
    ok = spread < 2e-4 and formula == 0.5 and abs(values[0] - formula) <= 1e-2
    verdict(
        "ring-distance-independence",
        ok,
        f"spread={spread:.3e}, formula={formula}, bisection={values[0]:.6f}",
    )
    assert ok


def test_acceptance_u_curve_maximum():
    details = []
    ok = True
    for t_s, t_d in ((1.0, 0.0), (1.0, 0.4)):
        profile = constant_profile(20, t_s, t_d)
        diagram = phase_diagram(profile, IDENTITY_RAY)
        peak = max(row.result.gamma_pt for row in diagram.rows)
        ok = ok and abs(peak - (t_s - t_d)) <= 2e-3
        details.append(f"t_d={t_d}: max={peak:.5f} vs {t_s - t_d}")
    verdict("u-curve-maximum", ok, "; ".join(details))
    assert ok


def test_acceptance_phase_diagram_sweeps():
    start = time.perf_counter()
    ratios = (0.0, 0.4, 0.7)
    sweeps = {}
    for n in (40, 41):
        for ratio in ratios:
            profile = constant_profile(n, 1.0, ratio)
            workers = 4 if ratio == 0.0 else 1
            diagram = phase_diagram(profile, TAU_Z, workers=workers)
            assert all(row.result.converged for row in diagram.rows)
            sweeps[(n, ratio)] = [row.result.gamma_pt for row in diagram.rows]

    pointwise = 0.0
    for n in (40, 41):
        scalar = [
            find_threshold(uniform_scalar_family(n, m), scale=1.0).gamma_pt
            for m in range(1, n // 2 + 1)
        ]
        pointwise = max(
            pointwise,
            max(abs(a - b) for a, b in zip(sweeps[(n, 0.0)], scalar)),
        )

    means = {n: [float(np.mean(sweeps[(n, r)])) for r in ratios] for n in (40, 41)}
    decreasing = {n: means[n][0] > means[n][1] > means[n][2] for n in (40, 41)}
    elapsed = time.perf_counter() - start

    ok_pointwise = pointwise <= 1e-4
    ok_means = decreasing[40] and decreasing[41]
    ok = ok_pointwise and ok_means and elapsed < 600.0
    verdict(
        "phase-diagram-sweeps",
        ok,
        f"pointwise gap={pointwise:.2e}, means N=40="
        f"{[round(v, 4) for v in means[40]]}, N=41="
        f"{[round(v, 4) for v in means[41]]}, elapsed={elapsed:.1f}s",
    )
    assert ok, (
        f"mean thresholds across flip ratios {ratios}: N=40 {means[40]} "
        f"(strictly decreasing: {decreasing[40]}), N=41 {means[41]} "
        f"(strictly decreasing: {decreasing[41]}). The N=40 means are "
        "reproducibly non-monotonic: the flip ratio 0.4 splits the lattice "
        "into sector chains with couplings 1.4 and 0.6 whose level sets "
        "nearly cross (smallest parity-allowed gap 1.3e-3, versus 2.6e-2 "
        "at ratio 0.7), so thresholds are suppressed far more at 0.4 than "
        "at 0.7. See README 'Known acceptance failures'."
    )


def test_acceptance_invariant_suite():
    rng = np.random.default_rng(20240504)
    for i in range(200):
        n = int(rng.integers(2, 15))
        boundary = "open" if i % 2 == 0 else "periodic"
        profile = sample_mirrored_profile(
            rng, n, boundary, top=1.5, split=bool(i % 3 == 0)
        )
        site = int(rng.integers(1, n // 2 + 1))
        gain = SpinMatrix(
            s=rng.uniform(0.0, 1.0), x=rng.uniform(0.0, 1.0), z=rng.uniform(0.0, 1.0)
        )
        if gain.is_zero:
            gain = SpinMatrix(s=1.0)
        scale = 0.0 if i % 4 == 0 else rng.uniform(0.0, 2.0)
        spec = LatticeSpec(profile, site, gain, scale)
        h = assemble_hamiltonian(spec)
        assert check_pt_symmetry(h, n), i
        w = eigenvalues(h)
        assert multiset_distance(w, np.conj(w)) <= 1e-8, i
        assert abs(np.sum(w) - np.trace(h)) <= 1e-8, i
        if scale == 0.0:
            assert np.max(np.abs(w.imag)) <= 1e-10, i
        if boundary == "open":
            assert multiset_distance(w, -w) <= 1e-8, i
    verdict("invariant-suite", True, "200 randomized lattices")


def test_acceptance_bound_violations_break():
    rng = np.random.default_rng(20240505)
    checked = 0
    for _ in range(20):
        n = int(rng.integers(4, 17))
        t_s = rng.uniform(0.5, 1.5)
        t_d = rng.uniform(0.0, 0.8) * t_s
        ratio = rng.uniform(1.5, 2.5)
        r = rng.uniform(0.0, 1.0)
        gamma_s = ratio * (t_s + t_d) / (1.0 + r)
        gamma_d = r * gamma_s
        profile = constant_profile(n, t_s, t_d)
        for m in range(1, n // 2 + 1):
            spec = LatticeSpec(profile, m, SpinMatrix(s=gamma_s, x=gamma_d), 1.0)
            spectrum = classify_spectrum(
                eigenvalues(assemble_hamiltonian(spec)), spec.scale
            )
            assert not spectrum.is_unbroken, (n, m, t_s, t_d, gamma_s, gamma_d)
            checked += 1
    verdict("bound-violations-break", True, f"{checked} lattice/site pairs broken")
