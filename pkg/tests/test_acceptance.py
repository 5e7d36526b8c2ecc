"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with its runtime.

Run ``pytest tests/test_acceptance.py -v``; the lines are repeated in the terminal summary.
"""
import math
import random
import time
import numpy as np
import pytest

from siegelren import circle, cli, combinat, dynplane, paramplane, raster, rotnum
from siegelren.rotnum import RotationNumber as R

RESULTS: list[str] = []

GOLDEN_TRIANGULATION_PIN = 1.618034
SILVER_TRIANGULATION_PIN = 1.414214


def report(n: int, title: str, ok: bool, detail: str, elapsed: float, budget: float):
    within = elapsed < budget
    line = f"{'PASS' if ok and within else 'FAIL'} criterion {n:2d} {title}: {detail} [{elapsed:.2f}s / {budget:g}s]"
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_01_prime_renormalization():
    rng = random.Random(20240601)
    with Timer() as t:
        mismatches = 0
        for _ in range(100_000):
            q = rng.randint(2, 10_000)
            p = rng.randrange(1, q)
            x = R.rational(p, q)
            if rotnum.cf_prime_step(x) != rotnum.prime_renormalize(x):
                mismatches += 1
        golden = rotnum.orbit_signature(rotnum.golden())
        silver = rotnum.orbit_signature(rotnum.silver())
    ok = mismatches == 0 and (golden.kind, golden.period) == ("periodic", 2) and (silver.kind, silver.period) == ("periodic", 4)
    report(1, "prime renormalization", ok,
           f"{mismatches} mismatches in 1e5; golden period {golden.period}, silver period {silver.period}", t.elapsed, 5)


def test_criterion_02_return_time_congruences():
    with Timer() as t:
        bad, pairs = 0, 0
        for q in range(3, 1001):
            ps, words = combinat.build_seq_block(q)
            counts = np.count_nonzero(words, axis=1)
            for p, n_a in zip(ps.tolist(), counts.tolist()):
                rt = rotnum.return_times(p, q)
                pairs += 1
                if rt.a + rt.b != q or (p * rt.a) % q != q - 1 or (p * rt.b) % q != 1:
                    bad += 1
                elif n_a != rt.a or q - n_a != rt.b:
                    bad += 1
    report(2, "return-time congruences", bad == 0, f"{pairs} coprime pairs, {bad} failures", t.elapsed, 10)


def test_criterion_03_word_invariants():
    with Timer() as t:
        bad, words_checked = 0, 0
        for q in range(3, 2001):
            ps, words = combinat.build_seq_block(q)
            bad += int(combinat.block_violations(q, ps, words).sum())
            words_checked += len(ps)
        exact = combinat.build_seq(1, 3).letters == "AAB" and combinat.build_seq(2, 3).letters == "ABB"
    report(3, "word invariants", bad == 0 and exact,
           f"{words_checked} words, {bad} violating; seq(1,3)=AAB, seq(2,3)=ABB: {exact}", t.elapsed, 30)


def test_criterion_04_jump_identities():
    rng = random.Random(7)
    with Timer() as t:
        failures = 0
        mixed_ok = True
        for i in range(100):
            # half congruence words, half arbitrary letter strings
            if i % 2:
                w = combinat.PacWord("".join(rng.choice("AB") for _ in range(rng.randint(1, 200))))
            else:
                q = rng.randint(3, 200)
                w = combinat.build_seq(rng.choice([p for p in range(1, q) if math.gcd(p, q) == 1]), q)
            for j in range(-10_000, 10_001):
                nu, mu, ka = combinat.jump_stats(w, j)
                if nu + mu + ka != j or combinat.total_jump(w, j) != nu - mu:
                    failures += 1
            if combinat.is_mixed(w) and not combinat.kappa_divergence_check(w, 10_000):
                mixed_ok = False
        all_a = not combinat.kappa_divergence_check(combinat.PacWord("A"), 10_000)
    ok = failures == 0 and mixed_ok and all_a
    report(4, "jump identities", ok,
           f"{failures} identity failures; kappa diverges on mixed words: {mixed_ok}; fails on all-A: {all_a}", t.elapsed, 10)


def test_criterion_05_fast_renormalization_oracle():
    rng = random.Random(99)
    with Timer() as t:
        disagree, tested = 0, 0
        while tested < 200:
            pre = [rng.randint(1, 5) for _ in range(rng.randint(0, 3))]
            per = [rng.randint(1, 5) for _ in range(rng.randint(1, 4))]
            x = R.quadratic(pre, per, rng.choice([rotnum.DIRECT, rotnum.COMPLEMENT]))
            if not rotnum.is_bounded_type(x, 5):
                continue
            tested += 1
            ind = circle.induced_rotation_number(x, q_probe=200)
            if not ind.contains(float(rotnum.fast_renormalize(x))):
                disagree += 1
        unit = all(rotnum.fast_step_count(R.rational(1, m)) == m - 1 for m in range(2, 51))
        unit_flow = all(rotnum.fast_renormalize(R.rational(1, m)) == R.rational(0) for m in range(2, 51))
    ok = disagree == 0 and unit and unit_flow
    report(5, "fast renormalization oracle", ok,
           f"{disagree}/200 disagreements; n(1/m)=m-1 for m=2..50: {unit}", t.elapsed, 60)


def test_criterion_06_triangulation_comparability():
    with Timer() as t:
        g = max(s.ratio for s in circle.convergent_triangulations(rotnum.golden(), 10_000))
        s = max(s.ratio for s in circle.convergent_triangulations(rotnum.silver(), 10_000))
    ok = g <= 2.62 and g == pytest.approx(GOLDEN_TRIANGULATION_PIN, rel=1e-6) and s == pytest.approx(SILVER_TRIANGULATION_PIN, rel=1e-6)
    report(6, "triangulation comparability", ok, f"golden max ratio {g:.6f}, silver max ratio {s:.6f}", t.elapsed, 30)


def test_criterion_07_centers_vs_bruteforce():
    with Timer() as t:
        worst, failures = 0.0, []
        for q in range(2, 11):
            for p in range(1, q):
                if math.gcd(p, q) != 1:
                    continue
                a = paramplane.satellite_center(p, q)
                b = paramplane.center_bruteforce(p, q)
                worst = max(worst, abs(a.c - b.c))
                if abs(a.c - b.c) >= 1e-8:
                    failures.append((p, q, "oracle"))
                if abs(paramplane.multiplier_of_cycle(a.c, q, 0)) >= 1e-8:
                    failures.append((p, q, "multiplier"))
                if paramplane.period_violation(a.c, q) is not None:
                    failures.append((p, q, "period"))
        half = abs(paramplane.satellite_center(1, 2).c + 1)
    ok = not failures and half < 1e-12
    report(7, "center solver vs brute force", ok,
           f"max |solver - oracle| {worst:.2e}, failures {failures}, |a(1/2)+1| {half:.1e}", t.elapsed, 120)


def _tail_ok(rows, side, last=3):
    ratios = paramplane.same_side_ratios(rows, side)[-last:]
    return len(ratios) == last and all(abs(r - 1) < 0.05 for r in ratios), ratios


def test_criterion_08_scaling():
    with Timer() as t:
        tables = {name: paramplane.scaling_table(theta, 987, threads=1)
                  for name, theta in (("golden", rotnum.golden()), ("anti-golden", rotnum.anti_golden()))}
    ok, notes = True, []
    for name, rows in tables.items():
        errors = [r for r in rows if r.error]
        bounded = all(r.s is not None and 1e-2 <= r.s <= 1e2 for r in rows)
        tails = [_tail_ok(rows, side) for side in ("left", "right")]
        ok &= not errors and bounded and all(good for good, _ in tails)
        worst = max(abs(r - 1) for _, ratios in tails for r in ratios)
        s_last = {r.side: r.s for r in rows}
        notes.append(f"{name}: {len(rows)} rows, s in [{min(r.s for r in rows):.3f}, {max(r.s for r in rows):.3f}], "
                     f"worst tail |ratio-1| {worst:.1e}, s_left {s_last['left']:.5f}, s_right {s_last['right']:.5f}")
    limb_fractions = {(8, 21), (21, 55), (55, 144), (5, 13), (13, 34), (34, 89)}
    have = {(r.p, r.q) for r in tables["anti-golden"]}
    limbs = limb_fractions <= have
    sides = {r.side for r in tables["anti-golden"] if (r.p, r.q) in {(8, 21), (21, 55), (55, 144)}}
    sides2 = {r.side for r in tables["anti-golden"] if (r.p, r.q) in {(5, 13), (13, 34), (34, 89)}}
    ok &= limbs and len(sides) == 1 and len(sides2) == 1 and sides != sides2
    report(8, "satellite scaling", ok, "; ".join(notes) + f"; limb rows present on two sides: {limbs}", t.elapsed, 300)


def test_criterion_09_siegel():
    with Timer() as t:
        _, bounded = dynplane.siegel_critical_orbit(rotnum.golden(), 10**6)
        records = dynplane.record_return_times(rotnum.golden(), 233)
        fib = [1, 2]
        while fib[-1] + fib[-2] <= 233:
            fib.append(fib[-1] + fib[-2])
        rep = dynplane.closest_returns(rotnum.golden(), 987)
        spread = rep.cauchy_spread(3)
    ok = bounded and records == fib and spread < 0.05
    report(9, "Siegel boundedness and closest returns", ok,
           f"bounded 1e6: {bounded}; records at Fibonacci times: {records == fib}; "
           f"ratio {rep.ratio_estimates[-1]:.6f}, spread {spread:.1e}", t.elapsed, 30)


def test_criterion_10_molecule():
    with Timer() as t:
        rep = dynplane.molecule_model_checks()
        win = raster.Window(-0.4 + 0j, 3.2)
        first = dynplane.molecule_render(win, (512, 512), 200).ppm_bytes()
        second = dynplane.molecule_render(win, (512, 512), 200).ppm_bytes()
    ok = rep.ok and first == second and len(first) == len(b"P6\n512 512\n255\n") + 3 * 512 * 512
    report(10, "molecule model", ok,
           f"checks {'ok' if rep.ok else rep.lines()}; -1/3 within 1e-2 of 0 after {rep.steps_to_parabolic} steps; "
           f"render byte-stable: {first == second}", t.elapsed, 20)


DETERMINISM_RUNS = [
    ("centers", ["centers", "--qmax", "10"], "csv"),
    ("scale-golden", ["scale", "--theta", "[0;(1)]", "--qmax", "987"], "csv"),
    ("scale-anti", ["scale", "--theta", "[0;2,(1)]", "--qmax", "987"], "csv"),
    ("siegel", ["siegel", "--theta", "[0;(1)]", "--qmax", "987"], "csv"),
    ("molecule", ["molecule", "--window=-0.4,0,3.2", "--res", "512x512", "--maxiter", "200"], "ppm"),
]


def test_criterion_11_determinism(tmp_path, capsys):
    with Timer() as t:
        same = {}
        for name, argv, ext in DETERMINISM_RUNS:
            blobs = []
            for threads in ("1", "8"):
                out = tmp_path / f"{name}-{threads}.{ext}"
                code = cli.main(argv + ["--threads", threads, "--out", str(out)])
                blobs.append(out.read_bytes() if code == 0 else None)
            same[name] = blobs[0] is not None and blobs[0] == blobs[1]
    capsys.readouterr()
    ok = all(same.values())
    report(11, "determinism across thread counts", ok,
           ", ".join(f"{k}: {'identical' if v else 'DIFFERENT'}" for k, v in same.items()), t.elapsed, 600)
