"""Frequency preservation, end to end.

Oblivious finite-state selection preserves normality, and for a selector
compatible with a Markov measure it preserves genericity for that measure.
Both are asymptotic statements; here they are checked two ways: exact
counting bounds at small run lengths, and seeded statistics at desk scale.
"""

import sftselect as ss
from sftselect import fixtures

alpha = fixtures.binary_alphabet()
uniform = fixtures.uniform_binary_measure()
golden = fixtures.golden_parry_measure()

# --- exact small-scale bounds -------------------------------------------
selector = fixtures.after_ones_selector()
count, check = ss.count_output_prefix_runs(selector, "q0", 8, "01")
print(f"runs of length 8 from q0 with output prefix 01: {count} <= {check.upper}")

scan = ss.equirun_scan(selector, k=2, epsilon=0.1, n_max=20)
print(f"two-sided band holds for every (state, word) at n = {scan.witness_n}")

even = fixtures.even_positions_selector()
witness = ss.check_selector_compatibility(even, golden).witness
value, check = ss.measure_output_prefix_runs(even, golden, witness, "000", 8, "01")
print(f"measure of runs outputting 01 first: {value:.6f} <= {check.upper:.6f}")

# --- desk-scale statistics ----------------------------------------------
def experiment(sel, measure, generator_measure, n=300_000, seed=1):
    config = ss.ExperimentConfig(
        selector=sel,
        generator=ss.GeneratorSpec(
            kind=ss.MARKOV_SAMPLE, alphabet=alpha, n=n,
            measure=generator_measure, seed=seed,
        ),
        measure=measure,
        ks=(1, 2, 3),
        tolerance=0.01,
    )
    return ss.run_experiment(config)

report = experiment(selector, None, uniform)
print("\nuniform input through after_ones:")
print("  output length", report.output_length)
for k, d in report.output_discrepancies.items():
    print(f"  D_{k} vs uniform = {d:.5f}")
print("  passed:", report.passed)

report = experiment(even, golden, golden, seed=5)
print("\ngolden-mean input through the compatible selector:")
print("  output length", report.output_length)
for k, d in report.output_discrepancies.items():
    print(f"  D_{k} vs the Parry measure = {d:.5f}")
print("  forbidden block 11 in output:", report.forbidden_counts[("1", "1")], "times")
print("  passed:", report.passed and report.support_ok)

# A deterministic normal input works too: the canonical by-length word
# concatenation, whose convergence is logarithmically slow.
config = ss.ExperimentConfig(
    selector=selector,
    generator=ss.GeneratorSpec(kind=ss.CHAMPERNOWNE, alphabet=alpha, n=300_000),
    measure=None,
    ks=(1, 2),
    tolerance=0.03,
)
report = ss.run_experiment(config)
print("\nchampernowne input through after_ones:")
for k, d in report.output_discrepancies.items():
    print(f"  D_{k} vs uniform = {d:.5f}")
print("  passed:", report.passed)
