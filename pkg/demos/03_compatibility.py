"""Compatibility of selectors with the support of a Markov measure.

Staying inside the support while reading is not enough to preserve
frequencies: the selector may only *keep* a symbol when the last symbol it
read and the last symbol it selected coincide, so that the output continues
the measure where the selection left off.  The machinery here infers the
two per-state labels (file keywords: iota = last read, eta = last selected)
and checks every transition.
"""

import sftselect as ss
from sftselect import fixtures

golden = fixtures.golden_parry_measure()

# The eight-state selector keeps symbols at even read positions when its
# labels allow it; each state name spells (parity, last read, last selected).
selector = fixtures.even_positions_selector()
result = ss.check_selector_compatibility(selector, golden)
print("compatible:", result.ok)
for q in selector.states:
    print(f"  state {q}: last read {result.witness.last_read[q]},"
          f" last selected {result.witness.last_selected[q]}")

ok, missing = ss.is_shift_complete(selector, golden, result.witness)
print("reads every positive-probability continuation:", ok)

# The after-ones selector follows 1s; on golden-mean input its output is all
# zeros, so genericity is destroyed.  The checks reject it with the exact
# constraint that fails.
bad = fixtures.after_ones_selector()
result = ss.check_selector_compatibility(bad, golden)
print("\nafter_ones compatible:", result.ok)
for violation in result.violations:
    print(" ", violation)

# The full variant of the eight-state machine includes four transitions that
# read 1 right after a 1.  They can never fire inside the golden-mean shift
# and each one is flagged.
full = fixtures.even_positions_selector(include_forbidden_reads=True)
result = ss.check_selector_compatibility(full, golden)
print("\nwith forbidden reads, violations:")
for violation in result.violations:
    print(" ", violation)
