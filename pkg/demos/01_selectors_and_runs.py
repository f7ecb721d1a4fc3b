"""Selectors, runs, and the DFA correspondence.

A selector reads one symbol per step and either copies it to the output
(keep) or stays silent (drop), so its output is always a subsequence of
its input.
"""

import sftselect as ss
from sftselect import fixtures

# The bundled two-state selector keeps exactly the symbols that follow a 1.
selector = fixtures.after_ones_selector()
print("transitions:")
for src, symbol, action, dst in selector.transitions():
    print(f"  {src} --{symbol}|{action}--> {dst}")

run = ss.run_word(selector, "q0", "01101")
print("\ninput   01101")
print("output ", "".join(run.output))
print("end state", run.end, "| state visit counts", run.visits)

# The same thing, streamed one symbol at a time.  The cursor is resumable.
cursor = ss.SelectionCursor(selector)
emitted = []
for symbol in "01101":
    emitted += cursor.feed(symbol)
print("streamed output", "".join(emitted), "| consumed", cursor.position)

# Obliviousness: all transitions leaving a state share one action.
ok, witness = ss.is_oblivious(selector)
print("\nafter_ones oblivious?", ok)
mixed = fixtures.nonoblivious_selector()
ok, witness = ss.is_oblivious(mixed)
print("three-state example oblivious?", ok, "| mixed state:", witness)

# An oblivious selector is exactly prefix selection by a regular language:
# keep x[i] when the DFA accepts x[1:i-1].  Round-trip through the DFA view
# and cross-check against the literal quadratic definition.
dfa, accepting = ss.selector_to_dfa(selector)
print("\naccepting states:", sorted(accepting))
rebuilt = ss.dfa_to_selector(dfa, accepting)
print("round trip identical?", rebuilt == selector)

word = "110100110"
via_selector = "".join(ss.apply_selector(selector, word))
via_definition = "".join(ss.brute_force_prefix_selection(word, dfa, accepting))
print(f"select({word}) = {via_selector}  (definition agrees: {via_selector == via_definition})")
