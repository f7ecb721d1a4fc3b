import numpy as np
import pytest

import sftselect as ss
from sftselect import fixtures as fx
from sftselect.formats import (
    machine_digest,
    parse_automaton_text,
    parse_matrix_text,
    parse_measure_text,
    parse_selector,
    parse_selector_text,
    parse_measure,
    parse_matrix,
    read_symbol_text,
    serialize_automaton,
    serialize_matrix,
    serialize_measure,
    serialize_selector,
    write_symbol_text,
)


class TestMachineFiles:
    def test_bundled_selectors_match_builders(self):
        pairs = [
            ("after_ones.sel", fx.after_ones_selector()),
            ("nonoblivious.sel", fx.nonoblivious_selector()),
            ("even_positions.sel", fx.even_positions_selector()),
            ("even_positions_full.sel", fx.even_positions_selector(True)),
        ]
        for name, built in pairs:
            assert parse_selector(fx.data_path(name)) == built

    def test_round_trip_selector(self):
        for built in (
            fx.after_ones_selector(),
            fx.nonoblivious_selector(),
            fx.even_positions_selector(),
        ):
            assert parse_selector_text(serialize_selector(built)) == built

    def test_round_trip_automaton(self):
        auto = fx.even_positions_selector().underlying_automaton()
        assert parse_automaton_text(serialize_automaton(auto)) == auto

    def test_comments_and_blank_lines(self):
        text = """
        # a selector
        alphabet 0 1

        states q0   # only one state here? no: two
        initial q0
        trans q0 0 keep q0
        trans q0 1 drop q0
        """
        machine = parse_selector_text(text)
        assert machine.states == ("q0",)

    def test_duplicate_transition_is_parse_error(self):
        text = "alphabet 0\nstates a\ninitial a\ntrans a 0 keep a\ntrans a 0 drop a\n"
        with pytest.raises(ss.ParseError) as err:
            parse_selector_text(text)
        assert err.value.line == 5

    def test_unknown_keyword(self):
        with pytest.raises(ss.ParseError):
            parse_selector_text("alphabet 0\nstates a\ninitial a\nfoo bar\n")

    def test_missing_sections(self):
        with pytest.raises(ss.ParseError):
            parse_selector_text("alphabet 0\nstates a\n")

    def test_bad_action(self):
        with pytest.raises(ss.ParseError):
            parse_selector_text(
                "alphabet 0\nstates a\ninitial a\ntrans a 0 copy a\n"
            )

    def test_automaton_rejects_action_column(self):
        with pytest.raises(ss.ParseError):
            parse_automaton_text(
                "alphabet 0\nstates a\ninitial a\ntrans a 0 keep a\n"
            )

    def test_eps_reserved(self):
        with pytest.raises(ss.ParseError):
            parse_selector_text("alphabet eps 1\nstates a\ninitial a\n")

    def test_iota_eta_declarations(self):
        machine = parse_selector_text(
            "alphabet 0 1\nstates a b\ninitial a\niota a 0\neta a 1\n"
            "trans a 0 drop b\ntrans b 0 drop b\n"
        )
        assert machine.declared_last_read == {"a": "0"}
        assert machine.declared_last_selected == {"a": "1"}

    def test_digest_is_stable_and_distinguishing(self):
        a = machine_digest(fx.after_ones_selector())
        b = machine_digest(fx.after_ones_selector())
        c = machine_digest(fx.nonoblivious_selector())
        assert a == b and a != c and len(a) == 12

    def test_random_round_trips(self):
        import random

        from conftest import random_selector

        rng = random.Random(6)
        for _ in range(100):
            machine = random_selector(rng, max_states=5)
            assert parse_selector_text(serialize_selector(machine)) == machine
            auto = machine.underlying_automaton()
            assert parse_automaton_text(serialize_automaton(auto)) == auto


class TestMeasureFiles:
    def test_bundled_golden_matches_closed_form(self, golden):
        parsed = parse_measure(fx.data_path("golden_parry.msr"))
        assert np.array_equal(parsed.pi.weights, golden.pi.weights)
        assert np.array_equal(parsed.P.entries, golden.P.entries)

    def test_bundled_matrix(self):
        spec = parse_matrix(fx.data_path("golden_mean.mat"))
        assert np.array_equal(spec.M, [[1.0, 1.0], [1.0, 0.0]])
        assert spec.irreducible

    def test_round_trip_measure(self, golden):
        again = parse_measure_text(serialize_measure(golden))
        assert np.array_equal(again.pi.weights, golden.pi.weights)
        assert np.array_equal(again.P.entries, golden.P.entries)

    def test_round_trip_matrix(self):
        spec = fx.golden_mean_sft()
        again = parse_matrix_text(serialize_matrix(spec))
        assert np.array_equal(again.M, spec.M)

    def test_bad_row_sum_rejected(self):
        text = "alphabet 0 1\npi 0.5 0.5\nrow 0.49 0.5\nrow 1 0\n"
        with pytest.raises(ss.ValidationError):
            parse_measure_text(text)

    def test_wrong_row_count(self):
        with pytest.raises(ss.ParseError):
            parse_measure_text("alphabet 0 1\npi 0.5 0.5\nrow 0.5 0.5\n")

    def test_not_a_number(self):
        with pytest.raises(ss.ParseError) as err:
            parse_matrix_text("alphabet 0\nrow x\n")
        assert err.value.line == 2

    def test_pi_forbidden_in_matrix(self):
        with pytest.raises(ss.ParseError):
            parse_matrix_text("alphabet 0\npi 1\nrow 1\n")


class TestSequenceText:
    def test_single_char_round_trip(self, binary):
        idx = read_symbol_text(binary, "0101\n1100\n")
        assert write_symbol_text(binary, idx) == "01011100"

    def test_multichar_tokens(self):
        alpha = ss.Alphabet(["lo", "hi"])
        idx = read_symbol_text(alpha, "lo hi hi\nlo")
        assert idx.tolist() == [0, 1, 1, 0]
        assert write_symbol_text(alpha, idx) == "lo hi hi lo"

    def test_unknown_symbol(self, binary):
        with pytest.raises(ss.UnknownSymbol):
            read_symbol_text(binary, "01021")
