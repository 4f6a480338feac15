import numpy as np
import pytest

from concatqec import channel
from concatqec import statevec as sv
from concatqec.channel import NoiseScenario
from concatqec.exceptions import InvalidScenarioError, UnsupportedConfigurationError


def test_empty_scenario_is_identity():
    s = sv.random_state(15, 1)
    out = channel.apply_scenario(s, NoiseScenario())
    assert np.abs(out.amps - s.amps).max() == 0


def test_pauli_involution():
    s = sv.random_state(15, 2)
    sc = NoiseScenario(comp_errors=((1, 3, "X"),))
    out = channel.apply_scenario(channel.apply_scenario(s, sc), sc)
    assert np.abs(out.amps - s.amps).max() < 1e-12


def test_replay_is_bit_exact():
    s = sv.random_state(15, 3)
    sc = NoiseScenario(erasures=((0, 1, "Z"),), comp_errors=((2, 4, "Y"),), seed=9)
    a = channel.apply_scenario(s, sc)
    b = channel.apply_scenario(s, NoiseScenario.from_json(sc.to_json()))
    assert (a.amps == b.amps).all()


def test_erasures_and_errors_act_identically():
    s = sv.random_state(15, 4)
    a = channel.apply_scenario(s, NoiseScenario(erasures=((1, 2, "X"),)))
    b = channel.apply_scenario(s, NoiseScenario(comp_errors=((1, 2, "X"),)))
    assert (a.amps == b.amps).all()


def test_address_collision_rejected():
    with pytest.raises(InvalidScenarioError, match="address"):
        NoiseScenario(erasures=((0, 1, "Z"),), comp_errors=((0, 1, "X"),))


def test_decoder_view_hides_paulis():
    sc = NoiseScenario(erasures=((0, 1, "Z"), (1, 5, "X")),
                       comp_errors=((2, 1, "X"),))
    view = sc.decoder_view()
    assert view.flags == ((0, 1), (1, 5))
    # the view type carries no Pauli or error fields at all
    assert not hasattr(view, "comp_errors")
    assert all(len(f) == 2 for f in view.flags)


@pytest.mark.parametrize("t,s,constraint,expected", [
    (0, 0, channel.ERROR_IN_UNDAMAGED_BLOCK, 1),
    (0, 1, channel.ERROR_IN_UNDAMAGED_BLOCK, 45),
    (1, 0, channel.ERROR_IN_UNDAMAGED_BLOCK, 45),
    (2, 0, channel.ERROR_IN_UNDAMAGED_BLOCK, 675),
    (2, 1, channel.ERROR_IN_UNDAMAGED_BLOCK, 10125),
    (2, 1, channel.UNCONSTRAINED, 675 * 39),
])
def test_enumeration_counts(t, s, constraint, expected):
    assert channel.count_scenarios(t, s, constraint) == expected


def test_enumeration_no_duplicates():
    seen = set()
    for sc in channel.enumerate_scenarios(2, 1):
        key = (sc.erasures, sc.comp_errors)
        assert key not in seen
        seen.add(key)
    assert len(seen) == 10125


def test_enumeration_is_deterministic():
    a = [sc.to_json() for sc in channel.enumerate_scenarios(2, 0)]
    b = [sc.to_json() for sc in channel.enumerate_scenarios(2, 0)]
    assert a == b


def test_constrained_stream_puts_error_in_undamaged_block():
    for sc in channel.enumerate_scenarios(2, 1):
        damaged = {b for b, _, _ in sc.erasures}
        assert all(b not in damaged for b, _, _ in sc.comp_errors)


def test_params_beyond_capability_rejected():
    with pytest.raises(UnsupportedConfigurationError):
        list(channel.enumerate_scenarios(3, 0))
    with pytest.raises(UnsupportedConfigurationError):
        list(channel.enumerate_scenarios(0, 2))


def test_random_scenario_replayable():
    a = channel.random_scenario(123, 2, 1)
    b = channel.random_scenario(123, 2, 1)
    assert a == b
    assert a.seed == 123


def test_scenario_json_field_names():
    sc = NoiseScenario(erasures=((0, 1, "Z"),), comp_errors=((2, 1, "X"),), seed=5)
    rec = sc.to_json()
    assert '"erasures"' in rec and '"comp_errors"' in rec and '"seed"' in rec
    assert '"block"' in rec and '"pos"' in rec and '"pauli"' in rec
