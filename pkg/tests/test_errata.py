import pytest

from algebra.oscillator import resolve_params
from dynamics.classical import invariants, predicted_xi_slope
from dynamics.errata import (PROBE_STATE, conservation_list_entries, errata_audit, hom_pair_dimension_entries,
                             lambda_exponent_entry, mixed_integral_entry, structure_table_entries)


def test_conservation_list_has_one_wrong_coefficient(params):
    entries = conservation_list_entries(params)
    assert [e.item for e in entries] == ["relation QBR-RBQ = c R"]
    assert (entries[0].printed, entries[0].computed) == (-6, -3)


def test_structure_table_errata(params):
    entries = structure_table_entries(params)
    duplicate = [e for e in entries if e.item == "bracket table line [R[p,a], R[p,b]] = 0"]
    assert len(duplicate) == 1
    assert duplicate[0].computed == "-2 R[p,b]"
    r_entry = entries[-1]
    assert r_entry.item == "R-operator matrices"
    assert r_entry.consistent


def test_printed_integrals_are_not_conserved(params):
    for entry in (mixed_integral_entry(params), lambda_exponent_entry(params)):
        assert not entry.consistent
        assert entry.computed == pytest.approx(0, abs=1e-9)
        assert abs(entry.printed) > 1e-3


def test_hom_pair_dimensions():
    entries = hom_pair_dimension_entries()
    assert [e.computed for e in entries] == [[0, 2], [4, 4], [6, 8]]
    assert entries[0].printed == [2, 2]
    assert not any(e.consistent for e in entries)


def test_full_audit(params):
    entries = errata_audit(params)
    items = [e.item for e in entries]
    assert len(items) == len(set(items))
    slope = next(e for e in entries if e.item.startswith("xi slope"))
    assert slope.computed == pytest.approx(predicted_xi_slope(params, invariants(PROBE_STATE, params).L))
    assert all(set(e.to_json()) == {"item", "printed", "computed", "consistent"} for e in entries)


def test_classical_items_need_nondegenerate_sums():
    params = resolve_params(1, 1, 1)
    assert params.eps2 + params.teps2 == 0
    items = [e.item for e in errata_audit(params)]
    assert not any(item.startswith("d/dt") for item in items)
    assert any(item.startswith("superdimension") for item in items)
