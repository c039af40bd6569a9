import numpy as np
import pytest

from algebra.errors import ContractViolation
from algebra.isotopic_pair import restrict_pair
from algebra.representations import verify_representation
from algebra.superalgebra import hom_pair
from dynamics.search import SearchSettings, find_representation, float_pair


@pytest.fixture
def subpair(oscillator):
    return restrict_pair(oscillator.pair, [0, 1], [0, 1])


def test_hom_pair_has_a_split_representation():
    pair = hom_pair(2, 1)
    result = find_representation(pair, 2, 1, SearchSettings(seeds=8, max_iters=500))
    assert result.success
    assert result.residual < 1e-10
    assert result.representation.grading == (2, 1)
    report = verify_representation(result.representation, float_pair(pair), 1e-8)
    assert report.flags["valid"] and report.flags["split"]


def test_scalar_blocks_cannot_satisfy_the_subpair(subpair):
    result = find_representation(subpair, 1, 1, SearchSettings(seeds=8, max_iters=200))
    assert not result.success
    assert result.residual > 0.1
    assert [a.seed for a in result.attempts] == list(range(8))
    assert result.to_json()["success"] is False


def test_dimensions_must_be_positive(subpair):
    with pytest.raises(ContractViolation):
        find_representation(subpair, 0, 1)
    with pytest.raises(ContractViolation):
        find_representation(subpair, 1, 1, SearchSettings(seeds=0))


def test_search_is_deterministic(subpair):
    settings = SearchSettings(seeds=4, max_iters=100, base_seed=7)
    first = find_representation(subpair, 1, 1, settings)
    second = find_representation(subpair, 1, 1, settings)
    assert first.seed == second.seed
    assert first.residual == second.residual
    assert np.array_equal(first.representation.t1, second.representation.t1)


def test_workers_do_not_change_the_result(subpair):
    serial = find_representation(subpair, 1, 1, SearchSettings(seeds=4, max_iters=100))
    threaded = find_representation(subpair, 1, 1, SearchSettings(seeds=4, max_iters=100, workers=2))
    assert [a.residual for a in serial.attempts] == [a.residual for a in threaded.attempts]
    assert serial.seed == threaded.seed
