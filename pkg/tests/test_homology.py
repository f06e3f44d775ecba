import pytest

from pinwheel.arnold import betti_table
from pinwheel.complexes import PROJECTIVE_BASED, GradedBasis, assemble_differential
from pinwheel.homology import (
    InfeasibleError, block_cost, check_feasible, differential_ranks, homology_report,
)
from pinwheel.linalg import rank_mod_p


def test_arity_two():
    rep = homology_report(2, 0)
    assert [rep.raw[0][d] for d in rep.degrees] == [1, 1]


def test_arity_three_exact_part():
    rep = homology_report(3, 2)
    assert [rep.exact[d] for d in range(4)] == [1, 3, 3, 1]
    assert all(rep.exact_blocks[d, 1] == 0 for d in rep.degrees)


def test_top_layer_dies_one_level_up():
    # the m=2 cocycles that inflate the M=2 truncation die once m=3 is present
    rep = homology_report(3, 3)
    assert all(rep.exact_blocks[d, 2] == 0 for d in rep.degrees)


def test_arity_four_q_surjective_at_m0():
    rep = homology_report(4, 0)
    betti = betti_table(4)
    assert [rep.q_rank[d] for d in range(len(betti))] == betti
    # dimensions exceed the Betti numbers at M=0 even though q is onto
    assert rep.raw[0][2] > betti[2]


def test_ranks_agree_mod_primes():
    b = GradedBasis(range(4), PROJECTIVE_BASED)
    ranks = differential_ranks(b, 2)
    for (d, m), r in ranks.items():
        mat = assemble_differential(b.block(d, m), b.block(d + 1, m - 1), "d_proj")
        assert rank_mod_p(mat, 1_000_003) == r


def test_workers_do_not_change_results():
    one = homology_report(4, 1)
    two = homology_report(4, 1, workers=2)
    assert one.raw == two.raw and one.q_rank == two.q_rank


def test_feasibility_refusal():
    assert block_cost(4, 1, 1) > 0
    with pytest.raises(InfeasibleError, match=r"block \(d=\d+, m=\d+\) needs"):
        check_feasible(6, 3)
    assert check_feasible(3, 2) > 0
