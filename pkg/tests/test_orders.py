"""Unit tests for orders module.

Paired orders, P∘f, PTOP enumeration and topological sorting.
"""

from itertools import islice
from math import factorial

import pytest

from potsolver.algebra import EQ, FULL, GT, INC, LT
from potsolver.errors import ContractViolation, InputError
from potsolver.instancegen import GenMode, GenSpec, gen_planted
from potsolver.network import Network, from_instance, preceq
from potsolver.orders import (
    PairedOrder,
    compose_with,
    compose_with_relation,
    enumerate_ptops,
    enumerate_total_orders,
    ptop_at,
    ptop_count,
    topological_sorts,
)


class TestPairedOrder:
    """Test cases for PairedOrder."""

    def test_positions(self):
        """Test slot positions and mates."""
        p = PairedOrder(((2, 0), (1,)))
        assert p.slots == ((0, 2), (1,))
        assert p.position == (0, 1, 0)
        assert p.mate(0) == 2
        assert p.mate(1) is None
        assert p.is_proper
        assert not p.is_total

    def test_relation(self):
        """Test scaffold relations."""
        p = PairedOrder(((0, 1), (2,)))
        assert p.relation(0, 1) == INC
        assert p.relation(0, 2) == LT
        assert p.relation(2, 1) == GT
        assert p.relation(1, 1) == EQ

    def test_duplicate_variable_rejected(self):
        """Test a variable in two slots is an input error."""
        with pytest.raises(InputError):
            PairedOrder(((0, 1), (1,)))

    def test_str(self):
        """Test the slot rendering."""
        assert str(PairedOrder(((0, 1), (2,)))) == "{0,1} {2}"


class TestExtend:
    """Test cases for PairedOrder.extend."""

    def test_split_first_pair(self):
        """Test [{a,b},{c}] extend(a,b) -> [{a},{b},{c}]."""
        p = PairedOrder(((0, 1), (2,)))
        assert p.extend(0, 1) == PairedOrder.total((0, 1, 2))

    def test_split_reversed(self):
        """Test [{a,b}] extend(b,a) -> [{b},{a}]."""
        assert PairedOrder(((0, 1),)).extend(1, 0).order() == (1, 0)

    def test_not_mates(self):
        """Test extend on two singletons is a contract violation."""
        with pytest.raises(ContractViolation):
            PairedOrder.total((0, 1)).extend(0, 1)

    def test_extension_is_stub(self):
        """Test the original scaffold is a stub of its extension."""
        p = ptop_at(6, 17)
        x, y = p.first_pair()
        q = p.extend(y, x)
        assert p.is_stub_of(q)
        assert not q.is_stub_of(p)

    def test_linearize_splits_every_pair(self):
        """Test [{3,1},{0,2},{4}] linearizes to 1, 3, 0, 2, 4."""
        p = PairedOrder(((3, 1), (0, 2), (4,)))
        t = p.linearize()
        assert t.order() == (1, 3, 0, 2, 4)
        assert p.is_stub_of(t)

    def test_linearize_matches_repeated_extend(self):
        """Test linearize equals splitting pairs smaller-first one by one."""
        p = ptop_at(7, 123)
        q = p
        while not q.is_total:
            q = q.extend(*q.first_pair())
        assert p.linearize() == q


class TestComposeWith:
    """Test cases for compose_with."""

    def test_before_drops_gt(self):
        """Test x before y with mask {<,>} becomes {<}."""
        f = Network.full(2)
        f.set_rel(0, 1, LT | GT)
        g = compose_with(PairedOrder.total((0, 1)), f)
        assert g.rel(0, 1) == LT
        assert g.rel(1, 0) == GT

    def test_pair_mates_unchanged(self):
        """Test pair-mates keep their mask."""
        f = Network.full(2)
        f.set_rel(0, 1, GT | INC)
        assert compose_with(PairedOrder(((0, 1),)), f).rel(0, 1) == GT | INC

    def test_contradiction_gives_empty(self):
        """Test x before y with mask {>} becomes empty."""
        f = Network.full(2)
        f.set_rel(0, 1, GT)
        g = compose_with(PairedOrder.total((0, 1)), f)
        assert g.mask(0, 1) == 0

    def test_result_below_input(self, tasks_instance):
        """Test P∘f refines f and stays coherent."""
        f = from_instance(tasks_instance)
        for p in enumerate_ptops(3):
            g = compose_with(p, f)
            assert preceq(g, f)
            assert g.is_coherent()

    def test_equality_relation(self):
        """Test an '=' scaffold relation keeps only '='."""
        f = Network.full(2)
        rel = Network.full(2).masks.copy()
        rel[0, 1] = rel[1, 0] = int(EQ)
        assert compose_with_relation(f, rel).rel(0, 1) == EQ

    def test_size_mismatch(self):
        """Test differing variable sets are an input error."""
        with pytest.raises(InputError):
            compose_with(PairedOrder.total((0, 1)), Network.full(3))


class TestEnumeration:
    """Test cases for PTOP and total order enumeration."""

    @pytest.mark.parametrize("n", range(1, 9))
    def test_ptop_count_law(self, n):
        """Test the stream yields n!/2^floor(n/2) distinct PTOPs."""
        ptops = list(enumerate_ptops(n))
        assert len(ptops) == factorial(n) // 2 ** (n // 2) == ptop_count(n)
        assert len(set(ptops)) == len(ptops)
        assert all(p.is_proper for p in ptops)

    def test_known_counts(self):
        """Test small counts."""
        assert [ptop_count(n) for n in (2, 3, 4, 8, 10)] == [1, 3, 6, 2520, 113400]

    def test_n3_top_singletons(self):
        """Test the three PTOPs on 3 variables differ in their top singleton."""
        tops = [p.slots[-1] for p in enumerate_ptops(3)]
        assert sorted(tops) == [(0,), (1,), (2,)]

    def test_first_ptop(self):
        """Test rank 0 pairs consecutive variables."""
        assert ptop_at(10, 0).slots == ((0, 1), (2, 3), (4, 5), (6, 7), (8, 9))

    @pytest.mark.parametrize("n", [5, 6, 7])
    def test_unranking_matches_stream(self, n):
        """Test ptop_at agrees with the stream position."""
        for rank, p in enumerate(enumerate_ptops(n)):
            assert ptop_at(n, rank) == p

    def test_rank_ranges(self):
        """Test start/stop select a contiguous slice of the stream."""
        full = list(enumerate_ptops(6))
        assert list(enumerate_ptops(6, 10, 25)) == full[10:25]
        assert list(enumerate_ptops(6, 80)) == full[80:]
        assert list(enumerate_ptops(6, 5, 5)) == []
        assert list(enumerate_ptops(6, 200)) == []

    def test_rank_out_of_range(self):
        """Test ptop_at rejects ranks past the end."""
        with pytest.raises(InputError):
            ptop_at(4, 6)

    def test_total_orders(self):
        """Test n! total orders in lexicographic order."""
        orders = [t.order() for t in enumerate_total_orders(4)]
        assert len(orders) == 24
        assert orders[0] == (0, 1, 2, 3)
        assert orders == sorted(orders)
        assert [t.order() for t in enumerate_total_orders(4, 22)] == orders[22:]


def atomic_rows(n, rels):
    net = Network.full(n)
    for (i, j), atom in rels.items():
        net.set_rel(i, j, atom)
    return net


class TestTopologicalSorts:
    """Test cases for topological_sorts."""

    def test_antichain(self):
        """Test an antichain on 3 variables yields all 6 permutations."""
        net = atomic_rows(3, {(0, 1): INC, (0, 2): INC, (1, 2): INC})
        assert len({t.order() for t in topological_sorts(net)}) == 6

    def test_chain(self):
        """Test x<y<z yields exactly one order."""
        net = atomic_rows(3, {(0, 1): LT, (1, 2): LT, (0, 2): LT})
        assert [t.order() for t in topological_sorts(net)] == [(0, 1, 2)]

    def test_tasks_solution(self):
        """Test T3 comes last in every order."""
        net = atomic_rows(3, {(0, 2): LT, (1, 2): LT, (0, 1): INC})
        orders = {t.order() for t in topological_sorts(net)}
        assert orders == {(0, 1, 2), (1, 0, 2)}

    def test_unrealizable_rejected(self):
        """Test an unrealizable network is a contract violation."""
        net = atomic_rows(3, {(0, 1): LT, (1, 2): LT, (0, 2): INC})
        with pytest.raises(ContractViolation):
            list(topological_sorts(net))

    @pytest.mark.parametrize("seed", range(5))
    def test_sorted_scaffold_admits_planted_solution(self, seed):
        """Test T∘f still admits the planted solution for every sort T."""
        ins, model = gen_planted(GenSpec(n=6, density=0.7, seed=seed, mode=GenMode.PLANTED))
        truth = Network.full(6)
        reach = model.closure()
        for i in range(6):
            for j in range(i + 1, 6):
                truth.set_rel(i, j, model.relation(i, j, reach))
        f = from_instance(ins)
        for t in islice(topological_sorts(truth), 20):
            assert preceq(compose_with(t, truth), compose_with(t, f))
            assert not compose_with(t, truth).has_empty()
