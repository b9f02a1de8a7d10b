# Copyright (C) 2020,2023 Famedly
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program. If not, see <http://www.gnu.org/licenses/>.
"""Property tests: lattice laws and the free lattice order against evaluations."""
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_extensions.core import (
    chain,
    dual,
    m3,
    n5,
    product,
    sublattice_closure,
    two_by_two,
)
from lattice_extensions.free import (
    Gen,
    Join,
    Meet,
    canonical,
    canonical_form,
    eval_term,
    fb_from_term,
    fb_leq,
    fd_eval,
    fd_from_term,
    fd_leq,
    fl_eq,
    fl_leq,
    parse_term,
    proper_combinations,
    proper_decomposition,
    render,
)
from lattice_extensions.store import small_lattices
from tests import unittest

GENS = ("a", "b", "c")

terms = st.recursive(
    st.sampled_from([Gen(g) for g in GENS]),
    lambda kids: st.builds(lambda x, y: Meet((x, y)), kids, kids)
    | st.builds(lambda x, y: Join((x, y)), kids, kids),
    max_leaves=8,
)

targets = [n5(), m3(), chain(3), two_by_two()]
distributive_targets = [chain(3), two_by_two()]


@st.composite
def evaluations(draw, lattices=targets):
    L = draw(st.sampled_from(lattices))
    values = {g: draw(st.sampled_from(L.elements)) for g in GENS}
    return L, values


class LatticeLawTest(unittest.TestCase):
    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_catalog_laws(self, data) -> None:
        """See if catalog lattices satisfy absorption, associativity and consistency"""
        L = data.draw(st.sampled_from(small_lattices(5)))
        x, y, z = (data.draw(st.sampled_from(L.elements)) for _ in range(3))
        assert L.join(x, L.meet(x, y)) == x
        assert L.meet(x, L.join(x, y)) == x
        assert L.join(L.join(x, y), z) == L.join(x, L.join(y, z))
        assert L.meet(L.meet(x, y), z) == L.meet(x, L.meet(y, z))
        assert L.le(x, y) == (L.join(x, y) == y) == (L.meet(x, y) == x)


class FreeLatticePropertyTest(unittest.TestCase):
    @settings(max_examples=300, deadline=None)
    @given(terms, terms, evaluations())
    def test_order_is_sound(self, s, t, evaluation) -> None:
        """See if s <= t in the free lattice holds under every evaluation"""
        L, values = evaluation
        if fl_leq(s, t):
            assert L.le(eval_term(s, L, values), eval_term(t, L, values))

    @settings(max_examples=200, deadline=None)
    @given(terms)
    def test_canonical_form(self, t) -> None:
        """See if the canonical form is equal to the term and stable"""
        c, _ = canonical_form(t)
        assert fl_eq(c, t)
        assert canonical(c) == c

    @settings(max_examples=200, deadline=None)
    @given(terms, terms)
    def test_equal_terms_share_canonical_forms(self, s, t) -> None:
        """See if free lattice equality is identity of canonical forms"""
        assert fl_eq(s, t) == (canonical(s) == canonical(t))

    @settings(max_examples=100, deadline=None)
    @given(terms)
    def test_render_parses(self, t) -> None:
        """See if rendered terms parse to themselves"""
        assert parse_term(render(t), GENS) == t


class NormalFormPropertyTest(unittest.TestCase):
    @settings(max_examples=200, deadline=None)
    @given(terms, evaluations(distributive_targets))
    def test_fd_normal_form_evaluates_alike(self, t, evaluation) -> None:
        """See if the FD normal form evaluates like the term in distributive lattices"""
        L, values = evaluation
        assert fd_eval(fd_from_term(t, GENS), L, values) == eval_term(t, L, values)

    @settings(max_examples=200, deadline=None)
    @given(terms, terms)
    def test_fd_and_fb_orders_agree(self, s, t) -> None:
        """See if lattice terms compare the same way in FD and FB"""
        fd = fd_leq(fd_from_term(s, GENS), fd_from_term(t, GENS))
        fb = fb_leq(fb_from_term(s, GENS), fb_from_term(t, GENS))
        assert fd == fb
        if fl_leq(s, t):
            assert fd


catalog = st.sampled_from(small_lattices(5))


class DualityPropertyTest(unittest.TestCase):
    @settings(max_examples=60, deadline=None)
    @given(catalog)
    def test_double_dual(self, L) -> None:
        """See if dualizing twice gives the lattice back"""
        assert dual(dual(L)).same_lattice(L)
        D = dual(L)
        for x in L.elements:
            for y in L.elements:
                assert D.le(x, y) == L.le(y, x)
                assert D.meet(x, y) == L.join(x, y)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(catalog, min_size=1, max_size=2))
    def test_dual_commutes_with_product(self, Ls) -> None:
        """See if the dual of a product is the product of the duals"""
        P = product(Ls)
        flat = P.sublattice(P.elements)
        assert dual(flat).same_lattice(product([dual(L) for L in Ls]))
        assert dual(P).same_lattice(product([dual(L) for L in Ls]))


class ClosurePropertyTest(unittest.TestCase):
    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_closure_is_a_closure(self, data) -> None:
        """See if sublattice closure is extensive, idempotent, monotone and closed"""
        L = data.draw(catalog)
        seed = data.draw(st.sets(st.sampled_from(L.elements), min_size=1))
        more = seed | data.draw(st.sets(st.sampled_from(L.elements)))
        S = set(sublattice_closure(L, seed).elements)
        assert seed <= S
        assert set(sublattice_closure(L, S).elements) == S
        assert S <= set(sublattice_closure(L, more).elements)
        for x in S:
            for y in S:
                assert L.meet(x, y) in S
                assert L.join(x, y) in S


class DecompositionPropertyTest(unittest.TestCase):
    @settings(max_examples=100, deadline=None)
    @given(terms, st.lists(terms, max_size=6))
    def test_no_decomposition_against_the_tag(self, t, extra) -> None:
        """See if no canonical form splits the way its tag rules out"""
        pool = [Gen(g) for g in GENS] + extra
        assert proper_decomposition(t, pool) is None, (render(t), render(canonical(t)))

    @settings(max_examples=100, deadline=None)
    @given(terms)
    def test_proper_combinations_are_proper(self, t) -> None:
        """See if indexed meets and joins differ from their operands"""
        meets, joins = proper_combinations([t, *(Gen(g) for g in GENS)])
        for found, node in ((meets, Meet), (joins, Join)):
            for c, (u, v) in found.items():
                assert canonical(node((u, v))) == c
                assert c not in (u, v)
