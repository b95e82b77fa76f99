import random
from itertools import combinations

import pytest

from polarks.context import (
    Configuration,
    build_system,
    check_line_sets,
    count_pentagrams,
    degree,
    enumerate_four_element_contexts,
    enumerate_mermin_squares,
    four_context_sign,
    is_contextual,
    lines_configuration,
    mermin_pentagram,
    peres_mermin_square,
    verify_certificate,
)
from polarks.errors import BudgetExceeded, InvalidContext, NotMutuallyCommuting
from polarks.gf2 import BitVector
from polarks.hexagon import complement
from polarks.pauli import commutes, multiply, parse
from polarks.space import is_geometric_hyperplane, to_point


def brute_min_violations(config):
    """Try all deterministic +/-1 assignments, count unsatisfied contexts."""
    best = len(config.contexts)
    for bits in range(1 << config.n_points):
        bad = 0
        for ctx, sign in zip(config.contexts, config.signs):
            prod = 1
            for j in ctx:
                prod *= -1 if (bits >> j) & 1 else 1
            if prod != sign:
                bad += 1
        best = min(best, bad)
    return best


class TestConfiguration:
    def test_build_sorts_and_signs(self):
        cfg = Configuration.build(
            [parse(s) for s in ("XX", "ZZ", "YY")], [(2, 0, 1)]
        )
        assert cfg.contexts == ((0, 1, 2),)
        assert cfg.signs == (-1,)
        assert cfg.n_negative == 1

    def test_duplicate_observable_rejected(self):
        with pytest.raises(InvalidContext):
            Configuration.build([parse("XX"), parse("-XX")], [(0, 1)])

    def test_unsorted_context_rejected(self):
        with pytest.raises(InvalidContext):
            Configuration((parse("XX"), parse("ZZ"), parse("YY")), ((1, 0, 2),), (-1,))

    def test_duplicate_context_rejected(self):
        obs = tuple(parse(s) for s in ("XX", "ZZ", "YY"))
        with pytest.raises(InvalidContext):
            Configuration(obs, ((0, 1, 2), (0, 1, 2)), (-1, -1))

    def test_bad_index_rejected(self):
        with pytest.raises(InvalidContext):
            Configuration.build([parse("XX"), parse("ZZ")], [(0, 5)])

    def test_stated_sign_must_recompute(self):
        obs = tuple(parse(s) for s in ("XX", "ZZ", "YY"))
        with pytest.raises(InvalidContext):
            Configuration(obs, ((0, 1, 2),), (1,))

    def test_non_commuting_context_rejected(self):
        with pytest.raises(NotMutuallyCommuting):
            Configuration.build([parse("X"), parse("Z")], [(0, 1)])

    def test_json_round_trip(self):
        cfg = peres_mermin_square()
        again = Configuration.from_json_dict(cfg.to_json_dict())
        assert again == cfg


class TestBuildSystem:
    def test_peres_mermin_matrix(self):
        a, b = build_system(peres_mermin_square())
        assert (a.n_rows, a.n_cols) == (6, 9)
        assert a.int_rows() == [
            0b000000111,
            0b000111000,
            0b111000000,
            0b001001001,
            0b010010010,
            0b100100100,
        ]
        assert b.bits == 0b100000

    def test_single_positive_line(self):
        cfg = Configuration.build(
            [parse(s) for s in ("ZZ", "ZI", "IZ")], [(0, 1, 2)]
        )
        a, b = build_system(cfg)
        assert a.int_rows() == [0b111] and b.bits == 0

    def test_empty(self):
        cfg = Configuration.build([], [])
        report = is_contextual(cfg)
        assert not report.contextual
        assert degree(cfg) == 0


class TestVerdicts:
    def test_peres_mermin(self):
        report = is_contextual(peres_mermin_square())
        assert report.contextual
        assert report.certificate.bits == 0b111111
        a, b = build_system(peres_mermin_square())
        assert verify_certificate(a, b, report.certificate)
        assert report.counts == (9, 6, 1)

    def test_pentagram(self):
        cfg = mermin_pentagram()
        assert cfg.n_points == 10 and cfg.n_contexts == 5
        assert cfg.signs.count(-1) == 1
        # the negative context is the four three-qubit observables
        neg = cfg.contexts[cfg.signs.index(-1)]
        assert [str(cfg.observables[j]) for j in neg] == ["XXX", "YYX", "YXY", "XYY"]
        report = is_contextual(cfg)
        assert report.contextual
        a, b = build_system(cfg)
        assert verify_certificate(a, b, report.certificate)

    def test_degree_matches_brute_force(self):
        assert degree(peres_mermin_square()) == 1
        assert brute_min_violations(peres_mermin_square()) == 1
        assert degree(mermin_pentagram()) == 1
        assert brute_min_violations(mermin_pentagram()) == 1

    def test_non_contextual_degree_zero(self):
        cfg = Configuration.build(
            [parse(s) for s in ("ZZ", "ZI", "IZ", "XX", "XI", "IX")],
            [(0, 1, 2), (3, 4, 5)],
        )
        report = is_contextual(cfg)
        assert not report.contextual
        assert degree(cfg) == 0

    def test_invariance_under_relabeling(self):
        rng = random.Random(41)
        base = peres_mermin_square()
        for _ in range(20):
            order = list(range(9))
            rng.shuffle(order)
            inv = {old: new for new, old in enumerate(order)}
            cfg = Configuration.build(
                [base.observables[j] for j in order],
                [tuple(inv[j] for j in ctx) for ctx in base.contexts],
            )
            assert is_contextual(cfg).contextual
            assert degree(cfg) == 1


class TestLinesConfiguration:
    def test_doily_all_lines(self, doily):
        cfg = lines_configuration(doily, range(15))
        assert cfg.n_points == 15 and cfg.n_contexts == 15
        assert cfg.n_negative == 3
        report = is_contextual(cfg)
        assert report.contextual
        assert degree(cfg) == 3

    def test_w52_all_lines_contextual(self, w52):
        cfg = lines_configuration(w52, range(315))
        assert cfg.n_points == 63 and cfg.n_contexts == 315
        assert is_contextual(cfg).contextual

    def test_hexagon_copies_not_contextual(self, w52, classical_copy, skew_copy):
        for copy in (classical_copy, skew_copy):
            cfg = lines_configuration(w52, copy.lines)
            assert cfg.n_points == 63 and cfg.n_contexts == 63
            assert not is_contextual(cfg).contextual

    def test_complement_skew_contextual(self, w52, skew_copy):
        cfg = lines_configuration(w52, complement(w52, skew_copy))
        assert cfg.n_points == 63 and cfg.n_contexts == 252
        report = is_contextual(cfg)
        assert report.contextual
        a, b = build_system(cfg)
        assert verify_certificate(a, b, report.certificate)


class TestMagicSquares:
    def test_ten_in_the_doily(self, doily):
        squares = enumerate_mermin_squares(doily)
        assert len(squares) == 10
        negatives = sorted(cfg.n_negative for cfg in squares)
        assert negatives == [1] * 9 + [3]
        for cfg in squares:
            assert cfg.n_points == 9 and cfg.n_contexts == 6
            assert cfg.n_negative % 2 == 1
            assert is_contextual(cfg).contextual
            assert degree(cfg) == 1

    def test_each_grid_is_a_hyperplane(self, doily):
        for cfg in enumerate_mermin_squares(doily):
            values = {to_point(o).value for o in cfg.observables}
            assert is_geometric_hyperplane(values, doily.lines)

    def test_transvection_orbit_covers_all_ten(self, doily):
        squares = enumerate_mermin_squares(doily)
        grid_keys = {
            frozenset(to_point(o).value for o in cfg.observables)
            for cfg in squares
        }
        start = next(iter(grid_keys))
        seen = {start}
        frontier = [start]
        while frontier:
            cur = frontier.pop()
            for p in range(1, 16):
                pmap = doily.transvection_point_map(p)
                image = frozenset(pmap[v] for v in cur)
                if image not in seen:
                    seen.add(image)
                    frontier.append(image)
        assert seen == grid_keys

    def test_wrong_space_rejected(self, w52):
        with pytest.raises(InvalidContext):
            enumerate_mermin_squares(w52)


class TestFourElementContexts:
    def test_count_945(self, w52):
        assert len(enumerate_four_element_contexts(w52)) == 945

    def test_all_close_and_commute(self, w52):
        rng = random.Random(42)
        ctxs = enumerate_four_element_contexts(w52)
        for ctx in rng.sample(ctxs, 100):
            assert len(ctx) == 4
            a, b, c, d = ctx
            assert a ^ b ^ c ^ d == 0
            assert four_context_sign(w52, ctx) in (-1, 1)

    def test_named_example(self, w52):
        ctx = tuple(
            sorted(to_point(parse(s)).value for s in ("XXX", "XYY", "YXY", "YYX"))
        )
        ctxs = enumerate_four_element_contexts(w52)
        assert ctx in ctxs
        assert four_context_sign(w52, ctx) == -1

    def test_wrong_space_rejected(self, doily):
        with pytest.raises(InvalidContext):
            enumerate_four_element_contexts(doily)


class TestBatchChecks:
    def test_matches_single_checks(self, w52):
        rng = random.Random(43)
        sets = [sorted(rng.sample(range(315), rng.randrange(4, 40))) for _ in range(60)]
        sets.append(list(range(315)))
        results = check_line_sets(w52, sets)
        for subset, cert_positions in zip(sets, results):
            report = is_contextual(lines_configuration(w52, subset))
            assert report.contextual == (cert_positions is not None)
            if cert_positions is not None:
                combined = 0
                parity = 0
                for pos in cert_positions:
                    i = subset[pos]
                    for v in w52.lines[i].points:
                        combined ^= 1 << (v - 1)
                    if w52.line_signs[i] == -1:
                        parity ^= 1
                assert combined == 0 and parity == 1

    def test_workers_agree(self, w52):
        rng = random.Random(44)
        sets = [sorted(rng.sample(range(315), 20)) for _ in range(40)]
        assert check_line_sets(w52, sets) == check_line_sets(w52, sets, workers=4)


class TestPentagramSearch:
    def test_budget_zero_raises(self, w52):
        with pytest.raises(BudgetExceeded) as err:
            count_pentagrams(w52, budget_seconds=0.0)
        assert err.value.partial >= 0

    def test_canonical_pentagram_found_on_its_own_contexts(self, w52):
        cfg = mermin_pentagram()
        ctxs = [
            tuple(sorted(to_point(cfg.observables[j]).value for j in ctx))
            for ctx in cfg.contexts
        ]
        all_ctxs = enumerate_four_element_contexts(w52)
        assert all(c in all_ctxs for c in ctxs)
        found: list[tuple[int, ...]] = []
        assert count_pentagrams(w52, contexts=ctxs, collect=found) == 1
        assert found == [(0, 1, 2, 3, 4)]


class TestCertificateArithmetic:
    def test_rejects_wrong_length(self):
        a, b = build_system(peres_mermin_square())
        assert not verify_certificate(a, b, BitVector(5, 0b11111))

    def test_rejects_even_overlap(self):
        a, b = build_system(peres_mermin_square())
        assert not verify_certificate(a, b, BitVector(6, 0))

    def test_random_systems(self):
        rng = random.Random(45)
        for _ in range(100):
            n_obs = rng.randrange(3, 9)
            names = "IXZY"
            obs = []
            seen = set()
            while len(obs) < n_obs:
                s = "".join(rng.choice(names) for _ in range(2))
                if s != "II" and s not in seen:
                    seen.add(s)
                    obs.append(s)
            parsed = [parse(s) for s in obs]
            ctxs = []
            for i, j in combinations(range(n_obs), 2):
                if commutes(parsed[i], parsed[j]):
                    prod = multiply(parsed[i], parsed[j])
                    if prod.phase_exp % 2 == 0 and (prod.z_mask or prod.x_mask):
                        ps = str(prod).lstrip("-")
                        if ps not in seen:
                            seen.add(ps)
                            parsed.append(parse(ps))
                            ctxs.append((i, j, len(parsed) - 1))
            if not ctxs:
                continue
            cfg = Configuration.build(parsed, ctxs)
            report = is_contextual(cfg)
            if report.contextual:
                a, b = build_system(cfg)
                assert verify_certificate(a, b, report.certificate)
                assert degree(cfg) == brute_min_violations(cfg)
            else:
                assert degree(cfg) == 0
