import numpy as np
import pytest

from qaoa2.bench import family_instance
from qaoa2.graph import Graph, cut_value
from qaoa2.oracle import asymptotic_optimum, brute_force
from qaoa2.qaoa import QaoaConfig
from qaoa2.solver import SolveError, SolverChoice, select_denominator, solve

FAST_QAOA = SolverChoice("qaoa", QaoaConfig(iterations=3, shots=100, sample_rounds=200))


def test_depth_chain_with_local_search():
    g = family_instance("u3r", 2000, 1)
    r = solve(g, 10, solver=SolverChoice("local_search", restarts=2))
    assert r.level_sizes == [2000, 200, 20, 2]
    assert r.blocks_per_level == [200, 20, 2]
    assert r.depth == 3


def test_depth_small_examples():
    g = family_instance("u3e", 7, 1)
    r = solve(g, 3, solver=SolverChoice("brute_force"))
    assert r.level_sizes == [7, 3]
    assert r.depth == 1
    r = solve(family_instance("u3r", 10, 1), 10, solver=SolverChoice("brute_force"))
    assert r.depth == 0 and r.level_sizes == [10]
    assert r.cut == brute_force(family_instance("u3r", 10, 1))[1]


@pytest.mark.parametrize("kind", ["qaoa", "brute_force", "local_search"])
@pytest.mark.parametrize("part", ["random", "greedy"])
def test_cut_at_least_half_and_consistent(kind, part):
    solver = FAST_QAOA if kind == "qaoa" else SolverChoice(kind)
    for fam in ("u3r", "w3e"):
        g = family_instance(fam, 40, 2)
        r = solve(g, 8, part, solver, seed=4)
        assert r.cut >= r.total_weight / 2
        assert r.cut == cut_value(g, r.assignment)
        assert r.cut >= r.cut_before_polish
        assert set(np.unique(r.assignment)) <= {-1, 1}


def test_deterministic():
    g = family_instance("w3r", 50, 1)
    a = solve(g, 10, "greedy", FAST_QAOA, seed=7)
    b = solve(g, 10, "greedy", FAST_QAOA, seed=7)
    np.testing.assert_array_equal(a.assignment, b.assignment)
    assert a.to_json(timings=False) == b.to_json(timings=False)


def test_naive_merge_never_beats_optimized_before_polish():
    g = family_instance("u3e", 60, 3)
    for seed in range(3):
        opt = solve(g, 10, solver=FAST_QAOA, seed=seed, final_polish=False)
        naive = solve(g, 10, solver=FAST_QAOA, seed=seed, merge_mode="naive", final_polish=False)
        assert opt.cut >= naive.cut


def test_modularity_reported():
    g = family_instance("w3e", 60, 1)
    assert solve(g, 14, "greedy", SolverChoice("local_search")).modularity > 0.3
    assert solve(Graph.from_edges(3, [(0, 1)]), 3).modularity is None


def test_validation():
    g = family_instance("u3r", 20, 1)
    with pytest.raises(ValueError):
        solve(g, 1)
    with pytest.raises(ValueError):
        solve(g, 5, "spectral")
    with pytest.raises(ValueError):
        solve(g, 5, merge_mode="lazy")
    with pytest.raises(ValueError):
        solve(g, 21, solver=SolverChoice("qaoa"))
    with pytest.raises(ValueError):
        SolverChoice("annealing")


def test_solve_error_locates_block():
    class Boom(SolverChoice):
        def __call__(self, g, seed):
            raise RuntimeError("boom")

    with pytest.raises(SolveError) as info:
        solve(family_instance("u3r", 20, 1), 5, solver=Boom("local_search"))
    assert info.value.level == 0 and info.value.block == 0


def test_select_denominator():
    g = family_instance("u3r", 16, 1)
    exact = select_denominator(g, "exact")
    assert exact == brute_force(g)[1]
    assert select_denominator(g, "best_known", seed=1) <= exact
    assert select_denominator(g, "asymptotic", d=3) == pytest.approx(asymptotic_optimum(16, 3))
    assert select_denominator(g, "asymptotic") == pytest.approx(asymptotic_optimum(16, 3))
    with pytest.raises(ValueError):
        select_denominator(family_instance("w3r", 16, 1), "asymptotic")
    with pytest.raises(ValueError):
        select_denominator(g, "gw")
    r = solve(g, 8, solver=SolverChoice("brute_force"), denominator="exact")
    assert r.denominator_kind == "exact" and r.ratio == r.cut / exact <= 1


def test_coarse_hook_and_threads():
    g = family_instance("u3r", 120, 1)
    seen = []
    r1 = solve(g, 10, solver=SolverChoice("local_search"), on_coarse=lambda lvl, cp: seen.append((lvl, cp.n_blocks)))
    r2 = solve(g, 10, solver=SolverChoice("local_search"), n_jobs=3)
    assert seen == [(0, 12), (1, 2)]
    np.testing.assert_array_equal(r1.assignment, r2.assignment)
