import json
import math

import numpy as np
import pytest

import sapsm


def ball_halfspace():
    return sapsm.Problem(
        [sapsm.ConvexSet.ball([0.0, 0.0], 1.0), sapsm.ConvexSet.halfspace([-1.0, 0.0], 0.5)],
        sapsm.BoundedWitness(0, 1.0),
    )


def test_projections():
    ball = sapsm.ConvexSet.ball([0.0, 0.0], 1.0)
    np.testing.assert_allclose(sapsm.project(ball, np.array([3.0, 4.0])), [0.6, 0.8])
    assert sapsm.distance(ball, [3.0, 4.0]) == pytest.approx(4.0)
    assert sapsm.contains(ball, [0.1, 0.1])
    assert ball.kind == "ball"
    with pytest.raises(ValueError):
        sapsm.ConvexSet.ball([0.0, 0.0], -1.0)


def test_strings_and_amalgamators():
    p = sapsm.Problem([sapsm.ConvexSet.halfspace([1.0, 0.0], 0.0), sapsm.ConvexSet.halfspace([0.0, 1.0], 1.0)])
    np.testing.assert_array_equal(sapsm.apply_string(p, [0, 1], [2.0, 2.0]), [0.0, 1.0])
    mid = sapsm.apply_amalgamator(p, sapsm.Amalgamator.simultaneous(2), [2.0, 2.0])
    np.testing.assert_allclose(mid, [1.0, 1.5])
    a = sapsm.Amalgamator([[0, 1], [1, 0]], [0.5, 0.5], 2)
    assert a.weights == [0.5, 0.5]
    with pytest.raises(ValueError):
        sapsm.Amalgamator([[0], [1]], [0.5, 0.6], 2)


def test_dsap_run_converges():
    p = ball_halfspace()
    t = sapsm.dsap_run(p, sapsm.Scheduler.cyclic_singleton(), [3.0, 3.0], 1000, 1e-8)
    assert t.converged
    assert sapsm.proximity(p, t.final_iterate) <= 1e-8
    xs = t.iterates()
    assert xs.shape == (len(t.records), 2)
    assert t.to_csv(2).splitlines()[0] == "k,proximity,d_1,d_2,norm_x,elapsed_ns"


def test_perturbed_run_stays_bounded():
    p = ball_halfspace()
    sched = sapsm.Scheduler.random_dynamic(3, sapsm.MStarParams(0.25, 2, 2)).anchored()
    t = sapsm.dsap_run(p, sched, [20.0, -5.0], 300, 0.0, sapsm.PerturbationPlan(1.0, 1.0, 9))
    assert max(r.norm_x for r in t.records[1:]) <= 3 * 1.0 + 1 + 1e-9


def test_sapsm_matches_oracle():
    p = ball_halfspace()
    f = sapsm.Objective.linear([1.0, 1.0])
    oracle = sapsm.brute_force_minimize(p, f)
    assert oracle.unique
    np.testing.assert_allclose(oracle.minimizer, [-0.5, -math.sqrt(0.75)], atol=1e-4)
    sched = sapsm.Scheduler.random_dynamic(7, sapsm.MStarParams(0.25, 2, 2)).anchored()
    r = sapsm.sapsm_run(p, f, sched, sapsm.StepSizeRule.harmonic(1.0), [1.0, 1.0], 20000)
    assert sapsm.distance_to_solution_set(oracle, f, p, r.final_iterate) <= 1e-2
    c = sapsm.classical_psm(p, f, sapsm.StepSizeRule.harmonic(1.0), [1.0, 1.0], 20000)
    assert abs(sapsm.evaluate(f, c.final_iterate) - sapsm.evaluate(f, r.final_iterate)) <= 5e-2


def test_dykstra():
    p = sapsm.Problem([sapsm.ConvexSet.box([0.0, 0.0], [1.0, 1.0]), sapsm.ConvexSet.halfspace([1.0, 1.0], 1.0)])
    np.testing.assert_allclose(sapsm.project_intersection(p, [2.0, 2.0]), [0.5, 0.5], atol=1e-10)


def test_problem_file_and_run(tmp_path):
    doc = {
        "dimension": 2,
        "sets": [{"type": "ball", "center": [0, 0], "radius": 1}, {"type": "halfspace", "a": [-1, 0], "b": 0.5}],
        "bounded_witness": {"index": 0, "radius": 1},
        "objective": {"type": "linear", "c": [1, 1]},
        "x0": [1, 1],
        "max_iters": 200,
        "seed": 5,
    }
    f = sapsm.parse_problem_file(json.dumps(doc))
    assert f.seed == 5 and f.max_iters == 200
    bad = dict(doc, scheduler={"type": "random", "delta": 0.6})
    with pytest.raises(sapsm.ProblemFileError, match="0 < delta < 1/m"):
        sapsm.parse_problem_file(json.dumps(bad))

    path = tmp_path / "p.json"
    path.write_text(json.dumps(doc))
    code, out, err = sapsm.run(str(path), algorithm="sapsm", out_dir=str(tmp_path / "a"))
    assert code in (0, 2), err
    code2, _, _ = sapsm.run(str(tmp_path / "a" / "manifest.json"), out_dir=str(tmp_path / "b"))
    assert code2 == code
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()


def test_preconditions_raise():
    p = sapsm.Problem([sapsm.ConvexSet.halfspace([1.0, 0.0], 0.0)])
    with pytest.raises(sapsm.PreconditionError):
        sapsm.sapsm_run(p, sapsm.Objective.linear([1.0, 0.0]), sapsm.Scheduler.cyclic_singleton(),
                        sapsm.StepSizeRule.harmonic(1.0), [0.0, 0.0], 10)
