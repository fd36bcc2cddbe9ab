import random
import re

import pytest

from gridcast.experiment import synthetic_topology
from gridcast.ilp import emit_ilp, ilp_variable_count
from gridcast.steiner import (SteinerInstance, delay_weights, exact_steiner,
                              tree_cost)

from conftest import make_topology


def inst(topology, source, dests):
    return SteinerInstance(topology=topology, source=source,
                           terminals=frozenset(dests),
                           weights=delay_weights(topology))


def smallest_instance():
    t = make_topology(2, [(0, 1, 2.5)], coords=[(0, 0), (1, 0)])
    return inst(t, 0, {1})


def test_smallest_instance_structure():
    text = emit_ilp(smallest_instance())
    lines = text.strip().split("\n")
    assert lines[0] == "min: 2.5 Y_0_1;"
    families = {f"c{i}": 0 for i in range(1, 7)}
    for line in lines[1:]:
        m = re.match(r"(c\d)_", line)
        if m:
            families[m.group(1)] += 1
    assert families == {"c1": 1, "c2": 1, "c3": 1, "c4": 1, "c5": 1, "c6": 0}
    assert sum(1 for l in lines if l.startswith("bin Y")) == 1
    assert sum(1 for l in lines if l.startswith("bin X")) == 2


def test_variable_count_identity_smallest():
    assert ilp_variable_count(smallest_instance()) == 3


@pytest.mark.parametrize("seed", range(20))
def test_counting_identities_random_instances(seed):
    rng = random.Random(2000 + seed)
    topo = synthetic_topology(rng, rng.randint(4, 12), extra_edges=rng.randint(1, 10))
    terms = rng.sample(range(topo.n), rng.randint(2, 4))
    i = inst(topo, terms[0], terms[1:])
    text = emit_ilp(i)
    m = len(topo.links)
    d = len(i.terminals)
    n = topo.n
    assert ilp_variable_count(i) == m + 2 * m * d
    assert text.count("bin ") == m + 2 * m * d
    assert len(re.findall(r"^c6_", text, re.M)) == d * (n - 2)
    assert len(re.findall(r"^c2_", text, re.M)) == m * d
    assert len(re.findall(r"^c3_", text, re.M)) == m * d
    assert len(re.findall(r"^c1_", text, re.M)) == m
    assert len(re.findall(r"^c4_", text, re.M)) == d
    assert len(re.findall(r"^c5_", text, re.M)) == d


def test_emission_is_byte_stable():
    rng = random.Random(77)
    topo = synthetic_topology(rng, 8, extra_edges=5)
    i = inst(topo, 0, {2, 5})
    assert emit_ilp(i) == emit_ilp(i)


# -- model consistency: the optimal tree satisfies every emitted constraint ----

def _parse_model(text):
    objective = {}
    constraints = []
    for line in text.strip().split("\n"):
        line = line.rstrip(";")
        if line.startswith("min: "):
            for term in line[len("min: "):].split(" + "):
                coef, var = term.split(" ")
                objective[var] = float(coef)
        elif line.startswith("bin "):
            continue
        else:
            name, body = line.split(": ", 1)
            if "<=" in body:
                lhs, rhs = body.split(" <= ")
                constraints.append((name, lhs.split(), "<=", rhs))
            else:
                lhs, rhs = body.split(" = ")
                constraints.append((name, lhs.split(), "=", rhs))
    return objective, constraints


def _eval_terms(tokens, assignment):
    total = 0.0
    sign = 1.0
    for tok in tokens:
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0
        elif tok == "0":
            pass
        else:
            total += sign * assignment.get(tok, 0.0)
            sign = 1.0
    return total


def _tree_assignment(instance, tree):
    assignment = {}
    for u, v in tree.edges:
        a, b = min(u, v), max(u, v)
        assignment[f"Y_{a}_{b}"] = 1.0
    for k in sorted(instance.terminals):
        path = tree.path_from_root(k)
        for u, v in zip(path, path[1:]):
            assignment[f"X_{u}_{v}_{k}"] = 1.0
    return assignment


@pytest.mark.parametrize("seed", range(10))
def test_optimal_tree_is_feasible_with_matching_objective(seed):
    rng = random.Random(3000 + seed)
    topo = synthetic_topology(rng, rng.randint(4, 9), extra_edges=rng.randint(1, 6))
    terms = rng.sample(range(topo.n), rng.randint(2, 4))
    i = inst(topo, terms[0], terms[1:])
    tree = exact_steiner(i)
    text = emit_ilp(i)
    objective, constraints = _parse_model(text)
    assignment = _tree_assignment(i, tree)

    value = sum(coef * assignment.get(var, 0.0) for var, coef in objective.items())
    assert value == pytest.approx(tree_cost(tree, i.weights))

    rhs_of = {"<=": lambda lhs, rhs: lhs <= rhs + 1e-9,
              "=": lambda lhs, rhs: abs(lhs - rhs) <= 1e-9}
    for name, tokens, op, rhs in constraints:
        if op == "<=" and len(tokens) == 3 and tokens[1] == "<=":
            continue
        lhs = _eval_terms(tokens, assignment)
        if op == "<=" and rhs.startswith("Y"):
            rhs_val = assignment.get(rhs, 0.0)
        else:
            rhs_val = float(rhs)
        assert rhs_of[op](lhs, rhs_val), f"{name} violated"
