"""Textual emitter for the tree-construction integer program.

Variables: one binary Y per undirected link (tree membership) and one
binary X per directed link per commodity (unit flow from the source to
each destination). Constraint families: link existence caps Y, flow
uses only tree links in both orientations, and per-commodity flow
balance is +1 at the source, -1 at the destination, 0 in transit.

Grammar (one statement per line, ';' terminated):
    min: <coef> Y_<a>_<b> [+ ...];
    c1_<a>_<b>: Y_<a>_<b> <= 1;
    c2_<a>_<b>_<k>: X_<a>_<b>_<k> <= Y_<a>_<b>;
    c3_<a>_<b>_<k>: X_<b>_<a>_<k> <= Y_<a>_<b>;
    c4_<k>: <sum of X out of src> - <sum of X into src> = 1;
    c5_<k>: ... = -1;
    c6_<k>_<v>: ... = 0;
    bin <var>;
Coefficients print with 9 significant digits; ordering is ascending in
all indices, so output is byte-stable.
"""

from .steiner import SteinerInstance
from .util import fmt9


def _flow_balance(name, k, out_edges, in_edges, rhs):
    terms = [f"X_{u}_{v}_{k}" for u, v in out_edges]
    terms += [f"- X_{u}_{v}_{k}" for u, v in in_edges]
    if not terms:
        expr = "0"
    else:
        expr = " + ".join(terms).replace("+ -", "-")
    return f"{name}: {expr} = {rhs};"


def emit_ilp(instance: SteinerInstance) -> str:
    """Render the optimization model for one instance as plain text."""
    topo = instance.topology
    links = sorted((l.a, l.b) for l in topo.links)
    dests = sorted(instance.terminals)
    vals = instance.weights.values

    lines = []
    obj = " + ".join(f"{fmt9(vals[(a, b)])} Y_{a}_{b}" for a, b in links)
    lines.append(f"min: {obj};")

    for a, b in links:
        lines.append(f"c1_{a}_{b}: Y_{a}_{b} <= 1;")
    for a, b in links:
        for k in dests:
            lines.append(f"c2_{a}_{b}_{k}: X_{a}_{b}_{k} <= Y_{a}_{b};")
    for a, b in links:
        for k in dests:
            lines.append(f"c3_{a}_{b}_{k}: X_{b}_{a}_{k} <= Y_{a}_{b};")

    out_of = {u: [] for u in range(topo.n)}
    into = {u: [] for u in range(topo.n)}
    for a, b in links:
        out_of[a].append((a, b))
        into[b].append((a, b))
        out_of[b].append((b, a))
        into[a].append((b, a))

    src = instance.source
    for k in dests:
        lines.append(_flow_balance(f"c4_{k}", k, out_of[src], into[src], 1))
    for k in dests:
        lines.append(_flow_balance(f"c5_{k}", k, out_of[k], into[k], -1))
    for k in dests:
        for v in range(topo.n):
            if v == src or v == k:
                continue
            lines.append(_flow_balance(f"c6_{k}_{v}", k, out_of[v], into[v], 0))

    for a, b in links:
        lines.append(f"bin Y_{a}_{b};")
    for a, b in links:
        for k in dests:
            lines.append(f"bin X_{a}_{b}_{k};")
            lines.append(f"bin X_{b}_{a}_{k};")
    return "\n".join(lines) + "\n"


def ilp_variable_count(instance: SteinerInstance) -> int:
    """|links| Y variables + 2 * |links| * |D| X variables."""
    m = len(instance.topology.links)
    return m + 2 * m * len(instance.terminals)
