"""Command-line front end.

Exit codes: 0 answer yes (or plain success), 1 answer no, 2 usage or input
error, 3 a resource budget was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import Budget
from .decisions import (CoreWitness, Domination, a_core_gr1, check_circulation, core_nonempty,
                        dominated, e_core_gr1, exists_beneficial_deviation, membership,
                        verify_domination, verify_nonempty_witness, verify_undominated)
from .game import Coalition, Game, GameFormatError, Lasso, dump_game, dump_profile, parse_game, parse_profile
from .geometry import ResourceError, fmt_rational, fmt_vector, parse_vector
from .gr1 import SpecSyntaxError, holds_on_lasso, parse_gr1, sat_states, negate_gr1
from .oracle import NO, BruteForceBudget, brute_enforce, brute_membership
from .payoff import compute_payoff, lasso_payoff
from .reductions import (FormulaError, Qbf2Formula, dfa_bendev_expected, gen_dfa_bendev,
                         gen_qsat2_dominated, gen_qsat3_nonemptiness, parse_dfas, parse_formula, qbf_eval)
from .values import can_enforce, value_set

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class QueryResult:
    command: str
    answer: bool
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    query: dict = field(default_factory=dict)
    line: str = ""  # human-readable summary

    def to_json(self) -> str:
        body = {"command": self.command, "answer": "yes" if self.answer else "no",
                "witness": self.witness, "query": self.query, "version": __version__}
        body = _plain(body)
        # counts and seconds stay numbers
        body["stats"] = {k: v if isinstance(v, (int, float)) else _plain(v) for k, v in self.stats.items()}
        return json.dumps(body, sort_keys=True, indent=2)


def _plain(obj):
    """Make a value JSON-ready with rationals as "num/den" strings."""
    if isinstance(obj, (Fraction, int)) and not isinstance(obj, bool):
        return fmt_rational(Fraction(obj))
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _frac(text: str) -> Fraction:
    return Fraction(text)


# --- witness encoding ---------------------------------------------------------

def _domination_json(g: Game, w: Domination) -> dict:
    return {"coalition": w.coalition.names(g), "z": list(w.z)}


def _lasso_json(g: Game, lasso: Lasso) -> dict:
    return lasso.names(g)


def _core_json(g: Game, w: CoreWitness) -> dict:
    circ = [{"from": g.states[u], "to": g.states[v], "weight": q} for (u, v), q in sorted(w.circulation.items())]
    return {"x": list(w.x), "circulation": circ, "lasso": _lasso_json(g, w.lasso), "exact": w.exact,
            "variant": w.variant, "states": sorted(g.states[s] for s in w.states)}


def _core_from_json(g: Game, d: dict) -> CoreWitness:
    idx = g.state_index
    circ = {(idx[e["from"]], idx[e["to"]]): _frac(e["weight"]) for e in d["circulation"]}
    stem = tuple(idx[s] for s in d["lasso"]["stem"])
    cycle = tuple(idx[s] for s in d["lasso"]["cycle"])
    return CoreWitness(tuple(_frac(v) for v in d["x"]), circ, Lasso(stem, cycle), bool(d["exact"]),
                       d["variant"], frozenset(idx[s] for s in d["states"]))


# --- commands -------------------------------------------------------------------

def _load_game(path: str) -> Game:
    return parse_game(Path(path).read_text())


def _load_profile(g: Game, path: str):
    return parse_profile(g, Path(path).read_text())


def _spec_text(arg: str) -> str:
    return Path(arg[1:]).read_text().strip() if arg.startswith("@") else arg


def _budget(a) -> Budget:
    return Budget(max_cycles=a.max_cycles, max_p2_strategies=a.max_p2_strategies,
                  max_facet_dim=a.max_facet_dim, max_search_nodes=a.max_search_nodes,
                  max_subsets=a.max_subsets, max_cuts=a.max_cuts)


def _oracle_budget(a) -> BruteForceBudget:
    return BruteForceBudget(max_memoryless_profiles=a.max_profiles, max_denominator=a.denominator,
                            max_cycle_points=a.max_cycle_points, max_period=a.max_period)


def _state_arg(g: Game, name: str) -> int:
    if name not in g.state_index:
        raise UsageError(f"unknown state {name!r}")
    return g.state_index[name]


def _vector_arg(g: Game, text: str, size: int | None = None):
    x = parse_vector(text)
    size = g.n if size is None else size
    if len(x) != size:
        raise UsageError(f"vector needs {size} entries, got {len(x)}")
    return x


def _stats(v_stats: dict, keep=("coalitions_checked", "search_nodes", "lps", "cuts", "candidates",
                                "bundles", "parts")) -> dict:
    return {k: v_stats[k] for k in keep if k in v_stats}


def cmd_payoff(a) -> QueryResult:
    g = _load_game(a.game)
    p = _load_profile(g, a.profile)
    x = compute_payoff(g, p)
    return QueryResult("payoff", True, {"payoff": list(x)}, {}, {"game": a.game, "profile": a.profile},
                       fmt_vector(x))


def cmd_dominated(a) -> QueryResult:
    g = _load_game(a.game)
    s = _state_arg(g, a.state)
    x = _vector_arg(g, a.vector)
    v = dominated(g, s, x, _budget(a), a.jobs)
    w = _domination_json(g, v.witness) if v.answer else None
    line = (f"yes coalition={{{','.join(w['coalition'])}}} z={fmt_vector(v.witness.z)}" if v.answer
            else "no")
    return QueryResult("dominated", v.answer, w, _stats(v.stats),
                       {"game": a.game, "state": a.state, "vector": list(x)}, line)


def cmd_bendev(a) -> QueryResult:
    g = _load_game(a.game)
    p = _load_profile(g, a.profile)
    v = exists_beneficial_deviation(g, p, _budget(a), a.jobs)
    x = v.stats["payoff"]
    w = _domination_json(g, v.witness) if v.answer else None
    line = (f"yes payoff={fmt_vector(x)} coalition={{{','.join(w['coalition'])}}} z={fmt_vector(v.witness.z)}"
            if v.answer else f"no payoff={fmt_vector(x)}")
    return QueryResult("bendev", v.answer, w, {**_stats(v.stats), "payoff": list(x)},
                       {"game": a.game, "profile": a.profile}, line)


def cmd_membership(a) -> QueryResult:
    g = _load_game(a.game)
    p = _load_profile(g, a.profile)
    v = membership(g, p, _budget(a), a.jobs)
    x = v.stats["payoff"]
    w = None if v.answer else _domination_json(g, v.witness)
    line = (f"yes payoff={fmt_vector(x)}" if v.answer else
            f"no payoff={fmt_vector(x)} deviation by {{{','.join(w['coalition'])}}} z={fmt_vector(v.witness.z)}")
    return QueryResult("membership", v.answer, w, {**_stats(v.stats), "payoff": list(x)},
                       {"game": a.game, "profile": a.profile}, line)


def cmd_nonempty(a) -> QueryResult:
    g = _load_game(a.game)
    v = core_nonempty(g, _budget(a), a.method, a.jobs)
    if not v.answer:
        return QueryResult("nonempty", False, None, _stats(v.stats), {"game": a.game}, "no")
    cw = v.stats.get("witness")
    w = _core_json(g, cw) if cw is not None else {"x": list(v.witness)}
    return QueryResult("nonempty", True, w, _stats(v.stats), {"game": a.game, "method": a.method},
                       f"yes x={fmt_vector(v.witness)}")


def _core_line(g: Game, answer: bool, w: CoreWitness | None, yes_word: str = "yes") -> str:
    if w is None:
        return yes_word if answer else "no"
    lasso = w.lasso
    run = " ".join(g.states[s] for s in lasso.stem) + " (" + " ".join(g.states[s] for s in lasso.cycle) + ")^w"
    return f"{'yes' if answer else 'no'} x={fmt_vector(w.x)} run={run.strip()}{'' if w.exact else ' (approx)'}"


def cmd_ecore(a) -> QueryResult:
    g = _load_game(a.game)
    text = _spec_text(a.spec)
    spec = parse_gr1(text)
    v = e_core_gr1(g, spec, _budget(a), a.jobs, along_path=a.along_path)
    w = _core_json(g, v.witness) if v.answer else None
    return QueryResult("ecore", v.answer, w, _stats(v.stats),
                       {"game": a.game, "spec": text, "along_path": a.along_path},
                       _core_line(g, v.answer, v.witness if v.answer else None))


def cmd_acore(a) -> QueryResult:
    g = _load_game(a.game)
    text = _spec_text(a.spec)
    spec = parse_gr1(text)
    v = a_core_gr1(g, spec, _budget(a), a.jobs, along_path=a.along_path)
    w = None if v.answer or v.witness is None else _core_json(g, v.witness)
    line = "yes" if v.answer else _core_line(g, False, v.witness) + " violates the objective"
    return QueryResult("acore", v.answer, w, _stats(v.stats),
                       {"game": a.game, "spec": text, "along_path": a.along_path}, line)


def cmd_values(a) -> QueryResult:
    g = _load_game(a.game)
    names = [p for p in a.coalition.split(",") if p]
    unknown = [p for p in names if p not in g.player_index]
    if unknown or not names:
        raise UsageError(f"bad coalition {a.coalition!r}")
    c = Coalition.of(g, names)
    s = _state_arg(g, a.state)
    vs = value_set(g, c, s, _budget(a))
    parts = [[str(h) for h in p.ineqs] for p in vs.union.parts]
    w = {"coalition": c.names(g), "parts": parts}
    q = {"game": a.game, "coalition": c.names(g), "state": a.state}
    if a.point is None:
        coords = ", ".join(f"x{k}={name}" for k, name in enumerate(c.names(g), 1))
        line = (" OR ".join("{" + "; ".join(p) + "}" for p in parts) if parts else "empty") + f"  [{coords}]"
        return QueryResult("values", bool(parts), w, {"parts": len(parts)}, q, line)
    x = _vector_arg(g, a.point, len(c))
    ok = can_enforce(g, c, s, x, _budget(a))
    q["point"] = list(x)
    return QueryResult("values", ok, w, {"parts": len(parts)}, q,
                       f"{'yes' if ok else 'no'} {fmt_vector(x)} {'is' if ok else 'is not'} enforceable")


def cmd_gen(a) -> QueryResult:
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    text = Path(a.input).read_text()
    files = {}
    if a.kind in ("qsat2", "qsat3"):
        f = parse_formula(text)
        if a.kind == "qsat2":
            if not isinstance(f, Qbf2Formula):
                raise UsageError("qsat2 needs blocks 'exists, forall'")
            g, s, x = gen_qsat2_dominated(f)
            expected = qbf_eval(f)
            query = {"command": "dominated", "state": s, "vector": list(x)}
        else:
            if isinstance(f, Qbf2Formula):
                raise UsageError("qsat3 needs blocks 'exists, forall, exists'")
            g = gen_qsat3_nonemptiness(f)
            expected = qbf_eval(f)
            query = {"command": "nonempty"}
        (out / "game.json").write_text(dump_game(g))
        files["game"] = str(out / "game.json")
    else:
        automata = parse_dfas(text)
        g, p = gen_dfa_bendev(automata)
        expected = dfa_bendev_expected(automata)
        (out / "game.json").write_text(dump_game(g))
        (out / "profile.json").write_text(dump_profile(g, p))
        files = {"game": str(out / "game.json"), "profile": str(out / "profile.json")}
        query = {"command": "bendev"}
    side = {"expected": "yes" if expected else "no", **query, **files}
    (out / "expected.json").write_text(json.dumps(_plain(side), sort_keys=True, indent=2) + "\n")
    files["expected"] = str(out / "expected.json")
    return QueryResult("gen", True, {"files": files}, {"players": g.n, "states": len(g.states)},
                       {"kind": a.kind, "input": a.input},
                       f"wrote {', '.join(sorted(files.values()))}; expected {side['expected']}")


def cmd_verify(a) -> QueryResult:
    """Re-check a saved ``--json`` result against its game."""
    res = json.loads(Path(a.result).read_text())
    q = res.get("query", {})
    cmd = res.get("command")
    answer = res.get("answer") == "yes"
    w = res.get("witness")
    g = _load_game(a.game or q["game"])
    budget = _budget(a)
    ob = _oracle_budget(a)
    checks: dict[str, bool | str] = {}

    def check_domination(s: int, x):
        c = Coalition.of(g, w["coalition"])
        z = tuple(_frac(v) for v in w["z"])
        checks["enforceable"] = verify_domination(g, s, x, Domination(c, z), budget)
        if a.paranoid:
            checks["brute_enforce"] = brute_enforce(g, c, s, z, ob)

    if cmd == "payoff":
        p = _load_profile(g, a.profile or q["profile"])
        checks["payoff"] = list(compute_payoff(g, p)) == [_frac(v) for v in w["payoff"]]
    elif cmd == "dominated":
        s = _state_arg(g, q["state"])
        x = [_frac(v) for v in q["vector"]]
        if answer:
            check_domination(s, x)
        else:
            checks["undominated"] = verify_undominated(g, x, [s], budget)
    elif cmd in ("bendev", "membership"):
        p = _load_profile(g, a.profile or q["profile"])
        x = compute_payoff(g, p)
        deviation = (cmd == "bendev") == answer
        if deviation:
            check_domination(g.init_index, x)
        else:
            checks["undominated"] = verify_undominated(g, x, None, budget)
            if a.paranoid:
                checks["brute_membership"] = brute_membership(g, p, ob).answer
    elif cmd in ("nonempty", "ecore", "acore"):
        if w is None:
            checks["witness"] = "none to check"
        elif "circulation" not in w:  # region method: a bare payoff vector
            x = [_frac(v) for v in w["x"]]
            checks["enforceable"] = verify_nonempty_witness(g, x, budget)
            if a.paranoid:
                checks["brute_enforce"] = brute_enforce(g, Coalition.grand(g), g.init_index, x, ob)
        else:
            cw = _core_from_json(g, w)
            visits, avoid = [], frozenset()
            if cmd != "nonempty":
                spec = parse_gr1(q["spec"])
                if cmd == "ecore":
                    if cw.variant.startswith("premise-escape:"):
                        avoid = sat_states(g, spec.premises[int(cw.variant.split(":")[1]) - 1])
                    else:
                        visits = [sat_states(g, t) for t in spec.guarantees]
                else:
                    b = negate_gr1(spec)[int(cw.variant.split(":")[1]) - 1] if ":" in cw.variant else None
                    if b is not None:
                        visits = [sat_states(g, v) for v in b.visit]
                        avoid = frozenset().union(*(sat_states(g, v) for v in b.avoid))
                if cw.exact:
                    checks["objective"] = holds_on_lasso(g, spec, cw.lasso) == (cmd == "ecore")
            checks["circulation"] = check_circulation(g, cw, visits, avoid)
            checks["undominated"] = verify_undominated(g, cw.x, None, budget)
            if cmd == "nonempty":
                checks["enforceable"] = verify_nonempty_witness(g, cw.x, budget)
            if cw.exact:
                checks["lasso_payoff"] = tuple(lasso_payoff(g, cw.lasso)) == tuple(cw.x)
            if a.paranoid:
                checks["brute_enforce"] = brute_enforce(g, Coalition.grand(g), g.init_index, cw.x, ob)
    else:
        raise UsageError(f"cannot verify results of {cmd!r}")
    ok = all(v is True or v in ("yes", "inconclusive", "none to check") for v in checks.values())
    if checks.get("brute_membership") == NO:
        ok = False
    line = ("verified" if ok else "REJECTED") + " " + " ".join(f"{k}={_show(v)}" for k, v in sorted(checks.items()))
    return QueryResult("verify", ok, {"checks": checks}, {}, {"result": a.result, "paranoid": a.paranoid}, line)


def _show(v) -> str:
    return ("ok" if v else "FAIL") if isinstance(v, bool) else str(v)


# --- argument parsing -------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpcore", description="Core queries on concurrent mean-payoff games.")
    ap.add_argument("--version", action="version", version=f"mpcore {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--timings", action="store_true", help="add wall-clock time to the stats")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for coalition checks")
    d = Budget()
    b = common.add_argument_group("budgets")
    b.add_argument("--max-cycles", type=int, default=d.max_cycles)
    b.add_argument("--max-p2-strategies", type=int, default=d.max_p2_strategies)
    b.add_argument("--max-facet-dim", type=int, default=d.max_facet_dim)
    b.add_argument("--max-search-nodes", type=int, default=d.max_search_nodes)
    b.add_argument("--max-subsets", type=int, default=d.max_subsets)
    b.add_argument("--max-cuts", type=int, default=d.max_cuts)
    o = BruteForceBudget()
    ob = common.add_argument_group("brute-force oracle (verify --paranoid)")
    ob.add_argument("--denominator", type=int, default=o.max_denominator)
    ob.add_argument("--max-profiles", type=int, default=o.max_memoryless_profiles)
    ob.add_argument("--max-cycle-points", type=int, default=o.max_cycle_points)
    ob.add_argument("--max-period", type=int, default=o.max_period)

    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = add("payoff", cmd_payoff, "mean payoff of a strategy profile")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p = add("dominated", cmd_dominated, "can a coalition strictly beat a payoff vector?")
    p.add_argument("--game", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--vector", required=True, help="comma-separated integers or num/den")
    p = add("bendev", cmd_bendev, "does a profile admit a beneficial deviation?")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p = add("membership", cmd_membership, "is a profile in the core?")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p = add("nonempty", cmd_nonempty, "is the core non-empty?")
    p.add_argument("--game", required=True)
    p.add_argument("--method", choices=["search", "region"], default="search")
    for name, fn, h in (("ecore", cmd_ecore, "does some core profile satisfy a GR(1) objective?"),
                        ("acore", cmd_acore, "do all core profiles satisfy a GR(1) objective?")):
        p = add(name, fn, h)
        p.add_argument("--game", required=True)
        p.add_argument("--spec", required=True, help="objective text, or @file")
        p.add_argument("--along-path", action="store_true",
                       help="require undominatedness at every state of the run")
    p = add("values", cmd_values, "values a coalition can enforce")
    p.add_argument("--game", required=True)
    p.add_argument("--coalition", required=True, help="comma-separated player names")
    p.add_argument("--state", required=True)
    p.add_argument("--point", help="test this coalition-coordinate vector")
    p = add("gen", cmd_gen, "generate a hard instance with its expected answer")
    p.add_argument("kind", choices=["qsat2", "qsat3", "dfa"])
    p.add_argument("--input", required=True, help="formula or automata file")
    p.add_argument("--out", required=True, help="output directory")
    p = add("verify", cmd_verify, "re-check a saved --json result")
    p.add_argument("--result", required=True)
    p.add_argument("--game", help="defaults to the game recorded in the result")
    p.add_argument("--profile", help="defaults to the profile recorded in the result")
    p.add_argument("--paranoid", action="store_true", help="add brute-force cross-checks")
    return ap


def main(argv=None) -> int:
    ap = _parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code not in (0, None) else EXIT_YES
    t0 = time.perf_counter()
    try:
        res = a.fn(a)
    except ResourceError as e:
        print(f"error: resource budget exceeded: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, GameFormatError, SpecSyntaxError, FormulaError, ValueError, KeyError,
            OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    if a.timings:
        res.stats["seconds"] = round(time.perf_counter() - t0, 3)
    print(res.to_json() if a.json else res.line)
    return EXIT_YES if res.answer else EXIT_NO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
