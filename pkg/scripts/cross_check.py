"""Cross-check the decision procedures on random small games.

    python scripts/cross_check.py --games 200 --seed 0

For each game: core non-emptiness by lazy search and by the explicit
region must agree, and for a random constant profile the membership
verdict must not contradict the brute-force deviation search.
"""
import argparse
import random
import time

from mpcore.decisions import core_nonempty, membership, verify_nonempty_witness
from mpcore.game import build_game, constant_profile
from mpcore.oracle import INCONCLUSIVE, NO, brute_membership


def random_game(rng, max_players=3, max_states=3, max_actions=2, max_weight=2):
    n = rng.randint(1, max_players)
    k = rng.randint(1, max_states)
    players = [str(i + 1) for i in range(n)]
    actions = {p: [f"a{j}" for j in range(rng.randint(1, max_actions))] for p in players}
    states = [f"s{j}" for j in range(k)]
    weights = {s: tuple(rng.randint(-max_weight, max_weight) for _ in players) for s in states}
    moves = {}

    def tr(s, ap):
        if (s, ap) not in moves:
            moves[(s, ap)] = rng.choice(states)
        return moves[(s, ap)]

    return build_game(players, actions, states, "s0", weights, tr,
                      {s: {f"p{j}"} for j, s in enumerate(states)})


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--games", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--players", type=int, default=3)
    ap.add_argument("--states", type=int, default=4)
    ap.add_argument("--actions", type=int, default=2)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    tally = {"games": 0, "nonempty": 0, "method_mismatch": 0, "bad_witness": 0,
             "oracle_refutes_yes": 0, "oracle_inconclusive": 0}
    t0 = time.time()
    for i in range(a.games):
        g = random_game(rng, a.players, a.states, a.actions)
        tally["games"] += 1
        s, r = core_nonempty(g), core_nonempty(g, method="region")
        tally["nonempty"] += s.answer
        if s.answer != r.answer:
            tally["method_mismatch"] += 1
            print(f"[{i}] search={s.answer} region={r.answer}")
        if s.answer and not verify_nonempty_witness(g, s.witness):
            tally["bad_witness"] += 1
        p = constant_profile(g, [rng.choice(acts) for acts in g.actions])
        brute = brute_membership(g, p)
        if brute.answer == NO and membership(g, p).answer:
            tally["oracle_refutes_yes"] += 1
            print(f"[{i}] membership says yes, oracle found a deviation for {brute.coalition.names(g)}")
        elif brute.answer == INCONCLUSIVE:
            tally["oracle_inconclusive"] += 1
    print(f"{tally}, {time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
