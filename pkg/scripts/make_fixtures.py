"""Write the reference games, profiles, formulas and automata to fixtures/."""
from pathlib import Path

from mpcore import fixtures as fx
from mpcore.game import dump_game, dump_profile
from mpcore.reductions import sink_gadget

OUT = Path(__file__).resolve().parent.parent / "fixtures"

GAMES = {
    "example1": fx.two_robots(),
    "example2": fx.three_sinks(),
    "example2_balanced": fx.three_sinks_balanced(),
    "weak_dominance": fx.weak_dominance(),
    "sink_gadget": sink_gadget(),
}
PROFILES = {
    "alternating": ("example1", fx.alternating_profile),
    "stuck": ("example1", fx.stuck_profile),
    "go_to_t": ("example2", fx.go_to_t_profile),
    "stay_at_s": ("example2_balanced", fx.stay_at_s_profile),
    "both_left": ("weak_dominance", fx.both_left_profile),
}
TEXTS = {
    "qsat2_example.qbf": """\
# exists x1 x2 forall y1 y2: (x1 & x2 & y1) | (x1 & -x2 & -y2) | (x1 & x2 & -y1)
exists x1 x2
forall y1 y2
clause x1 x2 y1
clause x1 -x2 -y2
clause x1 x2 -y1
""",
    "qsat3_example.qbf": """\
# exists x1 x2 forall y1 exists z1: (x1|x2|y1) & (-x1|y1|z1) & (-x2|-y1|-z1)
exists x1 x2
forall y1
exists z1
clause x1 x2 y1
clause -x1 y1 z1
clause -x2 -y1 -z1
""",
    "dfa_even_odd.dfa": """\
# even and odd numbers of steps: no common word, so a deviation exists
states e o
alphabet s0
init e
accept e
e s0 o
o s0 e
---
states e o
alphabet s0
init e
accept o
e s0 o
o s0 e
""",
}


def main():
    OUT.mkdir(exist_ok=True)
    for name, g in GAMES.items():
        (OUT / f"{name}.game").write_text(dump_game(g))
    for name, (game, make) in PROFILES.items():
        g = GAMES[game]
        (OUT / f"{name}.profile").write_text(dump_profile(g, make(g)))
    for name, text in TEXTS.items():
        (OUT / name).write_text(text)
    print(f"wrote {len(GAMES) + len(PROFILES) + len(TEXTS)} files to {OUT}")


if __name__ == "__main__":
    main()
