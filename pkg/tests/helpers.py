"""Random instances shared by the property tests."""

from procgame.algebra import JOIN, NONE, CommunicationFunction
from procgame.core import Action, Joint, build_system
from procgame.dsl import Act, Choice, Cond, Seq, compile_payoffs, expr_to_ts
from procgame.formula import TRUE, Exact, Mid, Not, Or, Pos, Pre
from procgame.game import ProcessGame


def player_actions(i, d):
    return [Action(f"{chr(ord('a') + i)}{k}", i) for k in range(d)]


def random_condition(rng, pool):
    x = Action(rng.choice(pool).name)
    y = Action(rng.choice(pool).name)
    return rng.choice([
        Exact((x,)), Pre((x,)), Mid((x,)), Pos((x,)), Not(Mid((x,))),
        Or(Mid((x,)), Pos((y,))), Not(Pos((x,))), Mid((x, y)),
    ])


def random_term(rng, actions, pool, depth=2):
    r = rng.random()
    if depth == 0 or r < 0.35:
        e = Act(rng.choice(actions))
    elif r < 0.7:
        e = Choice(random_term(rng, actions, pool, depth - 1),
                   random_term(rng, actions, pool, depth - 1))
    else:
        e = Seq(random_term(rng, actions, pool, depth - 1),
                random_term(rng, actions, pool, depth - 1))
    if rng.random() < 0.5:
        e = Cond(random_condition(rng, pool), e)
    return e


def random_payoffs(rng, pool, i):
    rules = [(random_condition(rng, pool), rng.randint(0, 3))
             for _ in range(rng.randint(0, 3))]
    return compile_payoffs(rules + [(TRUE, rng.randint(0, 3))], i)


def random_process_game(rng, n, d, mode=None, depth=2, payoffs=False):
    mode = mode or rng.choice([NONE, JOIN])
    acts = [player_actions(i, rng.randint(1, d)) for i in range(n)]
    pool = [a for group in acts for a in group]
    exprs = [random_term(rng, acts[i], pool, depth) for i in range(n)]
    return ProcessGame(
        players=tuple(f"p{i}" for i in range(n)),
        systems=tuple(expr_to_ts(e) for e in exprs),
        payoffs=tuple(random_payoffs(rng, pool, i) if payoffs
                      else compile_payoffs([(TRUE, 0)], i) for i in range(n)),
        gamma=CommunicationFunction(mode),
        exprs=tuple(exprs),
    )


def random_set_system(rng, size=8):
    """An explicit tree whose labels mix atomic and joint actions."""
    atoms = [Action(f"{c}{i}", i) for i in range(3) for c in "xy"]
    labels = list(atoms)
    for _ in range(6):
        chosen = {}
        for a in rng.sample(atoms, rng.randint(2, 4)):
            chosen.setdefault(a.owner, a)
        if len(chosen) >= 2:
            labels.append(Joint(frozenset(chosen.values())))
    transitions = []
    for t in range(1, size):
        transitions.append((rng.randrange(t), rng.choice(labels), t))
    return build_system(transitions, 0, [t for t in range(size) if rng.random() < 0.5])


def random_explicit_system(rng, size=8, alphabet="abcd"):
    transitions = [(rng.randrange(t), Action(rng.choice(alphabet)), t)
                   for t in range(1, size)]
    extra = [(rng.randrange(size), Action(rng.choice(alphabet)), rng.randrange(size))
             for _ in range(rng.randint(0, 3))]
    return build_system(transitions + extra, 0, [size - 1])
