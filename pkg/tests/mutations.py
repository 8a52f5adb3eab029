from knowhow.formula import And, Bot, Implies, Know, Not, Or, Strat, Howto, Var, children

_REBUILD = {
    Not: lambda f, cs: Not(*cs),
    Implies: lambda f, cs: Implies(*cs),
    And: lambda f, cs: And(*cs),
    Or: lambda f, cs: Or(*cs),
    Know: lambda f, cs: Know(f.coalition, *cs),
    Strat: lambda f, cs: Strat(f.coalition, *cs),
    Howto: lambda f, cs: Howto(f.coalition, *cs),
}


def _positions(f, path=()):
    yield path
    for i, c in enumerate(children(f)):
        yield from _positions(c, path + (i,))


def _replace(f, path, new):
    if not path:
        return new
    cs = list(children(f))
    cs[path[0]] = _replace(cs[path[0]], path[1:], new)
    return _REBUILD[type(f)](f, cs)


def _at(f, path):
    for i in path:
        f = children(f)[i]
    return f


def _variants(g):
    yield Not(g)
    yield Var("zz_mutant")
    if isinstance(g, (Know, Strat, Howto)):
        flip = {Know: Strat, Strat: Howto, Howto: Know}[type(g)]
        yield flip(g.coalition, g.sub)
        yield type(g)(g.coalition ^ frozenset("z"), g.sub)
    if isinstance(g, Implies):
        yield Implies(g.right, g.left)
    yield Bot()


def mutate_formula(rng, f):
    """Replace one randomly chosen subformula so that the result differs from ``f``."""
    positions = list(_positions(f))
    while True:
        path = rng.choice(positions)
        g = _at(f, path)
        new = rng.choice(list(_variants(g)))
        out = _replace(f, path, new)
        if out != f:
            return out
