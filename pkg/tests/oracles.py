"""Independent reference computations the test suite checks the package against.

Nothing here may call into the code paths under test: the model oracle is a
naive least-fixpoint evaluator over its own tuple representation, the
selection oracle is a plain reachability walk, and the worked-problem oracle
recomputes the expected scores with stdlib math from hand-derived symbol
sequences.
"""

import math

from corg.fol import Atom, Constant, Function, Variable

# ----------------------------------------------------- naive datalog oracle


def term_tuple(t):
    if isinstance(t, Variable):
        return ("v", t.name)
    if isinstance(t, Constant):
        return ("c", t.name)
    if isinstance(t, Function):
        return ("f", t.name, tuple(term_tuple(a) for a in t.args))
    raise TypeError(t)


def atom_tuple(a: Atom):
    return (a.predicate, tuple(term_tuple(t) for t in a.args))


def _unify(pattern, fact, binding):
    kind = pattern[0]
    if kind == "v":
        name = pattern[1]
        if name in binding:
            return binding if binding[name] == fact else None
        new = dict(binding)
        new[name] = fact
        return new
    if kind == "c":
        return binding if pattern == fact else None
    if fact[0] != "f" or fact[1] != pattern[1] or len(fact[2]) != len(pattern[2]):
        return None
    for p, g in zip(pattern[2], fact[2]):
        binding = _unify(p, g, binding)
        if binding is None:
            return None
    return binding


def _instantiate(term, binding):
    if term[0] == "v":
        return binding[term[1]]
    if term[0] == "c":
        return term
    return ("f", term[1], tuple(_instantiate(a, binding) for a in term[2]))


def naive_least_model(facts, clauses) -> set:
    """Least Herbrand model by exhaustive re-derivation until nothing changes.

    Facts and clauses use the package's AST; the evaluation itself works on
    plain tuples.  Only terminates for function-free (Datalog-style) input.
    """
    model = {atom_tuple(f) for f in facts}
    rules = []
    for c in clauses:
        if not c.positives:
            continue
        body = [atom_tuple(a) for a in c.negatives]
        rules.append((body, atom_tuple(c.positives[0])))
    changed = True
    while changed:
        changed = False
        snapshot = sorted(model)
        for body, head in rules:
            bindings = [{}]
            for pattern in body:
                pred, args = pattern
                nxt = []
                for b in bindings:
                    for fact in snapshot:
                        if fact[0] != pred or len(fact[1]) != len(args):
                            continue
                        trial = b
                        for p, g in zip(args, fact[1]):
                            trial = _unify(p, g, trial)
                            if trial is None:
                                break
                        if trial is not None:
                            nxt.append(trial)
                bindings = nxt
            for b in bindings:
                derived = (head[0], tuple(_instantiate(a, b) for a in head[1]))
                if derived not in model:
                    model.add(derived)
                    changed = True
    return model


def model_atom_tuples(partial_model) -> set:
    return {atom_tuple(a) for a in partial_model.atoms}


# ------------------------------------------------- selection closure oracle


def reachable_closure(axiom_symbols: dict, goals) -> set:
    """Axioms reachable by repeatedly following shared symbols from the goals."""
    reached = set(goals)
    selected = set()
    changed = True
    while changed:
        changed = False
        for aid, syms in axiom_symbols.items():
            if aid not in selected and syms & reached:
                selected.add(aid)
                reached |= syms
                changed = True
    return selected


# ------------------------------------------------ worked-problem hand oracle

# Symbol sequences derived by hand for COPA problem 1 over the four-edge
# fixture graph (existential scheme, no inverse, default selection):
# the premise model adds light and ground to the four premise words, the
# first alternative adds light, the second adds ground.  body/cast/c0 have
# no vector and only rescale the mean, which cosine ignores.
COPA1_VECTORS = {
    "sun": (1.0, 0.0), "rising": (1.0, 0.0), "light": (1.0, 0.0),
    "shadow": (1.0, 0.0), "grass": (0.0, 1.0), "ground": (0.0, 1.0),
    "cut": (-1.0, 0.0),
}
COPA1_SYMBOLS = {
    "premise": ["body", "c0", "cast", "shadow", "grass", "light", "ground"],
    "a1": ["sun", "c0", "rising", "light"],
    "a2": ["grass", "c0", "cut", "ground"],
}


def _mean_vector(words):
    vecs = [COPA1_VECTORS.get(w, (0.0, 0.0)) for w in words]
    n = len(vecs)
    return tuple(sum(v[i] for v in vecs) / n for i in range(2))


def _cos(u, v):
    nu = math.hypot(*u)
    nv = math.hypot(*v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return (u[0] * v[0] + u[1] * v[1]) / (nu * nv)


def copa1_expected():
    """Expected (scores, likelihoods) for the worked problem, stdlib math only."""
    premise = _mean_vector(COPA1_SYMBOLS["premise"])
    scores = [_cos(premise, _mean_vector(COPA1_SYMBOLS["a1"])),
              _cos(premise, _mean_vector(COPA1_SYMBOLS["a2"]))]
    exps = [math.exp(s - max(scores)) for s in scores]
    total = sum(exps)
    return scores, [e / total for e in exps]
