"""Projective and polynomial hulls of sampled compact sets.

Thin wrapper over the native core: fixtures, certificates and results are
plain dicts in the same JSON layout the command-line tool writes.
"""

import json

from . import _core

__version__ = _core.__version__

generator_names = _core.generator_names


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def generate(name, **params):
    return json.loads(_core.generate(name, json.dumps(params)))


def certificate(fixture, length=8):
    return json.loads(_core.certificate(_dump(fixture), length))


def best_constant(compact, x, dmax=8):
    return json.loads(_core.best_constant(_dump(compact), list(map(complex, x)), dmax))


def affine_extremal(compact, z, dmax=8):
    return json.loads(_core.affine_extremal(_dump(compact), list(map(complex, z)), dmax))


def classify_hull(compact, grid, dmax=8, threads=0):
    pts = [list(map(complex, p)) for p in grid]
    return json.loads(_core.classify_hull(_dump(compact), pts, dmax, threads))


def j_functional(disc, hyperplane=None):
    disc = json.loads(_dump(disc))
    if hyperplane is None:
        hyperplane = [1] + [0] * (len(disc["components"]) - 1)
    return _core.j_functional(json.dumps(disc), list(map(complex, hyperplane)))


def disc_search_envelope(compact, margin, p, degree=2, **search):
    out = _core.disc_search_envelope(_dump(compact), margin, list(map(complex, p)), degree,
                                     json.dumps(search) if search else "")
    return json.loads(out)


def disc_search_boundary(compact, p, degree=2, **search):
    out = _core.disc_search_boundary(_dump(compact), list(map(complex, p)), degree,
                                     json.dumps(search) if search else "")
    return json.loads(out)


def verify_psequence(cert, compact, m=1024):
    return json.loads(_core.verify_psequence(_dump(cert), _dump(compact), m))


def run(config, threads=0):
    """Runs a command-line configuration; returns {outputs, summary}."""
    return json.loads(_core.run(_dump(config), threads))
