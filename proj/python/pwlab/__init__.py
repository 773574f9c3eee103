"""Four-class association scheme lab for Q(5,q) with the subquadrangle Q(4,q)."""

import json

from ._pwlab import CharacterizationFailure, InputError, is_prime, pipeline_stages
from . import _pwlab

__all__ = [
    "CharacterizationFailure",
    "InputError",
    "is_prime",
    "pipeline_stages",
    "run_pipeline",
    "solve_triple",
    "scheme",
    "parameters",
]


def run_pipeline(q=3, scheme_file=None, stages=(), threads=1, sample=False, seed=1, per_item=32, q_bound=7):
    """Run the checks and return the report as a dict."""
    return json.loads(
        _pwlab.run_pipeline_json(
            q=q,
            scheme_file=None if scheme_file is None else str(scheme_file),
            stages=list(stages),
            threads=threads,
            sample=sample,
            seed=seed,
            per_item=per_item,
            q_bound=q_bound,
        )
    )


def solve_triple(r, triple=(3, 3, 3), krein=False, symmetry=False, zero_sums=False):
    """Triple intersection system at order r, solved and propagated."""
    return json.loads(_pwlab.solve_triple_json(r, list(triple), krein, symmetry, zero_sums))


def scheme(q):
    """Relation table of the scheme on the points of Q(5,q) off the section."""
    return json.loads(_pwlab.scheme_json(q))


def parameters(q):
    """Intersection numbers counted on the built scheme."""
    return json.loads(_pwlab.parameters_json(q))
