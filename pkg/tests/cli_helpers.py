"""Shared helpers for the command-line tests."""

import json

from stateint.cli import main

GOLDEN_COMMANDS = {
    "dilog": ["dilog", "--b", "0.8", "--z", "0"],
    "identities_qdl": ["identities", "--suite", "qdl"],
    "invariant_trefoil": ["invariant", "--manifold", "3_1_complement", "--w", "0.999"],
    "invariant_one_tet_one_face": ["invariant", "--manifold", "one_tet_one_face",
                                   "--plus", "0.1,0.25,0.15"],
    "volume_n2": ["volume", "--n", "2"],
    "complex_validate": ["complex", "--manifold", "3_1_complement", "--action", "validate"],
    "complex_shape_space": ["complex", "--manifold", "4_1_complement", "--action", "shape-space"],
}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def skeleton(doc):
    """Key structure with leaf types; lists collapse to their first element."""
    if isinstance(doc, dict):
        return {k: skeleton(v) for k, v in sorted(doc.items())}
    if isinstance(doc, list):
        return [skeleton(doc[0])] if doc else []
    if isinstance(doc, bool) or doc is None:
        return type(doc).__name__
    if isinstance(doc, (int, float)):
        return "number"
    return type(doc).__name__


def load_doc(text):
    return json.loads(text)
