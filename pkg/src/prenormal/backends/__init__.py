"""Concrete backends, registered on import under their tags."""

from ..core import registered_backends
from .pointed import CMON, MON, POCMON, PREORDCMON, PSET
from .relative import GRPD, ORDGRP, REL_EQUIVALENCE, REL_PREORDER, REL_REFLEXIVE

BACKENDS = {
    "pset": PSET,
    "mon": MON,
    "cmon": CMON,
    "preordcmon": PREORDCMON,
    "pocmon": POCMON,
    "rel-reflexive": REL_REFLEXIVE,
    "rel-equivalence": REL_EQUIVALENCE,
    "rel-preorder": REL_PREORDER,
    "grpd": GRPD,
    "ordgrp": ORDGRP,
}


def get_backend(name: str):
    try:
        return BACKENDS[name]
    except KeyError:
        extra = registered_backends().get(name)
        if extra is None:
            raise KeyError(f"unknown backend {name!r}; choose from {', '.join(BACKENDS)}") from None
        return extra
