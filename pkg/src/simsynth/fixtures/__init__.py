"""Bundled example automata (``load("mfg")`` returns ``(spec, plant)``)."""
from importlib import resources

from ..autfile import parse_aut

NAMES = ("t1", "t2", "t3", "mfg")


def path(name, role):
    return resources.files(__name__) / f"{name}_{role}.aut"


def load(name):
    spec = parse_aut(path(name, "spec").read_text(encoding="utf-8"))
    plant = parse_aut(path(name, "plant").read_text(encoding="utf-8"))
    return spec, plant
