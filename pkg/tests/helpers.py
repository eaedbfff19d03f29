"""Shared fixtures data for the test modules."""
from pathlib import Path

from pcfgames.syntax import parse_term, parse_type

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus" / "adequacy"
SAMPLES = ROOT / "corpus" / "samples"

T = parse_type
P = parse_term

NAT_NAT = T("nat -> nat")
HO = T("(nat -> nat) -> nat")
NAT2 = T("nat -> nat -> nat")
GEN_TYPES = (NAT_NAT, HO, NAT2)
