"""Exact computations with small DG algebras: perfect objects, resolutions, base change and checks."""

__version__ = "0.1.0"

from .basechange import ExtensionMap, extend, restrict
from .checkers import (
    CheckReport,
    GenerationCertificate,
    Task,
    check_exceptional_collection,
    check_full_exceptional_collection,
    check_morita,
    check_resolution_triple,
    transport_and_recheck,
    verify_generation_certificate,
)
from .dg import DGAlgebra, DGBimodule, DGModule
from .fields import FieldTower, make_extension, prime_field, rationals
from .io import Workspace, parse_document, print_document
from .perf import Morphism, PerfObject, cone, direct_sum, free, hom_complex, shift, summand
from .resolve import ext_dims, minimal_resolution, smoothness_probe
