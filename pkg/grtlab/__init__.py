from .utils import get_logger
from .config import RunConfig
from .reports import VerificationFailure, VerificationReport, certify, render_reports
from .lie_core import LieAlgebraError, LieSeries, LyndonWord, bracket, lyndon_basis, substitute, witt_dimension
from .lie_format import LieParseError, format_series, from_json, parse, to_json
from .grt_ops import (alpha, antihexagon_project, antihexagon_residual, drinfeld_eq3_residual, grt_solutions,
                      hexagon_project, hexagon_residual, ihara_bracket, lambda_compose, sigma3, sigma5, swap)
from .dk_pentagon import PresentedLieAlgebra, build, drinfeld_kohno, pentagon_residual
from .finite_groups import BinaryPairing, FiniteGroup, NaryMap, group_from_spec, make_pairing
from .group_lab import run_lab_group
from .torsor_lab import TorsorTable, run_lab_torsor, torsor_from_group
from .five_cycle import bloch_wigner, dilog, five_project, five_term_check, fp_cycle
from .orchestrator import run_suite
