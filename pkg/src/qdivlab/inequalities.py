"""Registry of proven inequalities between the divergences, and their verdicts."""

import math
from typing import Callable, Mapping, Optional

from .divergences import LN2, binary_entropy
from .schemas import ClassicalDivergences, DivergenceReport, InequalityVerdict

SATURATION_TOL = 1e-12

Bound = Callable[[Mapping[str, float]], tuple[float, float]]


def _bures(v: Mapping[str, float]) -> float:
    return math.sqrt(max(v["bures_sq"], 0.0))


# name -> (lhs, rhs) of "lhs <= rhs" on a DivergenceReport's values
QUANTUM_INEQUALITIES: dict[str, Bound] = {
    "td^2 <= qtd_meas": lambda v: (v["td"] ** 2, v["qtd_meas"]),
    "qtd_meas <= qtd": lambda v: (v["qtd_meas"], v["qtd"]),
    "qtd <= td": lambda v: (v["qtd"], v["td"]),
    "qtd^2/2 <= qjs": lambda v: (0.5 * v["qtd"] ** 2, v["qjs_nats"]),
    "qjs <= qtd": lambda v: (v["qjs_nats"], v["qtd"]),
    "B^2/2 <= qtd_meas": lambda v: (0.5 * v["bures_sq"], v["qtd_meas"]),
    "qtd_meas <= B^2": lambda v: (v["qtd_meas"], v["bures_sq"]),
    "B^2/2 <= qtd": lambda v: (0.5 * v["bures_sq"], v["qtd"]),
    "qtd <= B": lambda v: (v["qtd"], _bures(v)),
    "B^2/2 <= td": lambda v: (0.5 * v["bures_sq"], v["td"]),
    "td <= B": lambda v: (v["td"], _bures(v)),
    "qjs <= ln2 td": lambda v: (v["qjs_nats"], LN2 * v["td"]),
    "1-H2((1-td)/2) <= qjs2": lambda v: (
        1.0 - binary_entropy((1.0 - v["td"]) / 2),
        v["qjs2_bits"],
    ),
    "measured_qjs2_lb <= qjs2": lambda v: (v["measured_qjs2_lower_bound"], v["qjs2_bits"]),
    "q_half <= fidelity": lambda v: (v["q_half_affinity"], v["fidelity"]),
}

# classical chains on the computational-basis distributions
CLASSICAL_INEQUALITIES: dict[str, Bound] = {
    "SD^2 <= TD": lambda v: (v["sd"] ** 2, v["tdc"]),
    "TD <= SD": lambda v: (v["tdc"], v["sd"]),
    "H^2 <= TD": lambda v: (v["hellinger_sq"], v["tdc"]),
    "TD <= 2H^2": lambda v: (v["tdc"], 2.0 * v["hellinger_sq"]),
}


def alpha_inequality_name(alpha: float) -> str:
    return f"qtd_1/2 <= qtd_{alpha:g}"


def verdict(
    name: str, lhs: float, rhs: float, slack: float, kind: str = "proven"
) -> InequalityVerdict:
    """
    Judge lhs <= rhs with one-sided slack scaled by the larger operand (at least 1).
    """
    margin = rhs - lhs
    scale = max(1.0, abs(lhs), abs(rhs))
    return InequalityVerdict(
        name=name,
        kind=kind,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=margin >= -slack * scale,
        saturated=abs(margin) <= SATURATION_TOL,
    )


def evaluate_report(
    report: DivergenceReport,
    slack: float,
    qtd_alphas: Optional[Mapping[float, float]] = None,
) -> list[InequalityVerdict]:
    """
    Verdicts for every proven quantum inequality on one report.

    Args:
        report: Divergences of one pair.
        slack: One-sided slack.
        qtd_alphas: Optional alpha -> QTD_alpha values; each adds QTD_1/2 <= QTD_alpha.
    """
    values = report.model_dump(exclude={"tolerances", "cross_checks"})
    verdicts = [
        verdict(name, *bound(values), slack) for name, bound in QUANTUM_INEQUALITIES.items()
    ]
    for alpha, value in sorted((qtd_alphas or {}).items()):
        verdicts.append(verdict(alpha_inequality_name(alpha), report.qtd, value, slack))
    return verdicts


def evaluate_classical(classical: ClassicalDivergences, slack: float) -> list[InequalityVerdict]:
    values = classical.model_dump()
    return [verdict(name, *bound(values), slack) for name, bound in CLASSICAL_INEQUALITIES.items()]
