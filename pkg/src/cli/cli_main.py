"""
Interface en ligne de commande
Sous-commandes : nl, nl-at-value, content, kl, scan, gamma-scan, quantum,
certificate, check-monotones
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from config.catalogue import FamilyKind, get_family, get_family_names, resolve_parameters
from config.settings import (
    APP_CONFIG, CLI_CONFIG, REFERENCE_VALUES, SCAN_CONFIG,
    get_exit_code, get_output_path, get_tolerance
)
from cli.scans import (
    ScanSpec, parse_reference, resolve_distribution, resolve_functional,
    run_gamma_scan, run_scan, write_csv, write_gnuplot
)
from data.models import Behavior
from data.storage import load_behavior, save_behavior, write_certificate
from inequalities.families import make_cglmp, make_mermin
from inequalities.functionals import evaluate, make_chsh
from measures.content import bell_lower_bound_content, nonlocal_content
from measures.entropy import kl_upper_bound, nl_kl, pinsker_bound
from measures.trace import dual_certificate, nl, nl_given_value
from operations.monotones import run_monotonicity_trials
from quantum.setups import cglmp_setup, chsh_tsirelson_setup, ghz_mermin_setup
from quantum.states import born_behavior
from scenario.behaviors import is_nonsignaling, validate_behavior
from utils.errors import DomainError, NonLocalityError, ParseError, SolverError
from utils.log import setup_logging

logger = logging.getLogger(__name__)


class InfeasibleQuery(NonLocalityError):
    """Valeur de fonctionnelle hors de portée pour nl-at-value"""


def _fmt(value: float) -> str:
    return SCAN_CONFIG["float_format"] % value


def _load_checked(path: str, tol: Optional[float]) -> Behavior:
    """Charger un comportement et refuser s'il n'est pas une distribution valide"""
    behavior = load_behavior(path)
    report = validate_behavior(behavior, tol)
    if not report.is_valid:
        raise DomainError(
            f"{path} : " + "; ".join(error.message for error in report.errors)
        )
    return behavior


def _default_output(name: str) -> Path:
    return get_output_path() / name


def cmd_nl(args: argparse.Namespace) -> int:
    """NL, résumé du certificat dual et point local le plus proche"""
    behavior = _load_checked(args.behavior, args.tol)
    distribution = resolve_distribution(args.inputs, behavior.scenario)
    result = nl(behavior, distribution)
    certificate = dual_certificate(behavior, distribution)

    out = Path(args.out) if args.out else _default_output(f"{Path(args.behavior).stem}_closest.txt")
    save_behavior(result.closest_local, out, comment=f"closest local point, NL={result.value!r}")

    print(f"NL={_fmt(result.value)}")
    print(f"CERTIFICATE={_fmt(certificate.value)}")
    print(f"CERTIFICATE_STRATEGY_MAX={_fmt(certificate.strategy_max)}")
    print(f"CLOSEST_LOCAL={out}")
    return get_exit_code("ok")


def cmd_nl_at_value(args: argparse.Namespace) -> int:
    """NL minimale parmi les comportements non signalants tels que f·q = c"""
    functional = resolve_functional(args.functional)
    distribution = resolve_distribution(args.inputs, functional.scenario, functional)
    result = nl_given_value(functional, args.value, distribution)
    if not result.is_feasible:
        raise InfeasibleQuery(f"{functional.label} = {args.value:g} est hors de portée ({result.status.value})")

    print(f"NL={_fmt(result.value)}")
    if args.out:
        out = Path(args.out)
        save_behavior(result.behavior, out, comment=f"{functional.label}={args.value!r}")
        local_out = out.with_name(f"{out.stem}_closest{out.suffix}")
        save_behavior(result.closest_local, local_out, comment="closest local point")
        print(f"BEHAVIOR={out}")
        print(f"CLOSEST_LOCAL={local_out}")
    return get_exit_code("ok")


def cmd_content(args: argparse.Namespace) -> int:
    """Contenu non local et, si une fonctionnelle est donnée, son minorant"""
    behavior = _load_checked(args.behavior, args.tol)
    if not is_nonsignaling(behavior):
        logger.warning("%s n'est pas non signalant", args.behavior)

    print(f"CONTENT={_fmt(nonlocal_content(behavior))}")
    if args.functional:
        functional = resolve_functional(args.functional)
        print(f"BELL_LOWER_BOUND={_fmt(bell_lower_bound_content(functional, behavior))}")
    return get_exit_code("ok")


def cmd_kl(args: argparse.Namespace) -> int:
    """Entropie relative minimale, majorant au point NL et borne de Pinsker"""
    behavior = _load_checked(args.behavior, args.tol)
    distribution = resolve_distribution(args.inputs, behavior.scenario)
    result = nl_kl(behavior, distribution, gap_tolerance=args.gap)
    trace = nl(behavior, distribution)

    print(f"KL={_fmt(result.value)}")
    print(f"KL_RAW={_fmt(result.unscaled)}")
    print(f"KL_GAP={_fmt(result.gap)}")
    print(f"KL_UPPER={_fmt(kl_upper_bound(behavior, trace.closest_local, distribution))}")
    print(f"PINSKER={_fmt(pinsker_bound(min(1.0, trace.value)))}")
    if not result.converged:
        logger.warning("Frank-Wolfe non convergé, écart %.2e", result.gap)
    return get_exit_code("ok")


def cmd_certificate(args: argparse.Namespace) -> int:
    """Écrire le certificat dual"""
    behavior = _load_checked(args.behavior, args.tol)
    distribution = resolve_distribution(args.inputs, behavior.scenario)
    certificate = dual_certificate(behavior, distribution)

    out = Path(args.out) if args.out else _default_output(f"{Path(args.behavior).stem}_certificate.txt")
    write_certificate(certificate, out)
    print(f"CERTIFICATE={_fmt(certificate.value)}")
    print(f"CERTIFICATE_FILE={out}")
    return get_exit_code("ok")


def _scan_spec(args: argparse.Namespace, grid_max: Optional[float], default_name: str, **extra) -> ScanSpec:
    try:
        return ScanSpec(
            grid_min=args.min,
            grid_max=grid_max,
            steps=args.steps,
            output=Path(args.out) if args.out else _default_output(default_name),
            jobs=args.jobs,
            **extra
        )
    except ValidationError as e:
        raise DomainError(str(e))


def cmd_scan(args: argparse.Namespace) -> int:
    """Courbe NL(c) pour une fonctionnelle"""
    grid_max = None if args.max == "ns" else float(args.max)
    spec = _scan_spec(args, grid_max, "scan.csv", functional=args.functional, inputs=args.inputs)
    table = run_scan(spec)
    if args.gnuplot:
        write_gnuplot(spec.output, "value", {2: "NL"})

    failed = int((table["status"] == "error").sum())
    print(f"ROWS={len(table)}")
    print(f"CSV={spec.output}")
    if failed:
        logger.warning("%d points en échec", failed)
    return get_exit_code("ok")


def cmd_gamma_scan(args: argparse.Namespace) -> int:
    """Famille γ de qutrits : CGLMP, NL, KL et Pinsker"""
    spec = _scan_spec(args, args.max, "gamma_scan.csv", skip_kl=args.skip_kl)
    table = run_gamma_scan(spec)
    if args.gnuplot:
        write_gnuplot(spec.output, "gamma", {3: "NL", 4: "min KL", 6: "KL upper", 7: "Pinsker"})

    best = table.loc[table["nl"].idxmax()]
    print(f"ROWS={len(table)}")
    print(f"GAMMA_MAX_NL={_fmt(best['gamma'])} (référence {REFERENCE_VALUES['gamma_maximizer']})")
    print(f"MAX_NL={_fmt(best['nl'])}")
    print(f"CSV={spec.output}")
    return get_exit_code("ok")


def _quantum_behavior(family: str, params: Dict) -> tuple:
    """(comportement, fonctionnelle associée) d'une famille quantique"""
    if family == "chsh-tsirelson":
        state, measurements = chsh_tsirelson_setup()
        functional = make_chsh()
    elif family == "cglmp-gamma":
        state, measurements = cglmp_setup(params["gamma"])
        functional = make_cglmp(3)
    else:
        state, measurements = ghz_mermin_setup(params["N"])
        functional = make_mermin(params["N"])[1]
    return born_behavior(state, measurements), functional


def cmd_quantum(args: argparse.Namespace) -> int:
    """Comportement quantique d'une famille intégrée, écrit dans un fichier"""
    family = get_family(args.family)
    if not family or family["kind"] != FamilyKind.QUANTUM:
        raise DomainError(
            f"Famille quantique inconnue : {args.family} "
            f"({', '.join(get_family_names(FamilyKind.QUANTUM))})"
        )
    _, raw = parse_reference(":" + ",".join(args.params))
    try:
        params = resolve_parameters(args.family, raw)
    except ValueError as e:
        raise DomainError(str(e))

    behavior, functional = _quantum_behavior(args.family, params)
    tol = get_tolerance("quantum_tolerance")
    if not validate_behavior(behavior, tol).is_valid or not is_nonsignaling(behavior, tol):
        logger.warning("Comportement quantique hors tolérance %g", tol)

    out = Path(args.out) if args.out else _default_output(f"{args.family}.txt")
    save_behavior(behavior, out, comment=f"{args.family} {params}")
    print(f"VALUE={_fmt(evaluate(functional, behavior))}")
    print(f"BEHAVIOR={out}")
    return get_exit_code("ok")


def cmd_check_monotones(args: argparse.Namespace) -> int:
    """Essais de monotonie ; code 1 si un essai échoue"""
    table = run_monotonicity_trials(trials=args.trials, seed=args.seed, jobs=args.jobs)
    if args.out:
        write_csv(table, args.out)

    summary = table.groupby("class", sort=False)["passed"].agg(["count", "sum"])
    for name, row in summary.iterrows():
        print(f"{name}: {int(row['sum'])}/{int(row['count'])}")
    if not table["passed"].all():
        return get_exit_code("failure")
    return get_exit_code("ok")


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "nl": cmd_nl,
    "nl-at-value": cmd_nl_at_value,
    "content": cmd_content,
    "kl": cmd_kl,
    "scan": cmd_scan,
    "gamma-scan": cmd_gamma_scan,
    "quantum": cmd_quantum,
    "certificate": cmd_certificate,
    "check-monotones": cmd_check_monotones
}


def build_parser() -> argparse.ArgumentParser:
    """Analyseur des arguments et de leurs sous-commandes"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="Tolérance de validation des comportements")
    common.add_argument("--seed", type=int, default=SCAN_CONFIG["default_seed"])
    common.add_argument("--jobs", type=int, default=SCAN_CONFIG["default_jobs"],
                        help="Nombre de tâches parallèles")
    common.add_argument("--log-level", default=None)

    parser = argparse.ArgumentParser(prog="nonlocality", description=APP_CONFIG["description"])
    parser.add_argument("--version", action="version", version=APP_CONFIG["version"])
    sub = parser.add_subparsers(dest="command", required=True)

    def behavior_command(name: str, help_text: str) -> argparse.ArgumentParser:
        command = sub.add_parser(name, parents=[common], help=help_text)
        command.add_argument("behavior", help="Fichier de comportement")
        command.add_argument("--inputs", default="uniform",
                             help="uniform ou fichier de distribution des entrées")
        return command

    command = behavior_command("nl", "Distance de trace au polytope local")
    command.add_argument("--out", help="Fichier du point local le plus proche")

    command = behavior_command("certificate", "Certificat dual de NL")
    command.add_argument("--out", help="Fichier du certificat")

    command = behavior_command("kl", "Entropie relative minimale")
    command.add_argument("--gap", type=float, default=None, help="Écart de dualité visé")

    command = sub.add_parser("content", parents=[common], help="Contenu non local")
    command.add_argument("behavior")
    command.add_argument("--functional", help="Fonctionnelle pour le minorant de Bell")

    command = sub.add_parser("nl-at-value", parents=[common], help="NL minimale à f·q = c")
    command.add_argument("functional", help="chsh, cglmp:d=3, inn22:n=3, mermin:N=3 ou fichier")
    command.add_argument("value", type=float)
    command.add_argument("--inputs", default="uniform", help="uniform, support ou fichier")
    command.add_argument("--out", help="Fichier du comportement optimal")

    command = sub.add_parser("scan", parents=[common], help="Balayage de NL(c)")
    command.add_argument("functional")
    command.add_argument("--min", type=float, default=0.0)
    command.add_argument("--max", default="ns", help="Valeur maximale ou `ns`")
    command.add_argument("--steps", type=int, default=SCAN_CONFIG["default_steps"])
    command.add_argument("--inputs", default="uniform", help="uniform, support ou fichier")
    command.add_argument("--out", help="CSV de sortie (results/scan.csv par défaut)")
    command.add_argument("--gnuplot", action="store_true")

    command = sub.add_parser("gamma-scan", parents=[common], help="Balayage de la famille γ")
    command.add_argument("--min", type=float, default=SCAN_CONFIG["gamma_min"])
    command.add_argument("--max", type=float, default=SCAN_CONFIG["gamma_max"])
    command.add_argument("--steps", type=int, default=SCAN_CONFIG["gamma_steps"])
    command.add_argument("--out", help="CSV de sortie (results/gamma_scan.csv par défaut)")
    command.add_argument("--skip-kl", action="store_true")
    command.add_argument("--gnuplot", action="store_true")

    command = sub.add_parser("quantum", parents=[common], help="Comportement quantique")
    command.add_argument("family", help=", ".join(get_family_names(FamilyKind.QUANTUM)))
    command.add_argument("params", nargs="*", help="Paramètres clé=valeur")
    command.add_argument("--out")

    command = sub.add_parser("check-monotones", parents=[common], help="Essais de monotonie")
    command.add_argument("--trials", type=int, default=CLI_CONFIG["monotonicity_trials"])
    command.add_argument("--out", help="CSV des essais")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Point d'entrée : renvoie le code de sortie"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)

    try:
        return COMMANDS[args.command](args)
    except ParseError as e:
        print(f"Erreur de lecture : {e}", file=sys.stderr)
        return get_exit_code("parse")
    except SolverError as e:
        logger.error("Échec du solveur : %s", e)
        print(f"Échec du solveur : {e}", file=sys.stderr)
        return get_exit_code("solver")
    except InfeasibleQuery as e:
        print(f"INFEASIBLE: {e}", file=sys.stderr)
        return get_exit_code("infeasible")
    except (NonLocalityError, ValidationError, ValueError) as e:
        logger.error("%s", e)
        print(f"Erreur : {e}", file=sys.stderr)
        return get_exit_code("failure")
