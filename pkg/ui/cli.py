"""
CLI Interface Module
Command line interface berbasis subcommand: psi, unit, theta, norm, verify,
batch dan settings
"""

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, TextIO

from config import (
    APP_NAME, APP_VERSION, APP_DESCRIPTION,
    EXIT_OK, EXIT_INPUT_ERROR, EXIT_VERIFY_FAILED,
    FieldConfig, ThetaConfig, OracleConfig, OutputConfig, PerformanceConfig,
    SUCCESS_MESSAGES,
)
from core.errors import HeckeNormError
from core.hecke_theta import make_hecke_lattice, theta_expansion
from core.norm_engine import NormReport, closed_form_norm, translate_check
from core.oracles import QuadratureConfig, Verdict, cycle_integral, verify
from core.quadfield import (
    epsilon_kappa, fmt_rational, fundamental_discriminants, fundamental_unit, make_context,
)
from core.rademacher import psi, psi_terms
from core.report_io import ReportWriter
from core.settings_manager import get_settings_manager
from utils.parsers import parse_ideal, parse_matrix, parse_rational

logger = logging.getLogger(__name__)

BATCH_IDEALS = FieldConfig.IDEAL_KEYWORDS
BATCH_KAPPAS = (1, 2, 3)
# translate identity tolerance for batch rows
TRANSLATE_TOLERANCE = 1e-12


@dataclass
class RunConfig:
    subcommand: str
    output_format: str = OutputConfig.DEFAULT_FORMAT
    out: Optional[str] = None
    disc: Optional[int] = None
    ideal: str = 'ring'
    kappa: int = 1
    matrix: Optional[str] = None
    precision: Optional[str] = None
    verify_mode: Optional[str] = None
    quadrature: Optional[QuadratureConfig] = None
    dmax: Optional[int] = None
    workers: int = 1
    psi_method: str = 'auto'
    show_terms: bool = False
    with_cycle: bool = False
    settings_action: str = 'show'
    settings_key: Optional[str] = None
    settings_value: Optional[str] = None

    def __post_init__(self):
        for name in ('disc', 'kappa', 'dmax', 'workers'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise argparse.ArgumentTypeError(f"--{name} harus positif")


class CLI:
    """Command Line Interface handler"""

    def __init__(self, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.writer = ReportWriter()

    # ==================== ARGUMENTS ====================
    @staticmethod
    def build_parser() -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(prog='hecke-norm', description=APP_DESCRIPTION)
        parser.add_argument('--version', action='version', version=f"{APP_NAME} v{APP_VERSION}")
        parser.add_argument('-v', '--verbose', action='store_true', help='log DEBUG')
        parser.add_argument('-q', '--quiet', action='store_true', help='log WARNING only')

        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--json', action='store_true', help='JSON ke stdout')
        common.add_argument('--out', help="tulis hasil ke file ('auto' = nama bertimestamp)")

        field = argparse.ArgumentParser(add_help=False)
        field.add_argument('--disc', '-D', type=int, required=True, help='diskriminan fundamental D > 1')
        field.add_argument('--ideal', default='ring', help="'ring', 'different' atau 'a,b,d'")
        field.add_argument('--kappa', '-k', type=int, default=1)

        sub = parser.add_subparsers(dest='subcommand', required=True)

        p = sub.add_parser('psi', parents=[common], help='Rademacher symbol Psi(gamma)')
        p.add_argument('-m', '--matrix', required=True, help="'a,b;c,d'")
        p.add_argument('--method', choices=('direct', 'fast', 'auto'), default='auto')
        p.add_argument('--terms', action='store_true', help='tampilkan suku-suku Psi')
        p.add_argument('--cycle', action='store_true', help='bandingkan dengan integral siklus E2*')

        u = sub.add_parser('unit', parents=[common], help='unit fundamental dan eps_kappa')
        u.add_argument('--disc', '-D', type=int, required=True)
        u.add_argument('--ideal', default='ring')
        u.add_argument('--kappa', '-k', type=int, default=1)

        t = sub.add_parser('theta', parents=[common, field], help='ekspansi q theta_L')
        t.add_argument('--prec', help='presisi X (rasional)')
        t.add_argument('--workers', type=int, default=1)

        n = sub.add_parser('norm', parents=[common, field], help='rumus tertutup norm Petersson')
        n.add_argument('--verify', choices=OracleConfig.VERIFY_MODES, help='jalankan oracle')
        n.add_argument('--prec', help='presisi X untuk oracle numerik')

        v = sub.add_parser('verify', parents=[common, field], help='verifikasi dua oracle')
        v.add_argument('--mode', choices=OracleConfig.VERIFY_MODES, default=None)
        v.add_argument('--nodes', type=int, help='node Gauss-Legendre')
        v.add_argument('--prec', help='presisi X')
        v.add_argument('--tol', type=float, help='toleransi Petersson')

        b = sub.add_parser('batch', parents=[common], help='tabel CSV untuk D <= dmax')
        b.add_argument('--dmax', type=int, required=True)
        b.add_argument('--workers', type=int, default=PerformanceConfig.MAX_WORKERS)
        b.add_argument('--verify', choices=('exact', 'cycle'), default='exact')

        s = sub.add_parser('settings', help='lihat / ubah settings.json')
        s.add_argument('action', choices=('show', 'set', 'reset', 'validate', 'export', 'import'),
                       nargs='?', default='show')
        s.add_argument('key', nargs='?', help='nama setting, atau path file untuk export/import')
        s.add_argument('value', nargs='?')
        return parser

    def make_run_config(self, args: argparse.Namespace) -> RunConfig:
        fmt = 'json' if getattr(args, 'json', False) else OutputConfig.DEFAULT_FORMAT
        if fmt == 'csv':
            fmt = 'human'
        if args.subcommand == 'batch':
            fmt = 'json' if args.json else 'csv'
        quadrature = None
        if args.subcommand in ('norm', 'verify', 'psi'):
            quadrature = QuadratureConfig.from_defaults(
                gauss_nodes=getattr(args, 'nodes', None),
                tolerance=getattr(args, 'tol', None),
            )
        mode = getattr(args, 'verify', None) if args.subcommand in ('norm', 'batch') else getattr(args, 'mode', None)
        return RunConfig(
            subcommand=args.subcommand,
            output_format=fmt,
            out=getattr(args, 'out', None),
            disc=getattr(args, 'disc', None),
            ideal=getattr(args, 'ideal', 'ring'),
            kappa=getattr(args, 'kappa', 1),
            matrix=getattr(args, 'matrix', None),
            precision=getattr(args, 'prec', None),
            verify_mode=mode,
            quadrature=quadrature,
            dmax=getattr(args, 'dmax', None),
            workers=getattr(args, 'workers', 1),
            psi_method=getattr(args, 'method', 'auto'),
            show_terms=getattr(args, 'terms', False),
            with_cycle=getattr(args, 'cycle', False),
            settings_action=getattr(args, 'action', 'show'),
            settings_key=getattr(args, 'key', None),
            settings_value=getattr(args, 'value', None),
        )

    # ==================== OUTPUT ====================
    def emit(self, cfg: RunConfig, data, human: str, default_name: str = None):
        if cfg.output_format == 'json':
            text = self.writer.to_json(data)
        elif cfg.output_format == 'csv':
            text = self.writer.to_csv(data)
        else:
            text = human.rstrip("\n") + "\n"
        self.stdout.write(text)
        if cfg.out:
            path = self.writer.resolve_output(cfg.out, default_name or OutputConfig.DEFAULT_REPORT_OUTPUT)
            ok, error = self.writer.safe_write(path, text)
            if not ok:
                raise OSError(error)

    def _precision(self, cfg: RunConfig):
        if cfg.precision is None:
            return ThetaConfig.DEFAULT_PRECISION
        return parse_rational(cfg.precision)

    # ==================== HANDLERS ====================
    def cmd_psi(self, cfg: RunConfig) -> int:
        gamma = parse_matrix(cfg.matrix)
        value = psi(gamma, cfg.psi_method)
        data = {'matrix': str(gamma), 'psi': value}
        lines = [str(value)]
        if cfg.show_terms:
            terms = psi_terms(gamma, cfg.psi_method)
            data['terms'] = {k: fmt_rational(v) for k, v in terms.items()}
            lines += [f"  {k:<14} {fmt_rational(v)}" for k, v in terms.items()]
        if cfg.with_cycle:
            data['cycle_integral'] = cycle_integral(gamma, cfg.quadrature)
            lines.append(f"  cycle_integral {self.writer.format_float(data['cycle_integral'])}")
        self.emit(cfg, data, "\n".join(lines))
        return EXIT_OK

    def cmd_unit(self, cfg: RunConfig) -> int:
        ctx = make_context(cfg.disc)
        unit = fundamental_unit(ctx)
        ideal = parse_ideal(cfg.ideal, ctx)
        eps = epsilon_kappa(ctx, ideal, cfg.kappa)
        data = {
            'D': ctx.D,
            'fundamental_unit': str(unit.value),
            'fundamental_norm': unit.norm_sign,
            'ideal': str(ideal),
            'kappa': cfg.kappa,
            'epsilon': str(eps.value),
            'power_index': eps.power_index,
        }
        human = (f"D = {ctx.D}\n"
                 f"fundamental unit = {unit.value}  (norm {unit.norm_sign:+d})\n"
                 f"eps_kappa (ideal {ideal}, kappa {cfg.kappa}) = {eps.value}  "
                 f"(power {eps.power_index} of the fundamental unit)")
        self.emit(cfg, data, human)
        return EXIT_OK

    def cmd_theta(self, cfg: RunConfig) -> int:
        ctx = make_context(cfg.disc)
        HL = make_hecke_lattice(ctx, parse_ideal(cfg.ideal, ctx), cfg.kappa)
        series = theta_expansion(HL, self._precision(cfg), workers=cfg.workers)
        lines = [f"theta_L for D={ctx.D}, ideal={HL.ideal}, kappa={cfg.kappa}: "
                 f"{len(series.cosets)} cosets, X={fmt_rational(series.precision)}"]
        for index in series.nonzero_cosets():
            terms = " ".join(f"{c:+d}q^{fmt_rational(e)}" for e, c in series.component(index))
            lines.append(f"  [{series.cosets[index]}] {terms}")
        if series.is_zero():
            lines.append("  (identically zero up to X)")
        self.emit(cfg, series.to_dict(), "\n".join(lines), "theta.json")
        return EXIT_OK

    def _human_report(self, report: NormReport) -> List[str]:
        fmt = self.writer.format_float
        return [
            f"D = {report.D}, ideal = {report.ideal}, kappa = {report.kappa}",
            f"eps_kappa      = {report.epsilon.value}",
            f"gamma_(D,k)    = {report.gamma_dk}" + ("" if report.gamma_dk_integral else "  (half-integral)"),
            f"gamma0         = {report.gamma0}   Psi = {report.psi0}",
            f"gamma1         = {report.gamma1}   Psi = {report.psi1}",
            f"coefficient    = {fmt_rational(report.coefficient)}",
            f"normValue      = {fmt(report.norm_value)} +- {fmt(report.norm_error)}",
        ]

    def _human_verdict(self, verdict: Verdict) -> List[str]:
        fmt = self.writer.format_float
        lines = [f"verdict        = {verdict.status} ({verdict.mode})"]
        if verdict.cycle0 is not None:
            lines.append(f"cycle oracle   = {fmt(verdict.cycle0)}, {fmt(verdict.cycle1)} "
                         f"(tol {verdict.cycle_tolerance})")
        if verdict.numeric is not None:
            lines.append(f"petersson      = {fmt(verdict.numeric)} +- {fmt(verdict.numeric_error)} "
                         f"(tol {verdict.tolerance})")
        lines += [f"  ✗ {f}" for f in verdict.failures]
        return lines

    def _run_verify(self, cfg: RunConfig, report: NormReport) -> Verdict:
        mode = cfg.verify_mode or OracleConfig.DEFAULT_VERIFY_MODE
        series = None
        if mode in ('numeric', 'both'):
            ctx = make_context(report.D)
            HL = make_hecke_lattice(ctx, report.ideal, report.kappa)
            series = theta_expansion(HL, self._precision(cfg))
        return verify(report, series, cfg.quadrature, mode)

    def cmd_norm(self, cfg: RunConfig) -> int:
        ctx = make_context(cfg.disc)
        report = closed_form_norm(ctx, parse_ideal(cfg.ideal, ctx), cfg.kappa)
        data = report.to_dict()
        lines = self._human_report(report)
        code = EXIT_OK
        if cfg.verify_mode:
            verdict = self._run_verify(cfg, report)
            data['verdict'] = verdict.to_dict()
            lines += self._human_verdict(verdict)
            code = EXIT_OK if verdict.passed else EXIT_VERIFY_FAILED
        self.emit(cfg, data, "\n".join(lines))
        return code

    def cmd_verify(self, cfg: RunConfig) -> int:
        ctx = make_context(cfg.disc)
        report = closed_form_norm(ctx, parse_ideal(cfg.ideal, ctx), cfg.kappa)
        verdict = self._run_verify(cfg, report)
        data = {'report': report.to_dict(), 'verdict': verdict.to_dict()}
        self.emit(cfg, data, "\n".join(self._human_report(report) + self._human_verdict(verdict)))
        return EXIT_OK if verdict.passed else EXIT_VERIFY_FAILED

    def batch_row(self, D: int, ideal_name: str, kappa: int, mode: str) -> Dict:
        row = {'D': D, 'ideal': ideal_name, 'kappa': kappa}
        try:
            ctx = make_context(D)
            report = closed_form_norm(ctx, parse_ideal(ideal_name, ctx), kappa)
            ok = report.coefficient >= 0 and translate_check(ctx, report.epsilon) < TRANSLATE_TOLERANCE
            if ok and mode == 'cycle':
                cfg = QuadratureConfig.from_defaults()
                ok = all(abs(cycle_integral(g, cfg) - p) < cfg.cycle_tolerance
                         for g, p in ((report.gamma0, report.psi0), (report.gamma1, report.psi1)))
            row.update({
                'epsilon': str(report.epsilon.value),
                'psi0': report.psi0,
                'psi1': report.psi1,
                'coefficient': fmt_rational(report.coefficient),
                'norm_value': self.writer.format_float(report.norm_value),
                'verified': 'true' if ok else 'false',
            })
        except HeckeNormError as e:
            logger.error(f"Batch row D={D} {ideal_name} kappa={kappa}: {e}")
            row.update({'epsilon': '', 'psi0': '', 'psi1': '', 'coefficient': '',
                        'norm_value': '', 'verified': f"error:{e.code}"})
        return row

    def cmd_batch(self, cfg: RunConfig) -> int:
        tasks = [(D, name, kappa)
                 for D in fundamental_discriminants(cfg.dmax)
                 for name in BATCH_IDEALS
                 for kappa in BATCH_KAPPAS]
        mode = cfg.verify_mode or 'exact'
        # map keeps task order whatever the thread count
        with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
            rows = list(pool.map(lambda task: self.batch_row(*task, mode), tasks))
        self.emit(cfg, rows, "", OutputConfig.DEFAULT_BATCH_OUTPUT)
        logger.info(SUCCESS_MESSAGES['batch_complete'].format(count=len(rows)))
        return EXIT_OK if all(r['verified'] == 'true' for r in rows) else EXIT_VERIFY_FAILED

    def cmd_settings(self, cfg: RunConfig) -> int:
        manager = get_settings_manager()
        action = cfg.settings_action
        if action == 'set':
            if cfg.settings_key is None or cfg.settings_value is None:
                self.stderr.write("❌ settings set butuh KEY VALUE\n")
                return EXIT_INPUT_ERROR
            if not manager.set_setting(cfg.settings_key, cfg.settings_value):
                self.stderr.write(f"❌ Unknown or invalid setting: {cfg.settings_key}\n")
                return EXIT_INPUT_ERROR
            manager.save_settings()
            manager.apply_to_config()
        elif action == 'reset':
            manager.reset_to_defaults()
            manager.save_settings()
            manager.apply_to_config()
        elif action in ('export', 'import'):
            if cfg.settings_key is None:
                self.stderr.write(f"❌ settings {action} butuh PATH\n")
                return EXIT_INPUT_ERROR
            if action == 'export':
                if not manager.export_settings(cfg.settings_key):
                    self.stderr.write(f"❌ Gagal export ke {cfg.settings_key}\n")
                    return EXIT_INPUT_ERROR
                self.stdout.write(f"✓ Settings diekspor ke {cfg.settings_key}\n")
                return EXIT_OK
            previous = manager.settings
            if not manager.import_settings(cfg.settings_key) or manager.validate_settings():
                manager.settings = previous
                self.stderr.write(f"❌ Settings tidak valid: {cfg.settings_key}\n")
                return EXIT_INPUT_ERROR
            manager.save_settings()
            manager.apply_to_config()
        elif action == 'validate':
            issues = manager.validate_settings()
            for group, messages in issues.items():
                for message in messages:
                    self.stdout.write(f"⚠ {group}: {message}\n")
            if issues:
                return EXIT_INPUT_ERROR
            self.stdout.write("✓ Settings valid\n")
            return EXIT_OK
        self.stdout.write(manager.get_settings_summary())
        return EXIT_OK

    # ==================== ENTRY ====================
    def dispatch(self, cfg: RunConfig) -> int:
        handler = getattr(self, f"cmd_{cfg.subcommand}")
        return handler(cfg)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """Parse argv, execute one subcommand, return the exit code"""
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        elif args.quiet:
            logging.getLogger().setLevel(logging.WARNING)

        try:
            cfg = self.make_run_config(args)
            return self.dispatch(cfg)
        except HeckeNormError as e:
            logger.debug("Input rejected", exc_info=True)
            self.stderr.write(f"❌ {e}\n")
            return EXIT_INPUT_ERROR
        except (argparse.ArgumentTypeError, OSError) as e:
            self.stderr.write(f"❌ {e}\n")
            return EXIT_INPUT_ERROR
