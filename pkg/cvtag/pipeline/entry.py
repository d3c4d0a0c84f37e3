# Copyright (c) 2025 The cvtag Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import argparse
import sys

from rich.console import Console

from cvtag.common import (
    ConfigurationError,
    CVTagConfig,
    NumericalDomainError,
    cvtag_logger,
    event_path_timer,
    set_log_level,
)
from cvtag.model.keyrate import DvTaggedInput, WcpInput, gllp_rate, wcp_rate
from cvtag.pipeline import CVTagPipeline
from cvtag.pipeline.report import (
    breakdown_table,
    dv_table,
    effective_table,
    monte_carlo_table,
    secure_distance_table,
)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_ERROR = 2


class CVTagArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG_ERROR, f"{self.prog}: error: {message}\n")


def _add_channel_arguments(parser):
    group = parser.add_argument_group("channel")
    group.add_argument('--preset', type=str, choices=['table1', 'table3'], help='Built-in evaluation parameters.')
    group.add_argument('--v1', type=float, help='Variance of the modulation gain.')
    group.add_argument('--v2', type=float, help='Variance of the detection gain.')
    group.add_argument('--eta', type=float, help='Override the detector efficiency.')
    group.add_argument('--eps-c', dest='eps_c', type=float, help='Override the channel excess noise (SNU).')
    group.add_argument('--v-el', dest='v_el', type=float, help='Override the electronic noise (SNU).')
    group.add_argument('--va', dest='V_A', type=float, help='Override the modulation variance.')
    group.add_argument('--beta', type=float, help='Override the reconciliation efficiency (fraction or percent).')
    group.add_argument('--loss-db-per-km', dest='loss_db_per_km', type=float, help='Fiber attenuation.')
    group.add_argument('--distribution', type=str, choices=['gaussian', 'uniform'], help='Gain fluctuation law.')
    group.add_argument(
        '--strict-paper',
        dest='strict_paper',
        action='store_true',
        default=None,
        help='Detection noise variance eta*v_el/(1-eta) as tabulated, instead of v_el/(1-eta).',
    )


def _add_runtime_arguments(parser):
    group = parser.add_argument_group("runtime")
    group.add_argument('--distance', type=float, help='Fiber length in km.')
    group.add_argument('--lmin', type=float, help='First sweep distance in km.')
    group.add_argument('--lmax', type=float, help='Last sweep distance in km.')
    group.add_argument('--lstep', type=float, help='Sweep step in km.')
    group.add_argument('--k-min', dest='k_min', type=float, help='Smallest cutoff coefficient searched.')
    group.add_argument('--k-max', dest='k_max', type=float, help='Largest cutoff coefficient searched.')
    group.add_argument('--k-step', dest='k_step', type=float, help='Cutoff grid step.')
    group.add_argument('--k1', type=float, help='Fix the modulation cutoff instead of optimizing.')
    group.add_argument('--k3', type=float, help='Fix the detection cutoff instead of optimizing.')
    group.add_argument('--max-distance-km', dest='max_distance_km', type=float, help='Cap of the distance search.')
    group.add_argument('--search-step-km', dest='search_step_km', type=float, help='Bracketing step of the search.')
    group.add_argument('--samples', type=int, help='Monte-Carlo sample count.')
    group.add_argument('--seed', type=int, help='Monte-Carlo seed.')
    group.add_argument('--out', type=str, help='CSV output path (default: stdout).')
    group.add_argument('--threads', type=int, help='Worker threads, 0 = auto (CVTAG_THREADS).')
    group.add_argument('--shard-size', dest='shard_size', type=int, help='Monte-Carlo samples per rng stream.')


def build_parser() -> argparse.ArgumentParser:
    parser = CVTagArgumentParser(prog="cvtag", description="Tagged key rates of CV-QKD with imperfect devices.")
    parser.add_argument('--log-level', dest='log_level', type=str, help='Logging level, e.g. DEBUG or WARNING.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    commands = {
        'sweep': 'Distance sweep written as CSV.',
        'maxdist': 'Maximum secure distance.',
        'rate': 'Key-rate breakdown at one distance.',
        'optimize': 'Optimal cutoff plan at one distance.',
        'mc-check': 'Monte-Carlo check of the effective channel.',
    }
    for name, help_text in commands.items():
        sub = subparsers.add_parser(name, help=help_text, description=help_text)
        sub.add_argument('--config', type=str, help='JSON or flat key = value config file.')
        _add_channel_arguments(sub)
        _add_runtime_arguments(sub)
        if name == 'mc-check':
            sub.add_argument('--n-sigma', dest='n_sigma', type=float, default=3.0, help='Acceptance in standard errors.')

    dv = subparsers.add_parser('dv', help='Discrete-variable tagging rates.', description='Discrete-variable tagging rates.')
    dv.add_argument('--p-tagged', dest='p_tagged', type=float, help='Tagged fraction p (GLLP).')
    dv.add_argument('--s', type=float, help='Key length after error correction (GLLP).')
    dv.add_argument('--delta', type=float, help='Untagged phase error rate (GLLP).')
    dv.add_argument('--q1', type=float, help='Single-photon gain (WCP).')
    dv.add_argument('--e-phase', dest='e_phase', type=float, help='Single-photon phase error rate (WCP).')
    dv.add_argument('--f-u', dest='f_u', type=float, default=1.16, help='Error-correction inefficiency (WCP).')
    dv.add_argument('--qu', type=float, help='Overall gain (WCP).')
    dv.add_argument('--eu', type=float, help='Overall QBER (WCP).')
    dv.add_argument(
        '--literal-correction', dest='literal_correction', action='store_true', help='Charge f_u*Qu*Eu, not f_u*Qu*H2(Eu).'
    )
    return parser


def load_config(args) -> CVTagConfig:
    config = CVTagConfig.from_file(args.config) if args.config else CVTagConfig()
    known = CVTagConfig.field_names()
    return config.apply_overrides({key: value for key, value in vars(args).items() if key in known})


def _run_dv(args, console):
    rows = []
    gllp = (args.p_tagged, args.s, args.delta)
    wcp = (args.q1, args.e_phase, args.qu, args.eu)
    if all(v is not None for v in gllp):
        rows.append(("GLLP key length", gllp_rate(DvTaggedInput(p_tagged=args.p_tagged, s=args.s, delta=args.delta))))
    elif any(v is not None for v in gllp):
        raise ConfigurationError("GLLP needs --p-tagged, --s and --delta")
    if all(v is not None for v in wcp):
        inp = WcpInput(Q1=args.q1, e_phase=args.e_phase, f_u=args.f_u, Qu=args.qu, Eu=args.eu)
        rows.append(("WCP rate", wcp_rate(inp, literal_correction=args.literal_correction)))
    elif any(v is not None for v in wcp):
        raise ConfigurationError("WCP needs --q1, --e-phase, --qu and --eu")
    if not rows:
        raise ConfigurationError("dv needs the GLLP or the WCP inputs")
    console.print(dv_table(rows))


def _run(args, console):
    if args.command == 'dv':
        _run_dv(args, console)
        return

    pipeline = CVTagPipeline(load_config(args))
    event_path_timer().record("config loaded")
    if args.command == 'sweep':
        pipeline.run_sweep()
    elif args.command == 'maxdist':
        console.print(secure_distance_table(pipeline.preset.name, pipeline.run_maxdist()))
    elif args.command == 'rate':
        plan, breakdown = pipeline.run_rate()
        console.print(breakdown_table(plan, breakdown, title=f"Key rate at {pipeline.config.runtime_config.distance:g} km"))
    elif args.command == 'optimize':
        plan, breakdown = pipeline.run_optimize()
        console.print(breakdown_table(plan, breakdown, title=f"Optimal cutoffs at {pipeline.config.runtime_config.distance:g} km"))
    elif args.command == 'mc-check':
        report = pipeline.run_mc_check()
        console.print(effective_table(pipeline.run_effective_params()))
        console.print(monte_carlo_table(report, args.n_sigma))
        if not report.passed(args.n_sigma):
            cvtag_logger.warning(f"Monte-Carlo estimates deviate by more than {args.n_sigma:g} standard errors")


def cli_main(argv=None, console=None) -> int:
    """Run one CLI command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG_ERROR

    console = console or Console()
    try:
        if args.log_level:
            set_log_level(args.log_level)
        _run(args, console)
    except ConfigurationError as e:
        cvtag_logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except NumericalDomainError as e:
        cvtag_logger.error(f"Numerical error: {e}")
        return EXIT_NUMERICAL_ERROR
    return EXIT_OK


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
