#!/usr/bin/env python3
"""
Command-line front end: design, psf, estimate and sweep
"""
import argparse
import logging
import sys
from typing import List, Optional

from config import configure_logging, load_experiment_config, settings
from app.errors import ConfigurationError, InSectorError
from app.evaluation import (
    design_sector_beams, run_coherence_study, run_full_band, run_single_estimate, run_sweep,
)
from app.algorithms.sampling import Scheme, uniform_shifts
from app import reporting

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Experiment file with one `key = value` per line")
    common.add_argument("--seed", type=int, help="Override the experiment seed")
    common.add_argument("--out", help="Output path (default: stdout)")
    common.add_argument("--format", choices=reporting.FORMATS, default="csv", help="Output format")
    common.add_argument("--scheme", choices=[s.value for s in Scheme], help="Override the training scheme")
    common.add_argument("--threads", type=int, default=None,
                        help=f"Worker threads for independent trials (default: {settings.threads})")

    parser = argparse.ArgumentParser(
        prog="insector",
        description="In-sector convolutional compressed sensing for mmWave channel estimation",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("design", parents=[common],
                          help="Per-sector base beams, masks and PAPR")

    psf_parser = subparsers.add_parser("psf", parents=[common],
                                       help="PSF of the stride-rho pattern and PCS/RCS coherence CDFs")
    psf_parser.add_argument("--uniform", action="store_true",
                            help="Emit the PSF of the uniform shift set instead of the CDF rows")

    estimate_parser = subparsers.add_parser("estimate", parents=[common],
                                            help="Single-shot recovery of one channel draw")
    estimate_parser.add_argument("--full-band", action="store_true",
                                 help="Estimate every sector and stitch the full beamspace")

    sweep_parser = subparsers.add_parser("sweep", parents=[common],
                                         help="Monte-Carlo grid over M, SNR and schemes")
    sweep_parser.add_argument("--store", action="store_true", help="Persist runs to DATABASE_URL")
    sweep_parser.add_argument("--extended", action="store_true",
                              help="Add mu spread, mis-selection and noise columns")
    sweep_parser.add_argument("--trials-out", help="Also write one row per trial to this path")
    return parser


def _overrides(args) -> dict:
    overrides = {"seed": args.seed, "scheme": args.scheme}
    if args.command == "sweep" and args.scheme:
        overrides["schemes"] = [args.scheme]
    return overrides


def run_command(args) -> str:
    config = load_experiment_config(args.config, _overrides(args))
    threads = args.threads or settings.threads
    if threads < 1:
        raise ConfigurationError(f"--threads must be >= 1, got {threads}")

    if args.command == "design":
        beams = design_sector_beams(config.n_antennas, config.n_sectors, config.n_mask_candidates, config.seed)
        frame = reporting.design_frame(beams)

    elif args.command == "psf":
        study = run_coherence_study(config, threads)
        if args.uniform:
            frame = reporting.psf_frame(study.uniform_psf, uniform_shifts(study.n, study.n_sec))
        else:
            frame = reporting.cdf_frame(study)
        logger.info(f"📐 Uniform pattern mu={study.uniform_mu:.3e}")

    elif args.command == "estimate":
        if args.full_band:
            result = run_full_band(config)
            frame = reporting.full_band_frame(result)
            logger.info(f"✅ Full-band NMSE={result.nmse:.4e} with {result.n_measurements} measurements")
        else:
            outcome = run_single_estimate(config)
            sector = config.sectors()[outcome.record.selected_sector]
            frame = reporting.estimate_frame(outcome, sector.d1)
            r = outcome.record
            if r.nmse_denominator > 0:
                logger.info(f"✅ Sector {r.selected_sector}: NMSE={r.nmse_numerator / r.nmse_denominator:.4e}, "
                            f"support={outcome.support}")

    else:
        results = run_sweep(config, threads)
        frame = reporting.sweep_frame(results, extended=args.extended)
        if args.trials_out:
            reporting.write_output(reporting.trial_frame(results), args.trials_out, args.format)
        if args.store:
            from database import SessionLocal, create_tables, store_results
            create_tables()
            db = SessionLocal()
            try:
                store_results(db, results)
            finally:
                db.close()

    return reporting.write_output(frame, args.out, args.format)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging()
    try:
        text = run_command(args)
    except ConfigurationError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 2
    except InSectorError as e:
        print(f"❌ {e}", file=sys.stderr)
        return 1
    if args.out is None:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
