"""Batch processing: manifest in, per-utterance TV files out.

Utterances are independent of each other, so they run on a thread pool;
every output is a pure function of its own input file plus the speaker
anatomy, which keeps results byte-identical at any parallelism level.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .anatomy import SpeakerAnatomy, build_speaker_anatomy
from .errors import ConfigError, DataError
from .ingest import (
    IngestReport,
    SpeakerSpec,
    TARGET_RATE_HZ,
    load_manifest,
    parse_pellet_file,
    parse_trace_file,
    resample,
)
from .plots import anatomy_svg, tv_svg
from .tract_variables import TvOptions, compute_trajectory
from .tvcsv import write_anatomy_json, write_tv_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2


@dataclass(frozen=True)
class RunConfig:
    """Options for one batch run."""

    manifest_path: Path
    output_dir: Path
    degrees: bool = False
    clamp_tbcd: bool = False
    target_rate: float = TARGET_RATE_HZ
    plots: bool = False
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.target_rate <= 0.0:
            raise ConfigError(f"rate must be positive, got {self.target_rate}")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")


def _build_anatomy(spec: SpeakerSpec) -> SpeakerAnatomy:
    palate = parse_trace_file(spec.palate_path, "palate")
    wall = parse_trace_file(spec.posterior_wall_path, "wall")
    return build_speaker_anatomy(
        spec.speaker_id,
        palate,
        wall,
        spec.sex,
        thickness_mm=spec.thickness_mm,
    )


def _process_utterance(
    spec: SpeakerSpec,
    anat: SpeakerAnatomy,
    utterance_path: Path,
    config: RunConfig,
) -> Path:
    report = IngestReport()
    trajectory, report = parse_pellet_file(
        utterance_path, speaker_id=spec.speaker_id
    )
    uniform = resample(trajectory, config.target_rate, report)
    tvs = compute_trajectory(
        uniform, anat, TvOptions(clamp_tbcd=config.clamp_tbcd)
    )
    out_csv = config.output_dir / f"{utterance_path.stem}.tv.csv"
    write_tv_csv(tvs, out_csv, degrees=config.degrees)
    if config.plots:
        svg_path = config.output_dir / f"{utterance_path.stem}.tvs.svg"
        svg_path.write_text(tv_svg(tvs, degrees=config.degrees), encoding="utf-8")
    logger.info(
        "%s/%s: %d frames in, %d out, %d mistracked",
        spec.speaker_id,
        utterance_path.stem,
        report.frames_read,
        len(tvs.frames),
        report.frames_mistracked,
    )
    return out_csv


def run_pipeline(config: RunConfig) -> int:
    """Process every speaker and utterance in the manifest.

    Speaker-level anatomy failures skip that speaker's utterances and
    force a nonzero exit.  Individual utterance failures are logged and
    skipped; they only force a nonzero exit when every utterance failed.
    Exit codes: 0 success, 1 configuration or I/O trouble, 2 bad data.
    """
    try:
        speakers = load_manifest(config.manifest_path)
    except (OSError, ConfigError) as exc:
        logger.error("cannot load manifest: %s", exc)
        return EXIT_CONFIG
    config.output_dir.mkdir(parents=True, exist_ok=True)

    saw_config_error = False
    saw_data_error = False
    utterances_total = 0
    utterances_failed = 0

    for spec in speakers:
        try:
            anat = _build_anatomy(spec)
        except OSError as exc:
            logger.error("speaker %s: cannot read traces: %s", spec.speaker_id, exc)
            saw_config_error = True
            continue
        except DataError as exc:
            logger.error("speaker %s: anatomy failed: %s", spec.speaker_id, exc)
            saw_data_error = True
            continue
        write_anatomy_json(
            anat, config.output_dir / f"{spec.speaker_id}.anatomy.json"
        )
        if config.plots:
            svg_path = config.output_dir / f"{spec.speaker_id}.anatomy.svg"
            svg_path.write_text(anatomy_svg(anat), encoding="utf-8")

        utterances_total += len(spec.utterance_paths)
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            futures = [
                (path, pool.submit(_process_utterance, spec, anat, path, config))
                for path in spec.utterance_paths
            ]
            for path, future in futures:
                try:
                    future.result()
                except OSError as exc:
                    logger.error("utterance %s: %s", path, exc)
                    saw_config_error = True
                    utterances_failed += 1
                except DataError as exc:
                    logger.error("utterance %s: %s", path, exc)
                    utterances_failed += 1

    if saw_config_error:
        return EXIT_CONFIG
    if saw_data_error:
        return EXIT_DATA
    if utterances_total and utterances_failed == utterances_total:
        return EXIT_DATA
    return EXIT_OK


def run_anatomy_only(manifest_path: Path, output_dir: Path) -> int:
    """Derive and write anatomy (JSON plus figure) without utterances."""
    try:
        speakers = load_manifest(manifest_path)
    except (OSError, ConfigError) as exc:
        logger.error("cannot load manifest: %s", exc)
        return EXIT_CONFIG
    output_dir.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    for spec in speakers:
        try:
            anat = _build_anatomy(spec)
        except OSError as exc:
            logger.error("speaker %s: cannot read traces: %s", spec.speaker_id, exc)
            code = EXIT_CONFIG
            continue
        except DataError as exc:
            logger.error("speaker %s: anatomy failed: %s", spec.speaker_id, exc)
            if code == EXIT_OK:
                code = EXIT_DATA
            continue
        write_anatomy_json(anat, output_dir / f"{spec.speaker_id}.anatomy.json")
        svg_path = output_dir / f"{spec.speaker_id}.anatomy.svg"
        svg_path.write_text(anatomy_svg(anat), encoding="utf-8")
    return code
