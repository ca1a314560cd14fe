"""Orchestration: execute a suite over dims x trials with deterministic output.

Every trial owns an addressable random stream derived from
(root seed, suite id, N, L, trial), so its records do not depend on worker
count or completion order. Workers return whole-trial record batches through
an order-preserving map, and the sink appends them in task order; value
columns are therefore byte-stable across reruns and across worker counts.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import os
import time

from threadpoolctl import threadpool_limits

from .. import __version__
from ..sampling import GAUSSIAN_METHOD, RngStream
from .config import CSV_HEADER, ExperimentConfig, ExperimentRecord
from .suites import SUITES, experiment_id

RUN_HEADER_NAME = "run_header.json"
RECORDS_NAME = "records.csv"


def trial_stream(seed: int, experiment: str, N: int, L: int, trial: int) -> RngStream:
    """The random stream owned by one trial; its path is the record's seed_path."""
    return RngStream(seed).child(experiment_id(experiment), N, L, trial)


def _run_one(task) -> list:
    cfg, N, trial = task
    spec = SUITES[cfg.experiment]
    stream = trial_stream(cfg.seed, cfg.experiment, N, cfg.L, trial)
    start = time.perf_counter()
    with threadpool_limits(limits=1):
        stats = spec.trial_fn(cfg, N, trial, stream)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    path = stream.path_string()
    return [
        ExperimentRecord(
            experiment=cfg.experiment,
            N=N,
            L=cfg.L,
            trial=trial,
            seed_path=path,
            statistic=name,
            value=float(value),
            certified=bool(cert),
            wall_time_ms=elapsed_ms,
        )
        for name, value, cert in stats
    ]


def _header_payload(cfg: ExperimentConfig) -> dict:
    return {
        "schema": 1,
        "experiment": cfg.experiment,
        "experiment_id": experiment_id(cfg.experiment),
        "dims": list(cfg.dims),
        "L": cfg.L,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "enum_budget": cfg.enum_budget,
        "restarts": cfg.restarts,
        "allow_heuristic": cfg.allow_heuristic,
        "gaussian_method": GAUSSIAN_METHOD,
        "version": __version__,
    }


def run_experiment(cfg: ExperimentConfig) -> list:
    """Run the configured suite and return all records, writing incrementally.

    When the config carries an output directory, a run header and the records
    CSV are written there; rows appear in (N, trial) task order regardless of
    how workers interleave.
    """
    cfg = cfg.validated()
    tasks = [(cfg, N, trial) for N in cfg.dims for trial in range(cfg.trials)]
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    workers = max(1, min(workers, len(tasks)))

    sink = None
    if cfg.output_dir:
        os.makedirs(cfg.output_dir, exist_ok=True)
        header_path = os.path.join(cfg.output_dir, RUN_HEADER_NAME)
        with open(header_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(_header_payload(cfg), fh, indent=2)
            fh.write("\n")
        sink = open(
            os.path.join(cfg.output_dir, RECORDS_NAME),
            "w",
            encoding="utf-8",
            newline="\n",
        )
        sink.write(CSV_HEADER + "\n")

    records: list = []

    def consume(batch: list) -> None:
        records.extend(batch)
        if sink is not None:
            for rec in batch:
                sink.write(rec.csv_row() + "\n")
            sink.flush()

    try:
        if workers == 1:
            for task in tasks:
                consume(_run_one(task))
        else:
            chunk = max(1, min(64, len(tasks) // (workers * 8)))
            ctx = multiprocessing.get_context("spawn")
            with ctx.Pool(processes=workers) as pool:
                for batch in pool.imap(_run_one, tasks, chunksize=chunk):
                    consume(batch)
    finally:
        if sink is not None:
            sink.close()
    return records


def _load_run_dir(output_dir: str):
    with open(os.path.join(output_dir, RUN_HEADER_NAME), encoding="utf-8") as fh:
        header = json.load(fh)
    with open(os.path.join(output_dir, RECORDS_NAME), encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("records file does not start with the expected header")
    return header, lines


def replay_record(output_dir: str, row_id: int) -> dict:
    """Regenerate one stored record from its seed path and compare values.

    row_id is the 1-based data row number in records.csv (the header line is
    row 0). The trial is recomputed in isolation; a healthy run reproduces
    the value bit for bit.
    """
    header, lines = _load_run_dir(output_dir)
    if not 1 <= row_id <= len(lines) - 1:
        raise ValueError(f"row id {row_id} out of range 1..{len(lines) - 1}")
    stored = ExperimentRecord.from_csv_row(lines[row_id])
    cfg = ExperimentConfig(
        experiment=header["experiment"],
        dims=(stored.N,),
        L=stored.L,
        trials=stored.trial + 1,
        seed=header["seed"],
        enum_budget=header["enum_budget"],
        restarts=header["restarts"],
        allow_heuristic=header["allow_heuristic"],
    ).validated()
    fresh = _run_one((cfg, stored.N, stored.trial))
    if fresh and fresh[0].seed_path != stored.seed_path:
        raise ValueError(
            f"seed path mismatch: stored {stored.seed_path}, "
            f"regenerated {fresh[0].seed_path}"
        )
    matches = [rec for rec in fresh if rec.statistic == stored.statistic]
    if not matches:
        raise ValueError(
            f"statistic {stored.statistic!r} not produced on replay"
        )
    replayed = matches[0]
    same = replayed.value == stored.value and math.isfinite(replayed.value)
    return {
        "row": row_id,
        "experiment": stored.experiment,
        "N": stored.N,
        "L": stored.L,
        "trial": stored.trial,
        "seed_path": stored.seed_path,
        "statistic": stored.statistic,
        "stored_value": stored.value,
        "replayed_value": replayed.value,
        "match": bool(same),
    }
