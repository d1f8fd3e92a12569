"""Throughput and peak-memory benchmarking of a loaded pipeline.

Model loading happens before this module is called and is never timed.
One warm-up pass, then the median tokens/second over the timed passes;
peak memory is the OS-reported resident-set high-water mark.
"""

from __future__ import annotations

import resource
import statistics
import time
from dataclasses import dataclass


@dataclass(frozen=True)
class BenchmarkResult:
    tokens_per_second: float
    run_rates: tuple[float, ...]
    n_tokens: int
    peak_rss_mb: float

    def __str__(self) -> str:
        return (f"{self.tokens_per_second:.0f} tokens/s "
                f"(median of {len(self.run_rates)} runs, {self.n_tokens} tokens), "
                f"peak memory {self.peak_rss_mb:.0f} MB")


def peak_rss_mb() -> float:
    """Best-effort resident-set high-water mark (Linux: ru_maxrss in KiB)."""
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def benchmark(pipeline, texts, runs: int = 3) -> BenchmarkResult:
    """Time full-pipeline annotation of raw texts."""
    texts = list(texts)
    docs = [pipeline.annotate_text(t) for t in texts]  # warm-up, untimed
    n_tokens = sum(len(d.tokens) for d in docs)
    rates = []
    for _ in range(max(1, runs)):
        start = time.perf_counter()
        for text in texts:
            pipeline.annotate_text(text)
        elapsed = time.perf_counter() - start
        rates.append(n_tokens / elapsed if elapsed > 0 else float("inf"))
    return BenchmarkResult(
        tokens_per_second=statistics.median(rates),
        run_rates=tuple(rates),
        n_tokens=n_tokens,
        peak_rss_mb=peak_rss_mb(),
    )
