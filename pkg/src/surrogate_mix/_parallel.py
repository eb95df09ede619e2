"""Thread-pool helper with deterministic result order."""
import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "SURROGATE_MIX_THREADS"


def resolve_threads(threads=None) -> int:
    """Explicit value, else ``$SURROGATE_MIX_THREADS``, else the core count."""
    if threads is None:
        raw = os.environ.get(ENV_THREADS, "").strip()
        threads = int(raw) if raw else (os.cpu_count() or 1)
    threads = int(threads)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    return threads


def ordered_map(fn, items, threads=None):
    """``list(map(fn, items))`` evaluated on up to ``threads`` workers."""
    items = list(items)
    n = min(resolve_threads(threads), max(len(items), 1))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
