"""
Progress tracking for the randomized verification suites.
"""

import json
import os
import time
import logging
import threading
from typing import Dict, List, Optional
from dataclasses import dataclass, asdict, field
from pathlib import Path


@dataclass
class DrawRecord:
    """Outcome of a single randomized parameter draw."""
    suite: str
    index: int
    params: Dict[str, float]
    energy: Optional[float] = None
    status: str = "pending"  # pending, passed, failed, skipped
    max_deviation: float = 0.0
    message: Optional[str] = None


@dataclass
class SuiteProgress:
    """Counters for one suite."""
    name: str
    total: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    worst_deviation: float = 0.0
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    failures: List[DrawRecord] = field(default_factory=list)


class ProgressTracker:
    """Thread-safe pass/fail/skip bookkeeping for verification suites."""

    def __init__(self, failure_file: Optional[str] = None, max_failures_kept: int = 50):
        """
        Initialize progress tracker.

        Args:
            failure_file: Optional JSON path receiving failing draws
            max_failures_kept: Failing draws retained per suite for reporting
        """
        self.failure_file = failure_file
        self.max_failures_kept = max_failures_kept
        self.lock = threading.Lock()
        self.logger = logging.getLogger(__name__)
        self.suites: Dict[str, SuiteProgress] = {}
        self.session_start_time = time.time()

    def add_suite(self, name: str):
        with self.lock:
            if name not in self.suites:
                self.suites[name] = SuiteProgress(name=name, start_time=time.time())
                self.logger.debug(f"Added suite to track: {name}")

    def record(self, draw: DrawRecord):
        """Record a finished draw."""
        with self.lock:
            suite = self.suites.setdefault(draw.suite, SuiteProgress(name=draw.suite, start_time=time.time()))
            suite.total += 1
            if draw.status == "passed":
                suite.passed += 1
            elif draw.status == "skipped":
                suite.skipped += 1
            else:
                suite.failed += 1
                if len(suite.failures) < self.max_failures_kept:
                    suite.failures.append(draw)
            if draw.status != "skipped":
                suite.worst_deviation = max(suite.worst_deviation, draw.max_deviation)
            suite.end_time = time.time()

    def all_passed(self) -> bool:
        with self.lock:
            return all(s.failed == 0 and s.passed > 0 for s in self.suites.values())

    def failures(self) -> List[DrawRecord]:
        with self.lock:
            return [f for s in self.suites.values() for f in s.failures]

    def get_statistics(self) -> dict:
        with self.lock:
            duration = time.time() - self.session_start_time
            return {
                'suites': {
                    name: {
                        'total': s.total,
                        'passed': s.passed,
                        'failed': s.failed,
                        'skipped': s.skipped,
                        'worst_deviation': s.worst_deviation,
                    }
                    for name, s in self.suites.items()
                },
                'total_checked': sum(s.total - s.skipped for s in self.suites.values()),
                'total_failed': sum(s.failed for s in self.suites.values()),
                'session_duration': duration,
            }

    def print_statistics(self):
        stats = self.get_statistics()

        print(f"\n{'='*60}")
        print("SELFTEST STATISTICS")
        print(f"{'='*60}")
        for name, suite in stats['suites'].items():
            print(f"{name}: {suite['passed']:,} passed, {suite['failed']:,} failed, "
                  f"{suite['skipped']:,} skipped (worst deviation {suite['worst_deviation']:.3e})")
        print(f"\nChecked: {stats['total_checked']:,}  Failed: {stats['total_failed']:,}")
        print(f"Duration: {stats['session_duration']:.2f} s")
        print(f"{'='*60}\n")

    def save_failures(self):
        """Write failing draws to ``failure_file`` (atomic replace)."""
        if not self.failure_file:
            return
        failures = [asdict(f) for f in self.failures()]
        try:
            Path(self.failure_file).parent.mkdir(parents=True, exist_ok=True)
            temp_file = self.failure_file + '.tmp'
            with open(temp_file, 'w', encoding='utf-8') as f:
                json.dump(failures, f, indent=2)
            os.replace(temp_file, self.failure_file)
            self.logger.info(f"Saved {len(failures)} failing draws to {self.failure_file}")
        except OSError as e:
            self.logger.error(f"Failed to save failing draws: {e}")
            raise
