"""Per-iteration records shared by the iterative algorithms."""

import json
import math
from dataclasses import asdict, dataclass, field, fields


@dataclass
class IterationRecord:
    """State summary after one iteration (iteration 0 is the initializer).

    ``p_est``/``q_est`` hold the posterior means for variational runs, the
    sampled values for Gibbs and the plug-in estimates for the MLE iteration.
    ``loss`` is the l1 loss of the (soft) iterate; ``misclustered`` is the
    Hamming loss after hardening. ``sample_loss`` is only set by Gibbs.
    """

    iteration: int
    loss: float | None = None
    misclustered: int | None = None
    elbo: float | None = None
    t: float | None = None
    lam: float | None = None
    p_est: float | None = None
    q_est: float | None = None
    sample_loss: float | None = None
    anti_assortative: bool = False
    seconds: float = 0.0


def _clean(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)
    # ELBO after every coordinate block (sequential CAVI only)
    elbo_path: list = field(default_factory=list)

    def append(self, record):
        expected = len(self.records)
        if record.iteration != expected:
            raise ValueError(f"trace expects iteration {expected}, got {record.iteration}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, idx):
        return self.records[idx]

    @property
    def losses(self):
        return [r.loss for r in self.records]

    def iterations_to_recovery(self):
        """First iteration whose hardened iterate has zero misclustered nodes, or None."""
        for r in self.records:
            if r.misclustered == 0:
                return r.iteration
        return None

    def to_dicts(self, include_timing=False, **extra):
        out = []
        for r in self.records:
            d = {k: _clean(v) for k, v in asdict(r).items()}
            if not include_timing:
                d.pop("seconds")
            out.append({**extra, **d})
        return out

    def to_jsonl(self, include_timing=False, **extra):
        """Newline-delimited JSON, one object per iteration.

        Timing is off by default so identical runs serialize to identical bytes.
        """
        lines = [json.dumps(d, sort_keys=False) for d in self.to_dicts(include_timing, **extra)]
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_jsonl(cls, text):
        names = {f.name for f in fields(IterationRecord)}
        trace = cls()
        for line in text.splitlines():
            if line.strip():
                d = json.loads(line)
                trace.append(IterationRecord(**{k: v for k, v in d.items() if k in names}))
        return trace
