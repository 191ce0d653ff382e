"""Multi-view datasets: container, CSV directory I/O and a synthetic generator."""
import csv
import hashlib
import os
import re
from dataclasses import dataclass

import numpy as np

from ._errors import (InvalidInputError, InvalidParameterError,
                      LabelLengthError, MissingViewError, NonNumericError,
                      RaggedRowError, RowCountMismatchError)


@dataclass
class MultiViewDataset:
    """``V`` feature matrices over the same ``N`` samples."""
    views: list
    labels: np.ndarray = None
    names: list = None

    def __post_init__(self):
        if len(self.views) < 1:
            raise InvalidInputError("a dataset needs at least one view")
        self.views = [np.asarray(x, dtype=float) for x in self.views]
        n = self.views[0].shape[0]
        for v, x in enumerate(self.views):
            if x.ndim != 2 or x.shape[1] < 1:
                raise InvalidInputError(f"view {v} must be a 2-D matrix with >= 1 column")
            if x.shape[0] != n:
                raise InvalidInputError(
                    f"view {v} has {x.shape[0]} rows, expected {n}")
            if not np.all(np.isfinite(x)):
                raise InvalidInputError(f"view {v} has non-finite entries")
        if n < 2:
            raise InvalidInputError("a dataset needs at least two samples")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64).ravel()
            if self.labels.shape[0] != n:
                raise InvalidInputError(
                    f"{self.labels.shape[0]} labels for {n} samples")
        if self.names is None:
            self.names = [f"view{v + 1}" for v in range(len(self.views))]

    @property
    def n_samples(self):
        return self.views[0].shape[0]

    @property
    def n_views(self):
        return len(self.views)

    def fingerprint(self):
        h = hashlib.sha256()
        for x in self.views:
            h.update(np.ascontiguousarray(x).tobytes())
            h.update(str(x.shape).encode())
        if self.labels is not None:
            h.update(self.labels.tobytes())
        return h.hexdigest()


def read_numeric_csv(path):
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise RaggedRowError(
                    f"expected {width} fields, found {len(row)}", path, lineno)
            try:
                rows.append([float(c) for c in row])
            except ValueError:
                raise NonNumericError("non-numeric cell", path, lineno) from None
    return np.array(rows, dtype=float).reshape(len(rows), width or 0)


def _view_index(name):
    m = re.fullmatch(r"view(\d+)\.csv", name)
    return int(m.group(1)) if m else None


def load_dataset(path):
    """Read ``view1.csv ... viewV.csv`` and an optional ``labels.csv``."""
    if not os.path.isdir(path):
        raise MissingViewError("dataset directory not found", path)
    found = sorted(i for i in map(_view_index, os.listdir(path)) if i is not None)
    if not found:
        raise MissingViewError("no view1.csv found", path)
    expected = list(range(1, found[-1] + 1))
    missing = sorted(set(expected) - set(found))
    if missing:
        raise MissingViewError(f"missing view{missing[0]}.csv", path)
    views, files = [], []
    for v in expected:
        f = os.path.join(path, f"view{v}.csv")
        x = read_numeric_csv(f)
        if x.shape[0] == 0:
            raise MissingViewError("view file is empty", f)
        if not np.all(np.isfinite(x)):
            raise NonNumericError("non-finite value", f)
        if views and x.shape[0] != views[0].shape[0]:
            raise RowCountMismatchError(
                f"{x.shape[0]} rows but {files[0]} has {views[0].shape[0]}", f)
        views.append(x)
        files.append(f)
    labels = None
    lf = os.path.join(path, "labels.csv")
    if os.path.exists(lf):
        raw = read_numeric_csv(lf)
        if raw.ndim != 2 or raw.shape[1] != 1:
            raise RaggedRowError("labels.csv must hold one integer per line", lf)
        raw = raw[:, 0]
        if not np.all(raw == np.round(raw)):
            raise NonNumericError("labels must be integers", lf)
        if raw.shape[0] != views[0].shape[0]:
            raise LabelLengthError(
                f"{raw.shape[0]} labels for {views[0].shape[0]} samples", lf)
        labels = raw.astype(np.int64)
    names = [f"view{v}" for v in expected]
    return MultiViewDataset(views, labels, names)


def _fmt(x):
    return repr(float(x))


def write_dataset(data, path):
    os.makedirs(path, exist_ok=True)
    for v, x in enumerate(data.views, start=1):
        with open(os.path.join(path, f"view{v}.csv"), "w") as fh:
            for row in x:
                fh.write(",".join(_fmt(c) for c in row) + "\n")
    if data.labels is not None:
        with open(os.path.join(path, "labels.csv"), "w") as fh:
            fh.writelines(f"{int(c)}\n" for c in data.labels)


def _per_view(value, v, name):
    if np.isscalar(value):
        return [value] * v
    value = list(value)
    if len(value) == 1:
        return value * v
    if len(value) != v:
        raise InvalidParameterError(f"{name} needs 1 or {v} entries, got {len(value)}")
    return value


@dataclass
class SynthSpec:
    """Gaussian blobs seen through several noisy views.

    ``dims``, ``noise`` and ``corruption`` take one value for every view or
    one per view.  ``separation`` is the minimum center spacing in units of
    the view's noise level (unit spacing scale when ``noise == 0``).
    """
    n: int = 300
    k: int = 3
    v: int = 3
    dims: object = 10
    separation: float = 10.0
    noise: object = 1.0
    corruption: object = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (self.n >= self.k >= 1):
            raise InvalidParameterError("need n >= k >= 1")
        if self.v < 1:
            raise InvalidParameterError("need at least one view")
        if not self.separation > 0:
            raise InvalidParameterError("separation must be positive")
        self.dims = [int(d) for d in _per_view(self.dims, self.v, "dims")]
        self.noise = [float(s) for s in _per_view(self.noise, self.v, "noise")]
        self.corruption = [float(c) for c in _per_view(self.corruption, self.v, "corruption")]
        if any(d < 1 for d in self.dims):
            raise InvalidParameterError("dims must be >= 1")
        if any(s < 0 for s in self.noise):
            raise InvalidParameterError("noise must be >= 0")
        if any(not 0.0 <= c <= 0.5 for c in self.corruption):
            raise InvalidParameterError("corruption must lie in [0, 0.5]")

    @classmethod
    def parse(cls, text):
        """Parse ``"n=300,k=3,v=3,sep=10"``; list values use ``:``."""
        aliases = {"sep": "separation", "corrupt": "corruption", "views": "v",
                   "clusters": "k"}
        kwargs = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            if "=" not in part:
                raise InvalidParameterError(f"bad synth field {part!r}")
            key, val = (s.strip() for s in part.split("=", 1))
            key = aliases.get(key, key)
            try:
                if key in ("n", "k", "v", "seed"):
                    kwargs[key] = int(val)
                elif key == "separation":
                    kwargs[key] = float(val)
                elif key in ("dims",):
                    kwargs[key] = [int(x) for x in val.split(":")]
                elif key in ("noise", "corruption"):
                    kwargs[key] = [float(x) for x in val.split(":")]
                else:
                    raise InvalidParameterError(f"unknown synth field {key!r}")
            except ValueError:
                raise InvalidParameterError(f"bad value for {key}: {val!r}") from None
        return cls(**kwargs)


def _centers(k, d, spacing, rng):
    if k == 1:
        return np.zeros((1, d))
    if d >= k:
        # orthonormal frame: every pair of centers is exactly `spacing` apart
        q, _ = np.linalg.qr(rng.standard_normal((d, k)))
        return (spacing / np.sqrt(2.0)) * q.T
    direction = rng.standard_normal(d)
    direction /= np.linalg.norm(direction)
    return spacing * np.arange(k)[:, None] * direction[None, :]


def generate_synth(spec):
    rng = np.random.default_rng(spec.seed)
    labels = np.arange(spec.n) % spec.k
    rng.shuffle(labels)
    views = []
    for d, sigma, corrupt in zip(spec.dims, spec.noise, spec.corruption):
        spacing = spec.separation * (sigma if sigma > 0 else 1.0)
        centers = _centers(spec.k, d, spacing, rng)
        assigned = labels.copy()
        n_bad = int(round(corrupt * spec.n)) if spec.k > 1 else 0
        if n_bad:
            bad = rng.choice(spec.n, size=n_bad, replace=False)
            shift = rng.integers(1, spec.k, size=n_bad)
            assigned[bad] = (assigned[bad] + shift) % spec.k
        x = centers[assigned] + sigma * rng.standard_normal((spec.n, d))
        views.append(x)
    return MultiViewDataset(views, labels)
