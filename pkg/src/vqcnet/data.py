"""Data pipeline: image ingestion, resizing, feature projection, synthetic
data, deterministic splits, and the feature-file formats.

Feature vectors are stored as float32 (the on-disk precision) so that
write -> read round-trips are bitwise; model math upcasts to float64.
"""
import math
import os
import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .fileio import atomic_write_bytes, atomic_write_text

FEATURE_DIM = 512
IMAGE_SIDE = 250

_PIXELS = IMAGE_SIDE * IMAGE_SIDE
_PROJECTION_SIGMA = 1.0 / math.sqrt(_PIXELS)
_PROJECTION_CHUNK = 64  # rows of the projection matrix generated at a time

_MAGIC = b"VQCF"
_FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQI")  # magic, version, sample count, feature dim
_IMAGE_EXTENSIONS = (".png", ".pgm")


class FeatureFormatError(ValueError):
    """Malformed feature file; `offset` is the byte (or line) position."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


@dataclass
class ImageRecord:
    """8-bit grayscale image, row-major pixels, with its binary label."""

    width: int
    height: int
    pixels: np.ndarray
    label: int

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.uint8).reshape(-1)
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if self.pixels.size != self.width * self.height:
            raise ValueError(
                f"pixel count {self.pixels.size} does not match {self.width}x{self.height}"
            )
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass
class Sample:
    """512 float32 features plus a binary label."""

    features: np.ndarray
    label: int

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float32).reshape(-1)
        if self.features.shape != (FEATURE_DIM,):
            raise ValueError(f"features must have {FEATURE_DIM} entries, got {self.features.shape}")
        if not np.all(np.isfinite(self.features)):
            raise ValueError("features must be finite")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass
class DatasetSplit:
    train: list
    validation: list
    test: list


def _to_grayscale(img):
    # Pinned luma conversion for color inputs: (77R + 150G + 29B) >> 8
    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8)
    if img.mode not in ("RGB", "RGBA"):
        img = img.convert("RGB")
    rgb = np.asarray(img, dtype=np.uint32)[:, :, :3]
    luma = (77 * rgb[:, :, 0] + 150 * rgb[:, :, 1] + 29 * rgb[:, :, 2]) >> 8
    return luma.astype(np.uint8)


def load_image(path, label):
    """Decode one PNG/PGM file to an 8-bit grayscale ImageRecord."""
    try:
        with Image.open(path) as img:
            gray = _to_grayscale(img)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise ValueError(f"cannot decode image file {path}: {exc}") from exc
    height, width = gray.shape
    return ImageRecord(width=width, height=height, pixels=gray.reshape(-1), label=label)


def load_image_dir(path, label):
    """Load every supported image in a directory, sorted by filename bytes."""
    names = [n for n in os.listdir(path) if n.lower().endswith(_IMAGE_EXTENSIONS)]
    names.sort(key=lambda n: n.encode("utf-8", "surrogateescape"))
    return [load_image(os.path.join(path, n), label) for n in names]


def resize_bilinear(image, out_w, out_h):
    """Bilinear resample with pixel-center alignment and edge clamping.

    Source coordinate for output pixel d is (d + 0.5) * (src/dst) - 0.5;
    results re-quantize to 8 bits by round-half-up.
    """
    if out_w <= 0 or out_h <= 0:
        raise ValueError(f"target dimensions must be positive, got {out_w}x{out_h}")
    src = image.pixels.reshape(image.height, image.width).astype(np.float64)

    def axis_coords(dst_size, src_size):
        coords = (np.arange(dst_size) + 0.5) * (src_size / dst_size) - 0.5
        coords = np.clip(coords, 0.0, src_size - 1.0)
        lo = np.floor(coords).astype(np.int64)
        hi = np.minimum(lo + 1, src_size - 1)
        return lo, hi, coords - lo

    x0, x1, fx = axis_coords(out_w, image.width)
    y0, y1, fy = axis_coords(out_h, image.height)
    fy = fy[:, None]
    top = src[y0][:, x0] * (1.0 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1.0 - fx) + src[y1][:, x1] * fx
    blended = top * (1.0 - fy) + bottom * fy
    quantized = np.floor(blended + 0.5).astype(np.uint8)
    return ImageRecord(width=out_w, height=out_h, pixels=quantized.reshape(-1), label=image.label)


def _projection_blocks(rng):
    for start in range(0, FEATURE_DIM, _PROJECTION_CHUNK):
        rows = min(_PROJECTION_CHUNK, FEATURE_DIM - start)
        yield start, rng.normal(0.0, _PROJECTION_SIGMA, size=(rows, _PIXELS))


def _image_vector(image):
    if image.width != IMAGE_SIDE or image.height != IMAGE_SIDE:
        raise ValueError(
            f"projection expects a {IMAGE_SIDE}x{IMAGE_SIDE} image, "
            f"got {image.width}x{image.height}"
        )
    return image.pixels.astype(np.float64) / 255.0


def project_features(image, projection_seed):
    """Project a 250x250 image to 512 features via a seeded Gaussian matrix.

    Pixels are scaled to [0,1] and flattened row-major; the 512 x 62500
    matrix entries are drawn row-major from Normal(0, 1/sqrt(62500)).
    """
    x = _image_vector(image)
    rng = np.random.default_rng(projection_seed)
    feats = np.empty(FEATURE_DIM)
    for start, block in _projection_blocks(rng):
        feats[start:start + block.shape[0]] = block @ x
    return Sample(features=feats.astype(np.float32), label=image.label)


class RandomProjector:
    """Caches the seeded projection matrix for projecting many images.

    transform() is bitwise-identical to project_features() for the same seed.
    """

    def __init__(self, projection_seed):
        self.projection_seed = projection_seed
        self._blocks = None

    def _ensure_blocks(self):
        if self._blocks is None:
            rng = np.random.default_rng(self.projection_seed)
            self._blocks = [(start, block) for start, block in _projection_blocks(rng)]
        return self._blocks

    def transform(self, image):
        x = _image_vector(image)
        feats = np.empty(FEATURE_DIM)
        for start, block in self._ensure_blocks():
            feats[start:start + block.shape[0]] = block @ x
        return Sample(features=feats.astype(np.float32), label=image.label)


def gen_synthetic(n_per_class, separation, noise_sigma, seed):
    """Two Gaussian classes in 512-d, interleaved 0,1,0,1,...

    Class means sit at -(separation/2) and +(separation/2) along a seeded
    random unit direction, so their distance is exactly `separation`; noise
    is Normal(0, noise_sigma) per coordinate.
    """
    if n_per_class < 1:
        raise ValueError(f"n_per_class must be >= 1, got {n_per_class}")
    if separation < 0 or noise_sigma < 0:
        raise ValueError(
            f"separation and noise_sigma must be >= 0, got {separation}, {noise_sigma}"
        )
    rng = np.random.default_rng(seed)
    direction = rng.normal(size=FEATURE_DIM)
    direction /= np.linalg.norm(direction)
    means = (-(separation / 2.0) * direction, (separation / 2.0) * direction)
    samples = []
    for _ in range(n_per_class):
        for label in (0, 1):
            feats = means[label] + rng.normal(0.0, noise_sigma, size=FEATURE_DIM)
            samples.append(Sample(features=feats.astype(np.float32), label=label))
    return samples


def split(samples, train_frac, val_frac, seed):
    """Stratified train/validation/test split via a seeded permutation.

    Requires 0 < train_frac, 0 < val_frac, and train_frac + val_frac < 1 so
    the test portion is never empty. Each part preserves input order.
    """
    if train_frac <= 0 or val_frac <= 0:
        raise ValueError(f"fractions must be positive, got {train_frac}, {val_frac}")
    if train_frac + val_frac >= 1.0:
        raise ValueError(
            f"train_frac + val_frac must be < 1 to leave a test set, "
            f"got {train_frac} + {val_frac}"
        )
    if not samples:
        raise ValueError("cannot split an empty sample list")
    rng = np.random.default_rng(seed)
    assignment = {}  # original index -> 0 train, 1 val, 2 test
    for label in (0, 1):
        indices = [i for i, s in enumerate(samples) if s.label == label]
        perm = rng.permutation(len(indices))
        n = len(indices)
        n_train = int(math.floor(train_frac * n + 0.5))
        n_val = min(int(math.floor(val_frac * n + 0.5)), n - n_train)
        for rank, j in enumerate(perm):
            part = 0 if rank < n_train else (1 if rank < n_train + n_val else 2)
            assignment[indices[j]] = part
    parts = ([], [], [])
    for i, sample in enumerate(samples):
        parts[assignment[i]].append(sample)
    return DatasetSplit(train=parts[0], validation=parts[1], test=parts[2])


def write_features(path, samples):
    """Write samples to a feature file; `.csv` paths use the text format."""
    path = os.fspath(path)
    if path.endswith(".csv"):
        lines = []
        for s in samples:
            fields = [repr(float(v)) for v in s.features]
            fields.append(str(s.label))
            lines.append(",".join(fields))
        atomic_write_text(path, "".join(line + "\n" for line in lines))
        return
    chunks = [_HEADER.pack(_MAGIC, _FORMAT_VERSION, len(samples), FEATURE_DIM)]
    for s in samples:
        chunks.append(s.features.astype("<f4").tobytes())
        chunks.append(bytes([s.label]))
    atomic_write_bytes(path, b"".join(chunks))


def _read_features_csv(path):
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != FEATURE_DIM + 1:
                raise FeatureFormatError(
                    f"{path}: expected {FEATURE_DIM} features plus a label, "
                    f"got {len(fields)} fields on line {lineno}",
                    lineno,
                )
            try:
                feats = np.array([float(v) for v in fields[:-1]], dtype=np.float32)
                label = int(fields[-1])
            except ValueError as exc:
                raise FeatureFormatError(f"{path}: bad value on line {lineno}: {exc}", lineno) from exc
            samples.append(Sample(features=feats, label=label))
    return samples


def read_features(path):
    """Read a feature file written by write_features (binary or CSV)."""
    path = os.fspath(path)
    if path.endswith(".csv"):
        return _read_features_csv(path)
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise FeatureFormatError(f"{path}: truncated header", len(data))
    magic, version, count, dim = _HEADER.unpack_from(data, 0)
    if magic != _MAGIC:
        raise FeatureFormatError(f"{path}: bad magic {magic!r}, expected {_MAGIC!r}", 0)
    if version != _FORMAT_VERSION:
        raise FeatureFormatError(f"{path}: unsupported format version {version}", 4)
    if dim != FEATURE_DIM:
        raise FeatureFormatError(f"{path}: feature dimension {dim}, expected {FEATURE_DIM}", 14)
    record = 4 * FEATURE_DIM + 1
    expected = _HEADER.size + count * record
    if len(data) != expected:
        raise FeatureFormatError(
            f"{path}: file has {len(data)} bytes, expected {expected} for {count} samples",
            min(len(data), expected),
        )
    samples = []
    offset = _HEADER.size
    for _ in range(count):
        feats = np.frombuffer(data, dtype="<f4", count=FEATURE_DIM, offset=offset)
        offset += 4 * FEATURE_DIM
        label = data[offset]
        if label not in (0, 1):
            raise FeatureFormatError(f"{path}: label byte must be 0 or 1, got {label}", offset)
        offset += 1
        samples.append(Sample(features=feats.copy(), label=int(label)))
    return samples
