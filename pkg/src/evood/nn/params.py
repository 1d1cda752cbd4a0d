"""Architecture description, parameter containers, and initialization."""

from dataclasses import dataclass, field, asdict

import numpy as np

from ..errors import ConfigError, ShapeError
from ..rng import INIT, stream_rng
from .tensor import Tensor

ARCH_KINDS = ("mlp2d", "gru")
EVIDENCE_ACTIVATIONS = ("softplus", "relu")


@dataclass(frozen=True)
class ArchSpec:
    """Shape of the classifier network.

    Both kinds share the same factoring: an embedding stage mapping raw
    inputs into a d_e-dimensional continuous space (a linear layer for
    point inputs, a token-embedding lookup for text), and a head mapping
    embeddings to K pre-activation evidence logits.  `activation` is the
    nonnegative activation applied to the head output when the model is
    used evidentially; softplus is the default because gradient checks
    need smoothness, relu is available as an option.
    """

    kind: str
    num_classes: int
    embed_dim: int = 16
    hidden_dim: int = 64
    num_layers: int = 2
    input_dim: int = 2
    vocab_size: int | None = None
    activation: str = "softplus"

    def __post_init__(self):
        if self.kind not in ARCH_KINDS:
            raise ConfigError(f"unknown architecture kind {self.kind!r}")
        if self.num_classes < 2:
            raise ConfigError("need at least 2 classes")
        if self.activation not in EVIDENCE_ACTIVATIONS:
            raise ConfigError(f"unknown evidence activation {self.activation!r}")
        if min(self.embed_dim, self.hidden_dim, self.num_layers) < 1:
            raise ConfigError("embed_dim, hidden_dim and num_layers must be >= 1")
        if self.kind == "gru" and (self.vocab_size is None or self.vocab_size < 2):
            raise ConfigError("gru architecture needs a vocab_size >= 2")
        if self.kind == "mlp2d" and self.input_dim < 1:
            raise ConfigError("mlp2d needs input_dim >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "ArchSpec":
        return ArchSpec(**d)


class ModelParams:
    """Named collection of trainable tensors."""

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._tensors: dict[str, Tensor] = {}

    def register(self, name: str, tensor: Tensor) -> Tensor:
        if name in self._tensors:
            raise ConfigError(f"parameter {name!r} registered twice")
        tensor.name = name
        self._tensors[name] = tensor
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def __contains__(self, name: str) -> bool:
        return name in self._tensors

    def __len__(self) -> int:
        return len(self._tensors)

    def names(self) -> list[str]:
        return list(self._tensors)

    def items(self):
        return self._tensors.items()

    def tensors(self) -> list[Tensor]:
        return list(self._tensors.values())

    def zero_grad(self):
        for t in self._tensors.values():
            t.zero_grad()

    def num_values(self) -> int:
        return sum(t.data.size for t in self._tensors.values())


def _uniform_init(rng, shape, fan_in) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def init_params(arch: ArchSpec, seed: int = 0) -> ModelParams:
    """Seeded parameter initialization: weights uniform in
    [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.  Draw order is fixed
    so the same (arch, seed) always produces the same values.
    """
    rng = stream_rng(seed, INIT)
    p = ModelParams(seed=seed)

    def weight(name, shape, fan_in):
        p.register(name, Tensor(_uniform_init(rng, shape, fan_in)))

    def bias(name, n):
        p.register(name, Tensor(np.zeros(n)))

    k = arch.num_classes
    de, dh = arch.embed_dim, arch.hidden_dim
    if arch.kind == "mlp2d":
        weight("embed.w", (arch.input_dim, de), arch.input_dim)
        bias("embed.b", de)
        width_in = de
        for i in range(arch.num_layers):
            weight(f"hidden{i}.w", (width_in, dh), width_in)
            bias(f"hidden{i}.b", dh)
            width_in = dh
        weight("out.w", (width_in, k), width_in)
        bias("out.b", k)
    else:  # gru
        weight("embed.table", (arch.vocab_size, de), de)
        width_in = de
        for i in range(arch.num_layers):
            for gate in ("z", "r", "h"):
                weight(f"gru{i}.w{gate}", (width_in, dh), dh)
                weight(f"gru{i}.u{gate}", (dh, dh), dh)
                bias(f"gru{i}.b{gate}", dh)
            width_in = dh
        weight("out.w", (dh, k), dh)
        bias("out.b", k)
    return p


def validate_params(arch: ArchSpec, params: ModelParams) -> None:
    """Check that a parameter set matches the architecture's shapes."""
    expected = init_params(arch, seed=0)
    if set(expected.names()) != set(params.names()):
        missing = set(expected.names()) - set(params.names())
        extra = set(params.names()) - set(expected.names())
        raise ShapeError(f"parameter names mismatch (missing={sorted(missing)}, extra={sorted(extra)})")
    for name, t in expected.items():
        got = params[name].data.shape
        if got != t.data.shape:
            raise ShapeError(f"parameter {name!r} has shape {got}, expected {t.data.shape}")
