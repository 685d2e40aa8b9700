
import dataclasses

import torch

DTYPES = {
    "float32": torch.float32,
    "float64": torch.float64,
}

@dataclasses.dataclass(frozen=True)
class ModelConfig:
    vocab_size : int
    num_layers : int = 2
    num_heads : int = 4
    head_dim : int = 16
    rotary_base : float = 10000.0
    weight_seed : int = 0
    precision : str = "float32"

    def __post_init__(self):

        for k in ("vocab_size", "num_layers", "num_heads", "head_dim"):
            if getattr(self, k) <= 0:
                raise ValueError(f"{k} must be positive")

        if self.head_dim % 2 != 0:
            raise ValueError("head_dim must be even for rotary encoding")

        if self.precision not in DTYPES:
            raise ValueError(f"Precision {self.precision} not known")

    @property
    def hidden_dim(self):
        return self.num_heads * self.head_dim

    @property
    def dtype(self):
        return DTYPES[self.precision]

    def to_dict(self):
        return dataclasses.asdict(self)

    @staticmethod
    def from_dict(d):
        return ModelConfig(**d)

