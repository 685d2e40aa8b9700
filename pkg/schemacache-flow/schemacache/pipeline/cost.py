
import dataclasses

default_compute_per_token = 1e-6
default_load_per_token = 1e-4
default_switch_overhead = 5e-3

@dataclasses.dataclass(frozen=True)
class CostModel:
    """Simulated time units charged for prefill compute and tier moves"""

    compute_per_token : float = default_compute_per_token
    load_per_token : float = default_load_per_token
    switch_overhead : float = default_switch_overhead

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) < 0:
                raise ValueError(f"Cost {f.name} must not be negative")

    def compute(self, context_tokens, query_tokens):
        """Query tokens attend the cached context plus causally each other"""
        return self.compute_per_token * (
            context_tokens * query_tokens + query_tokens * query_tokens / 2
        )

    def load(self, tokens, swapped):
        return self.load_per_token * tokens + (
            self.switch_overhead if swapped else 0.0
        )

    def full_prefill(self, tokens):
        return self.compute_per_token * tokens * tokens / 2

    def to_dict(self):
        return dataclasses.asdict(self)

