
import torch

from .. exceptions import DimensionMismatch

def rotate_half(x):
    x1 = x[..., : x.shape[-1] // 2]
    x2 = x[..., x.shape[-1] // 2 :]
    return torch.cat((-x2, x1), dim=-1)

def rotary_cos_sin(positions, head_dim, rotary_base):

    # Angles in float64 whatever the working precision, so the same position
    # always gets the same rotation
    positions = torch.as_tensor(positions, dtype=torch.float64)
    inv_freq = 1.0 / (
        rotary_base ** (
            torch.arange(0, head_dim, 2, dtype=torch.float64) / head_dim
        )
    )
    angles = torch.outer(positions, inv_freq)
    angles = torch.cat((angles, angles), dim=-1)

    return torch.cos(angles), torch.sin(angles)

def apply_rotation(x, positions, rotary_base=10000.0):
    """
    Rotates x of shape [tokens, heads, head_dim] (any leading dims before
    tokens are allowed) by the given per-token positions.
    """

    if x.dim() < 3:
        raise DimensionMismatch(
            f"Expected [..., tokens, heads, head_dim], got {tuple(x.shape)}"
        )

    tokens, head_dim = x.shape[-3], x.shape[-1]

    if len(positions) != tokens:
        raise DimensionMismatch(
            f"{len(positions)} positions for {tokens} tokens"
        )

    if head_dim % 2 != 0:
        raise DimensionMismatch(f"head_dim {head_dim} is odd")

    cos, sin = rotary_cos_sin(positions, head_dim, rotary_base)

    # [tokens, 1, head_dim] broadcasts over heads
    cos = cos.to(x.dtype).unsqueeze(-2)
    sin = sin.to(x.dtype).unsqueeze(-2)

    return x * cos + rotate_half(x) * sin

