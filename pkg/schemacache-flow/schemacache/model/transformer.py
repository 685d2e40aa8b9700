"""
A small deterministic transformer used to prove KV-cache assembly exact.
Norm-free residual blocks, rotary attention, tanh MLP, no output head.
"""

import dataclasses
import logging
import math

import torch

from . rotary import apply_rotation

logger = logging.getLogger(__name__)

@dataclasses.dataclass
class LayerWeights:
    wq : torch.Tensor
    wk : torch.Tensor
    wv : torch.Tensor
    wo : torch.Tensor
    w1 : torch.Tensor
    w2 : torch.Tensor

@dataclasses.dataclass
class PrefillResult:
    # [layers, tokens, heads, head_dim], keys rotated at their positions
    keys : torch.Tensor
    values : torch.Tensor
    # [tokens, hidden]
    hidden : torch.Tensor

class ToyTransformer:

    def __init__(self, config):

        self.config = config

        # Drawn in float64 so both precisions share the same weights
        gen = torch.Generator().manual_seed(config.weight_seed)

        def normal(*shape, fan_in):
            w = torch.randn(*shape, generator=gen, dtype=torch.float64)
            return (w / math.sqrt(fan_in)).to(config.dtype)

        h = config.hidden_dim

        self.embedding = normal(config.vocab_size, h, fan_in=1)

        self.layers = [
            LayerWeights(
                wq=normal(h, h, fan_in=h),
                wk=normal(h, h, fan_in=h),
                wv=normal(h, h, fan_in=h),
                wo=normal(h, h, fan_in=h),
                w1=normal(h, 2 * h, fan_in=h),
                w2=normal(2 * h, h, fan_in=2 * h),
            )
            for _ in range(config.num_layers)
        ]

        logger.debug(
            f"Model: {config.num_layers} layers, {config.num_heads} heads, "
            f"head_dim {config.head_dim}, seed {config.weight_seed}"
        )

    @property
    def dtype(self):
        return self.config.dtype

    def embed(self, tokens):
        ids = torch.as_tensor(list(tokens), dtype=torch.long)
        return self.embedding[ids]

    def qkv(self, x, layer):
        """Unrotated q, k, v of shape [tokens, heads, head_dim]"""

        w = self.layers[layer]
        shape = (x.shape[0], self.config.num_heads, self.config.head_dim)

        return (
            (x @ w.wq).reshape(shape),
            (x @ w.wk).reshape(shape),
            (x @ w.wv).reshape(shape),
        )

    def rotate(self, x, positions):
        return apply_rotation(x, positions, self.config.rotary_base)

    def attend(self, q, k, v, allowed):
        """
        q: [tq, heads, d] rotated, k/v: [tk, heads, d], allowed: [tq, tk]
        bool.  Returns [tq, hidden].
        """

        scale = 1.0 / math.sqrt(self.config.head_dim)
        scores = torch.einsum("thd,shd->hts", q, k) * scale
        scores = scores.masked_fill(~allowed.unsqueeze(0), float("-inf"))
        probs = torch.softmax(scores, dim=-1)
        out = torch.einsum("hts,shd->thd", probs, v)

        return out.reshape(q.shape[0], self.config.hidden_dim)

    def finish_block(self, x, attn, layer):
        w = self.layers[layer]
        x = x + attn @ w.wo
        return x + torch.tanh(x @ w.w1) @ w.w2

    def forward(self, tokens, positions, allowed):
        """Full prefill of tokens at positions under an attention mask"""

        x = self.embed(tokens)

        keys = []
        values = []

        for layer in range(self.config.num_layers):

            q, k, v = self.qkv(x, layer)
            q = self.rotate(q, positions)
            k = self.rotate(k, positions)

            keys.append(k)
            values.append(v)

            x = self.finish_block(x, self.attend(q, k, v, allowed), layer)

        return PrefillResult(
            keys=torch.stack(keys), values=torch.stack(values), hidden=x,
        )

