"""Compiled vs pure-numpy kernels: per-kernel timings and one training step.

Usage: python3 benchmarks/bench_kernels.py [--graphs 64] [--repeat 20]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from gridflow import kernels, kernels_numpy
from gridflow.autodiff import Tape
from gridflow.batching import make_batch
from gridflow.grid import Regime
from gridflow.losses import LossConfig, combined_loss
from gridflow.model import AttentionGNN, ModelConfig
from gridflow.synth import SynthConfig, synthesize_one


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def make_samples(n: int, seed: int = 0):
    cfg = SynthConfig(regime=Regime.HV, seed=seed)
    out, attempt = [], 0
    while len(out) < n:
        s = synthesize_one(cfg, attempt)
        attempt += 1
        if s is not None:
            out.append(s)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graphs", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    batch = make_batch(make_samples(args.graphs))
    idx = batch.index
    rng = np.random.default_rng(0)
    d, heads = 8, 2
    qkv = rng.normal(size=(batch.n_nodes, 3 * d))
    beta = rng.normal(size=(idx.n_edges, heads))
    g = rng.normal(size=(batch.n_nodes, d))
    x = rng.normal(size=(batch.n_nodes, d))
    gain, bias = np.ones(d), np.zeros(d)
    print(f"batch: {args.graphs} graphs, N={batch.n_nodes}, E={idx.n_edges}")

    backends = {"numpy": kernels_numpy}
    if "compiled" in kernels.BACKENDS:
        backends["compiled"] = kernels.BACKENDS["compiled"]
    else:
        print("compiled backend unavailable; timing numpy only")

    rows = []
    for name, kb in backends.items():
        _, alpha = kb.attention_forward(qkv, beta, idx.src, idx.dst, idx.ptr, heads, 0.5)
        _, xhat, inv = kb.layer_norm_forward(x, gain, bias, 1e-5)
        rows.append((name, {
            "attention_fwd": best_of(lambda: kb.attention_forward(qkv, beta, idx.src, idx.dst, idx.ptr, heads, 0.5), args.repeat),
            "attention_bwd": best_of(lambda: kb.attention_backward(g, qkv, alpha, idx.src, idx.dst, idx.ptr, heads, 0.5), args.repeat),
            "layer_norm_fwd": best_of(lambda: kb.layer_norm_forward(x, gain, bias, 1e-5), args.repeat),
            "layer_norm_bwd": best_of(lambda: kb.layer_norm_backward(g, xhat, inv, gain), args.repeat),
        }))

    model = AttentionGNN(ModelConfig(K=10), seed=0)
    model.params["head.fc2.weight"].data = rng.normal(0, 0.1, model.params["head.fc2.weight"].shape)
    loss_cfg = LossConfig()

    def step():
        with Tape() as tape:
            total, _, _ = combined_loss(model.forward(batch), batch, loss_cfg)
            tape.backward(total)

    for name, timings in rows:
        with kernels.use_backend(name if name == "compiled" else "python"):
            timings["train_step(K=10)"] = best_of(step, max(3, args.repeat // 5))

    names = list(rows[0][1])
    print(f"{'kernel':<18}" + "".join(f"{n:>12}" for n, _ in rows) + ("     speedup" if len(rows) > 1 else ""))
    for k in names:
        line = f"{k:<18}" + "".join(f"{t[k] * 1e3:>10.3f}ms" for _, t in rows)
        if len(rows) > 1:
            line += f"{rows[0][1][k] / rows[1][1][k]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
