#!/usr/bin/env python3
# Copyright 2026 The ornn Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes one-step FP/BP reference vectors for the fused kernel.

The step below is a plain loop version of the one-step forward/backward
pass (1-based indices kept as k - 1). It uses full-length inner products and
updates, so it shares no code path with the C++ kernel. G is written in full,
including entries above each column's support.

Usage: gen_reference_vectors.py [output path]
"""

import sys

import numpy as np

# (n, m) per case, m <= n - 1.
CASES = [(2, 1), (3, 2), (4, 1), (4, 3), (5, 2), (8, 4), (8, 7), (12, 5),
         (16, 1), (16, 8), (16, 15), (24, 12), (32, 31)]
SEED = 20260101


def reference_step(U, h, BPg):
    n, m = U.shape
    G = np.zeros((n, m))
    H = np.zeros((n, m + 1))
    N = np.zeros(m)
    h_tilde = np.zeros(m)
    H[:, m] = h
    g = BPg.copy()
    for k in range(0, m):
        j = m - k - 1
        N[j] = U[:, j] @ U[:, j]
        h_tilde[j] = 2 / N[j] * (U[:, j] @ H[:, j + 1])
        H[:, j] = H[:, j + 1] - h_tilde[j] * U[:, j]
    C = H[:, 0].copy()
    for k in range(0, m):
        c_tilde_k = 2 * (U[:, k] @ g) / N[k]
        g = g - c_tilde_k * U[:, k]
        G[:, k] = -h_tilde[k] * g - c_tilde_k * H[:, k + 1]
    return C, g, G


def fmt(values):
    return " ".join("%.17g" % v for v in values)


def main():
    path = sys.argv[1] if len(sys.argv) > 1 else "reference_vectors.txt"
    rng = np.random.default_rng(SEED)
    lines = ["# one-step FP/BP reference vectors",
             "# stanza: n m / U rows / h / dL/dC / C / g / G rows"]
    for n, m in CASES:
        U = rng.uniform(-1.0, 1.0, size=(n, m))
        for c in range(m):
            U[:c, c] = 0.0
        h = rng.uniform(-1.0, 1.0, size=n)
        BPg = rng.uniform(-1.0, 1.0, size=n)
        C, g, G = reference_step(U, h, BPg)
        lines.append("# case")
        lines.append("%d %d" % (n, m))
        lines.extend(fmt(row) for row in U)
        lines.append(fmt(h))
        lines.append(fmt(BPg))
        lines.append(fmt(C))
        lines.append(fmt(g))
        lines.extend(fmt(row) for row in G)
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
