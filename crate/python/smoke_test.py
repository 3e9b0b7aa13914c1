#!/usr/bin/env python3
"""Smoke test for the witt_py extension module.

Build the extension and place it next to this script (or on sys.path):

    cargo build -p witt-py --release
    cp target/release/libwitt_py.so python/witt_py.so
    python3 python/smoke_test.py
"""

import sys

import witt_py


def check(cond, label):
    if not cond:
        print(f"FAIL: {label}")
        sys.exit(1)
    print(f"ok: {label}")


def main():
    ctx = witt_py.WittContext(p=3, d=2, n=3, m=2)
    check(repr(ctx) == "WittContext(p=3, d=2, n=3, m=2)", "context repr")

    a = ctx.random(2, seed=7)
    b = ctx.random(2, seed=8)
    check(a == ctx.random(2, seed=7), "random is deterministic")
    check(not (a == b), "different seeds differ")

    s_naive = a.add(b, backend="naive")
    for backend in ("illusie", "phantom"):
        check(a.add(b, backend=backend) == s_naive, f"add agrees: {backend}")
        check(a.mul(b, backend=backend) == a.mul(b, backend="naive"),
              f"mul agrees: {backend}")

    check(a.sub(a).is_zero(), "a - a = 0")
    check(a.add(a.neg()).is_zero(), "a + (-a) = 0")
    check(a.add(ctx.zero()) == a, "zero is neutral")
    check(a.mul(ctx.one()) == a, "one is neutral")

    t = ctx.teichmueller("X1 + t")
    u = ctx.teichmueller("X2^2 + 2")
    prod = t.mul(u)
    check(prod.coords()[1] == "0" and prod.coords()[2] == "0",
          "teichmueller representatives multiply to a representative")

    round_tripped = witt_py.parse_witt(str(a))
    check(round_tripped == a, "text round trip")

    ghost = a.ghost_components()
    check(len(ghost) == 3, "ghost component count")
    check(a.illusie_lift() == ghost[-1], "lift equals last ghost component")

    fv = a.verschiebung(1).frobenius(1)
    p_fold = ctx.zero()
    for _ in range(3):
        p_fold = p_fold.add(a)
    check(fv == p_fold, "F(V(w)) = p*w")

    print("smoke test passed")


if __name__ == "__main__":
    main()
