"""Cascade sizes on random DAGs follow a power law.

Evaluates the closed-form cascade-size pmf and its tail constant on a
100-product random DAG, then shows how the fractional-cascade tail
function behaves and what shock level the closed-form bound certifies.
"""

import prodnet as pn


def main():
    K, p, x = 100, 0.05, 0.1
    print(f"random DAG with K={K}, edge probability p={p}, shock x={x}\n")

    print("cascade-size pmf (closed form), selected f:")
    for f in (1, 2, 5, 10, 20, 40):
        v = pn.powerlaw_pmf(f, K, p, x, 1)
        print(f"  Pr[F={f:3d}] = {v:.5f} {'#' * int(3000 * v)}")
    c = pn.powerlaw_tail_constant(K, p, x, 1)
    print(f"\ntail constant C: {c:.6f}  (Pr[F >= f] >= C/f)")

    print("\nfractional-cascade probability g at eps=0.3 as K grows:")
    for k in (100, 1000, 10_000, 10**6):
        print(f"  K={k:>8}: g = {pn.cascade_tail_g(x, k, p, 0.3, 1):.6f}")
    print(f"  limit x(1-eps) = {x * 0.7:.6f}")

    print("\nshock level certified to keep fractional cascades at O(1/K):")
    for k in (100, 1000, 10_000):
        xb = pn.rdag_lb_x(k, p, 0.5, 1)
        print(f"  K={k:>6}: x = {xb:.5f}, majorant = {pn.cascade_tail_g_envelope(xb, k, p, 0.5, 1):.6f}")

    print("\nMonte Carlo on one realized DAG (full percolation, 20k trials):")
    net = pn.generate_rdag(K, p, seed=3)
    batch = pn.run_batch(net, pn.PercolationConfig(x=x, seed=9), 20_000)
    print(f"  mean failures {batch.F.mean():.2f} of {K}; "
          f"Pr[F >= 30] = {(batch.F >= 30).mean():.4f}")


if __name__ == "__main__":
    main()
