#!/usr/bin/env python3
"""One-off generator for the pinned 8-state / 4-input surrogate plant.

Searches random seeds for an open-loop-stable system meeting every pin:
rho(A) in [0.9, 0.99], controllable, measurable switching band around the
M grid 0.4..3.1 under K1 = K*, moderate auto dwell time, and a destabilizing
coefficient alpha with rho(A + B(K* + alpha*11')) in [1.005, 1.05].

Writes core/data/surrogate.json and core/src/surrogate_data.inc.
"""
import json
import sys

import numpy as np
import scipy.linalg as sla


def spectral_radius(m):
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def dlyap_atxa(a, s):
    # Solves A' X A - X + S = 0  (note scipy solves a X a' - X + q = 0).
    return sla.solve_discrete_lyapunov(a.T, s)


def contraction_factor(a, p):
    s = sla.sqrtm(p).real
    si = np.linalg.inv(s)
    t = si @ a.T @ p @ a @ si
    t = 0.5 * (t + t.T)
    return float(np.max(np.linalg.eigvalsh(t)))


def find_common_lyapunov(a1, a0, margin=0.01, tmax=10**6):
    p = dlyap_atxa(a1, np.eye(a1.shape[0]))
    rho = min(1 - 1e-9, contraction_factor(a1, p) + margin)
    a0t = np.eye(a0.shape[0])
    for t in range(1, tmax + 1):
        a0t = a0t @ a0
        if contraction_factor(a0t, p) < rho:
            return p, rho, t
    raise RuntimeError("no dwell time")


def evaluate(seed, b_scale):
    rng = np.random.default_rng(seed)
    n, m = 8, 4
    g = rng.normal(size=(n, n))
    a = 0.95 * g / spectral_radius(g)
    b = b_scale * rng.normal(size=(n, m))

    # Controllability
    ctrb = np.hstack([np.linalg.matrix_power(a, i) @ b for i in range(n)])
    sv = np.linalg.svd(ctrb, compute_uv=False)
    if sv[-1] / sv[0] < 1e-5:
        return None

    q = np.eye(n)
    r = np.eye(m)
    w = np.eye(n)
    pstar = sla.solve_discrete_are(a, b, q, r)
    kstar = -np.linalg.solve(r + b.T @ pstar @ b, b.T @ pstar @ a)
    a1 = a + b @ kstar
    rho_a1 = spectral_radius(a1)
    if rho_a1 > 0.93:
        return None

    p, rho, t_auto = find_common_lyapunov(a1, a)
    if t_auto > 60:
        return None

    # Switching statistic scale under the optimal loop
    sigma = sla.solve_discrete_lyapunov(a1, w)
    kcov = kstar @ sigma @ kstar.T
    top_sigma = float(np.sqrt(np.max(np.linalg.eigvalsh(kcov))))
    if not (0.55 <= top_sigma <= 1.1):
        return None

    # Monte-Carlo per-step trigger probabilities at the grid ends
    samp = rng.normal(size=(200000, n)) @ sla.sqrtm(sigma).real.T
    norms = np.linalg.norm(samp @ kstar.T, axis=1)
    p_low = float(np.mean(norms >= 0.4))
    p_high = float(np.mean(norms >= 3.1))
    if not (p_low > 0.05 and 1e-6 < p_high < 2e-3):
        return None

    # Destabilizing coefficient: prefer 0.33, else bisect to rho ~ 1.01
    ones = np.ones((m, n))
    def rho_dest(alpha):
        return spectral_radius(a + b @ (kstar + alpha * ones))
    alpha = 0.33
    if not (1.005 <= rho_dest(alpha) <= 1.05):
        lo, hi = 0.0, 4.0
        if rho_dest(hi) < 1.01:
            return None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if rho_dest(mid) < 1.01:
                lo = mid
            else:
                hi = mid
        alpha = round(hi, 4)
        if not (1.005 <= rho_dest(alpha) <= 1.05):
            return None

    # Certified floor diagnostics
    wt = sla.solve_discrete_lyapunov(a, w)  # K0 = 0
    rho_eff = max(rho, 0.2500001)
    a0_const = np.sqrt(8 * n * np.max(np.linalg.eigvalsh(wt)) *
                       np.max(np.linalg.eigvalsh(p)) / np.min(np.linalg.eigvalsh(p)))
    a0_const /= (1 - rho_eff ** 0.25)
    kdiff = float(np.linalg.svd(kstar, compute_uv=False)[0])

    p0 = dlyap_atxa(a, q)  # K0 = 0 certificate
    rho0 = contraction_factor(a, p0) + 0.01
    cap_m1 = (8 * (1 + rho0) * np.linalg.norm(b, 2) ** 2 *
              np.max(np.linalg.eigvalsh(p0)) / (1 - rho0) ** 2 + 2) + \
             8 * (1 + rho0) * np.trace(p0) / (1 - rho0) ** 2
    open_loop_cost = float(np.trace(wt))

    return dict(seed=seed, b_scale=b_scale, a=a, b_mat=b, alpha=alpha,
                rho_a=0.95, rho_a1=rho_a1, rho_dest=rho_dest(alpha),
                t_auto=t_auto, rho=rho, top_sigma=top_sigma,
                p_low=p_low, p_high=p_high, a0=a0_const, kdiff=kdiff,
                floor=a0_const * kdiff, jstar=float(np.trace(pstar)),
                rho0=rho0, cap_m1=float(cap_m1), open_loop_cost=open_loop_cost,
                ctrb_cond=float(sv[0] / sv[-1]))


def main():
    hits = []
    for b_scale in (0.35, 0.5, 0.7):
        for seed in range(400):
            r = evaluate(seed, b_scale)
            if r is not None:
                hits.append(r)
                print(f"seed={seed} b_scale={b_scale} rho_a1={r['rho_a1']:.3f} "
                      f"t={r['t_auto']} rho={r['rho']:.3f} sigma={r['top_sigma']:.3f} "
                      f"pl={r['p_low']:.3f} ph={r['p_high']:.2e} alpha={r['alpha']} "
                      f"rho_dest={r['rho_dest']:.4f} floor={r['floor']:.1f} "
                      f"J*={r['jstar']:.2f} cap={r['cap_m1']:.0f} olc={r['open_loop_cost']:.1f} "
                      f"cc={r['ctrb_cond']:.1e}")
            if len(hits) >= 8:
                break
        if len(hits) >= 8:
            break
    if not hits:
        print("no candidate found", file=sys.stderr)
        sys.exit(1)
    # Prefer a moderate destabilizing coefficient, then a small certified
    # floor a0 * ||K*|| and a small dwell time.
    hits.sort(key=lambda r: (r["alpha"] > 1.0, r["floor"] + 20.0 * r["t_auto"]))
    best = hits[0]
    print("\nselected:", best["seed"], best["b_scale"], "alpha", best["alpha"])

    data = {
        "name": "surrogate_plant_8x4",
        "description": "Pinned open-loop-stable 8-state/4-input plant with unit "
                       "noise and cost weights; alpha_destabilizing is tuned so "
                       "that K* + alpha*ones(m,n) destabilizes the loop.",
        "generator": {"script": "tools/gen_surrogate.py", "seed": best["seed"],
                      "b_scale": best["b_scale"]},
        "alpha_destabilizing": best["alpha"],
        "A": [[float(v) for v in row] for row in best["a"]],
        "B": [[float(v) for v in row] for row in best["b_mat"]],
    }
    with open("core/data/surrogate.json", "w") as f:
        json.dump(data, f, indent=1)
        f.write("\n")

    def cxx_rows(mat):
        rows = []
        for row in mat:
            rows.append("    " + ", ".join(f"{v:.17g}" for v in row) + ",")
        return "\n".join(rows)

    with open("core/src/surrogate_data.inc", "w") as f:
        f.write("// Pinned surrogate plant; regenerate with tools/gen_surrogate.py\n")
        f.write("// (must stay in sync with core/data/surrogate.json).\n")
        f.write(f"constexpr double kSurrogateAlpha = {best['alpha']};\n")
        f.write("constexpr double kSurrogateA[64] = {\n")
        f.write(cxx_rows(best["a"]))
        f.write("\n};\n")
        f.write("constexpr double kSurrogateB[32] = {\n")
        f.write(cxx_rows(best["b_mat"]))
        f.write("\n};\n")
    print("wrote core/data/surrogate.json and core/src/surrogate_data.inc")


if __name__ == "__main__":
    main()
