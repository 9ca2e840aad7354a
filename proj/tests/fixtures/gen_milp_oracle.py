"""Reference optima for small storage-arbitrage instances, solved as MILPs
with HiGHS (scipy.optimize.milp). Independent of the C++ LP code; the C++
solver tests read the JSON written here.

    python3 gen_milp_oracle.py > milp_oracle.json
"""
import json
import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp


def solve_instance(prices, p):
    T = len(prices)
    dt = p["dt_hours"]
    # variable layout: pc[0:T], pd[T:2T], s[2T:3T], u[3T:4T] (u=1 allows charging)
    nv = 4 * T
    c = np.zeros(nv)
    c[0:T] = dt * np.asarray(prices)       # minimize -profit
    c[T:2 * T] = -dt * np.asarray(prices)
    rows, lo, hi = [], [], []
    for t in range(T):
        r = np.zeros(nv)
        r[2 * T + t] = 1.0
        if t > 0:
            r[2 * T + t - 1] = -p["rho"]
        r[t] = -dt * p["eta_c"]
        r[T + t] = dt / p["eta_d"]
        rhs = p["rho"] * p["initial_soc"] if t == 0 else 0.0
        rows.append(r); lo.append(rhs); hi.append(rhs)
        r = np.zeros(nv); r[t] = 1.0; r[3 * T + t] = -p["p_charge_max"]
        rows.append(r); lo.append(-np.inf); hi.append(0.0)
        r = np.zeros(nv); r[T + t] = 1.0; r[3 * T + t] = p["p_discharge_max"]
        rows.append(r); lo.append(-np.inf); hi.append(p["p_discharge_max"])
    lb = np.concatenate([np.zeros(2 * T), np.full(T, p["soc_min"]), np.zeros(T)])
    ub = np.concatenate([np.full(T, p["p_charge_max"]), np.full(T, p["p_discharge_max"]),
                         np.full(T, p["soc_max"]), np.ones(T)])
    integrality = np.concatenate([np.zeros(3 * T), np.ones(T)])
    res = milp(c, constraints=LinearConstraint(np.array(rows), lo, hi), bounds=Bounds(lb, ub),
               integrality=integrality, options={"mip_rel_gap": 0.0, "presolve": True})
    if res.status != 0:
        return None
    return -res.fun


def main():
    rng = np.random.default_rng(20240101)
    cases = []
    while len(cases) < 120:
        T = int(rng.integers(1, 11))
        eta_c = float(rng.uniform(0.7, 1.0))
        eta_d = float(rng.uniform(0.7, 1.0))
        rho = float(rng.choice([1.0, rng.uniform(0.9, 1.0)]))
        soc_min = float(rng.choice([0.0, rng.uniform(0.0, 2.0)]))
        soc_max = soc_min + float(rng.uniform(1.0, 10.0))
        params = {
            "p_charge_max": float(rng.uniform(0.5, 2.0)),
            "p_discharge_max": float(rng.uniform(0.5, 2.0)),
            "eta_c": eta_c, "eta_d": eta_d, "rho": rho,
            "soc_min": soc_min, "soc_max": soc_max,
            "dt_hours": float(rng.choice([1.0, 0.5])),
        }
        params["initial_soc"] = float(rng.uniform(soc_min, soc_max))
        prices = [float(x) for x in rng.uniform(-100.0, 100.0, T)]
        obj = solve_instance(prices, params)
        if obj is None:
            continue  # leakage can make a high soc_min unreachable
        cases.append({"params": params, "prices": prices, "objective": obj})
    json.dump({"generator": "scipy.optimize.milp (HiGHS), mip_rel_gap=0", "cases": cases}, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
