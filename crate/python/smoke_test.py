"""Smoke test for the risrate_py extension module.

Build and install first: pip install --no-build-isolation ./crates/python
"""

import math

import risrate_py as rr


def main():
    # rate at SINR 10 for n = 256, eps = 1e-5
    c = rr.q_inverse(1e-5) / math.sqrt(256)
    want = math.log(11) - c * math.sqrt(20 / 11)
    assert abs(rr.fbl_rate(10.0) - want) < 1e-9
    gbar = rr.sinr_threshold()
    assert abs(gbar - 0.5 * (math.sqrt(1 + 2 * c * c) - 1)) < 1e-12
    assert abs(rr.rate_inverse(rr.fbl_rate(3.0)) - 3.0) < 1e-8

    system = rr.SystemConfig(tx_antennas=3, ris_elements=4, users=2, normalized=True)
    inst = rr.Instance.draw(system, 7)
    again = rr.Instance.from_json(inst.to_json())
    assert again.to_json() == inst.to_json()
    assert (inst.num_tx_antennas, inst.num_ris_elements, inst.num_users) == (3, 4, 2)

    results = {a: rr.solve(inst, system, a, seed=1) for a in ("lp-d", "gp-d", "gp-bd", "rand", "none")}
    for name, res in results.items():
        print(name, res)
        assert res.total_power <= system.power_budget * (1 + 1e-9)
        assert not res.certification_issues, res.certification_issues
        assert len(res.phi) == 4
    again = rr.solve(inst, system, "gp-d", seed=1)
    assert again.sinrs == results["gp-d"].sinrs

    boundary = rr.rate_region(inst, system, "none", grid=5)
    assert boundary and all(len(r) == 2 for _, r in boundary)

    rows = rr.run_experiment("maxmin_vs_power", trials=1, grid=[10.0], architectures=["none", "rand"])
    assert {r["architecture"] for r in rows} == {"none", "rand"}

    checks = rr.validate()
    assert all(ok for _, ok, _ in checks), checks

    try:
        rr.fbl_rate(1.0, 256, 0.7)
    except ValueError:
        pass
    else:
        raise AssertionError("epsilon outside (0, 0.5) accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
