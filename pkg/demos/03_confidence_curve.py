"""Detection confidence vs photon count (reduced-size sweep).

Reproduces the shape of the confidence curves: with no background (Q=1)
~150 signal photons reach 95% confidence at T/tc = 1e4; the fiducial
flare background (Q=0.4) needs ~375.  The full 500-trial version runs in
the acceptance suite; this one uses 120 trials per point.
"""

from lensdelay.harness import ExperimentConfig, crossing_point, run_confidence_curve

for Q, points in ((1.0, [90, 120, 150, 180, 240]), (0.4, [150, 250, 375, 450])):
    cfg = ExperimentConfig(
        kind="confidence_curve",
        trials=120,
        seed=7,
        out=f"confidence_Q{Q:g}.csv",
        params={"omega0_tc": 50.0, "T_over_tc": 1e4, "A": 1.34, "Q": Q,
                "n_sig_list": points},
    )
    curve = run_confidence_curve(cfg)
    for row in curve.rows():
        print(f"Q={Q:g}  n_sig={row[0]:4d}  success={row[1]:.3f}  "
              f"CI=[{row[2]:.3f}, {row[3]:.3f}]")
    n95 = crossing_point(curve.n_sig, curve.success_rate, 0.95)
    print(f"Q={Q:g}: 95% crossing at n_sig ~ {n95:.0f}" if n95 else
          f"Q={Q:g}: 95% not reached in this sweep")
    print(f"wrote confidence_Q{Q:g}.csv")
