"""Artifact writers: trajectory tables, JSON reports and gnuplot scripts.

CSV numbers use the %.16e format (17 significant digits), enough to round
trip any 64-bit float, with a period decimal separator regardless of locale.
"""

import json

__all__ = [
    "write_trajectory_csv",
    "write_trajectory_json",
    "write_json",
    "write_plot_script",
]


def _fmt(x):
    return "%.16e" % x


def trajectory_header(n):
    cols = ["t"]
    cols += [f"theta_{i}" for i in range(1, n + 1)]
    cols += [f"omega_{i}" for i in range(1, n + 1)]
    cols += ["diameter_theta", "diameter_omega", "theta_c", "omega_c"]
    return cols


def write_trajectory_csv(path, traj):
    """Write one row per grid point with phases, frequencies and summaries."""
    n = traj.n
    times = traj.times
    with open(path, "w", newline="") as fh:
        fh.write(",".join(trajectory_header(n)) + "\n")
        for k in range(traj.grid.steps + 1):
            row = [_fmt(times[k])]
            row += [_fmt(v) for v in traj.thetas[k]]
            row += [_fmt(v) for v in traj.omegas[k]]
            row += [
                _fmt(traj.diameter_theta[k]),
                _fmt(traj.diameter_omega[k]),
                _fmt(traj.theta_c_series[k]),
                _fmt(traj.omega_c_series[k]),
            ]
            fh.write(",".join(row) + "\n")


def write_trajectory_json(path, traj):
    doc = {
        "t": traj.times.tolist(),
        "theta": traj.thetas.tolist(),
        "omega": traj.omegas.tolist(),
        "diameter_theta": traj.diameter_theta.tolist(),
        "diameter_omega": traj.diameter_omega.tolist(),
        "theta_c": traj.theta_c_series.tolist(),
        "omega_c": traj.omega_c_series.tolist(),
    }
    write_json(path, doc)


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def write_plot_script(path, csv_name, n, png_name="figure.png"):
    """Emit a gnuplot script with a diameter panel and a theta_i(t)/t panel.

    Column layout matches write_trajectory_csv: t is column 1, theta_i column
    1 + i, omega_i column 1 + n + i, diameter_theta column 2n + 2. Points at
    t = 0 in the rotation panel divide by zero and are dropped by gnuplot.
    """
    diam_col = 2 * n + 2
    lines = [
        "# gnuplot script, generated alongside the trajectory table",
        'set datafile separator ","',
        "set terminal pngcairo size 1200,480",
        f'set output "{png_name}"',
        "set multiplot layout 1,2",
        'set xlabel "t"',
        'set ylabel "phase diameter"',
        f'plot "{csv_name}" using 1:{diam_col} with lines lw 2 notitle',
        'set ylabel "theta_i(t)/t"',
        f'plot for [i=2:{n + 1}] "{csv_name}" using 1:(column(i)/column(1)) with lines notitle',
        "unset multiplot",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
