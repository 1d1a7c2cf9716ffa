/** Figure renderers: one per harness CSV kind. */

import { writeFileSync } from "node:fs";

import { loadCsv, requireColumns, Table } from "./csv.js";
import { extentOf, Figure } from "./svg.js";

export const FIGURE_KINDS = [
  "confidence_curve",
  "flares_needed",
  "score_trace",
  "fringe_spectrum",
  "fu_Au",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface PlotJob {
  kind: FigureKind;
  input: string;
  output: string;
}

export function renderTable(kind: FigureKind, table: Table): string {
  switch (kind) {
    case "confidence_curve":
      return confidenceCurve(table);
    case "flares_needed":
      return flaresNeeded(table);
    case "score_trace":
      return scoreTrace(table);
    case "fringe_spectrum":
      return fringeSpectrum(table);
    case "fu_Au":
      return fuAu(table);
  }
}

/** Render a job and write the SVG; nothing is written when parsing or
 * schema validation fails. */
export function render(job: PlotJob): void {
  const svg = renderTable(job.kind, loadCsv(job.input));
  writeFileSync(job.output, svg);
}

function confidenceCurve(table: Table): string {
  const [nSig, rate, lo, hi] = requireColumns(table, [
    "n_sig",
    "success_rate",
    "ci_low",
    "ci_high",
  ]);
  const fig = new Figure(extentOf(nSig), { min: 0, max: 1.02 }, {
    xLabel: "signal photons per flare",
    yLabel: "detection confidence",
    title: "Delay-measurement confidence vs photon count",
  });
  fig.referenceLine(0.95, "95%");
  fig.referenceLine(0.5, "50%");
  fig.polyline(nSig, rate, "#1f4e8c");
  fig.errorBars(nSig, lo, hi, "#1f4e8c");
  fig.points(nSig, rate, "#1f4e8c");
  return fig.render();
}

function flaresNeeded(table: Table): string {
  const [nSig, mRequired, bound] = requireColumns(table, [
    "n_sig",
    "m_required",
    "bound_m",
  ]);
  const fig = new Figure(extentOf(nSig), extentOf([...mRequired, ...bound, 0]), {
    xLabel: "signal photons per flare",
    yLabel: "flares needed",
    title: "Flares needed for a detection",
  });
  fig.polyline(nSig, bound, "#8c1f1f");
  fig.points(nSig, mRequired, "#1f1f1f", 4);
  fig.legend([
    { label: "analytic sufficient bound", color: "#8c1f1f" },
    { label: "Monte Carlo requirement", color: "#1f1f1f" },
  ]);
  return fig.render();
}

function scoreTrace(table: Table): string {
  const [tau, score] = requireColumns(table, ["tau_s", "score"]);
  const fig = new Figure(extentOf(tau), extentOf(score), {
    xLabel: "candidate delay (s)",
    yLabel: "combined score",
    title: "Multi-flare score trace",
  });
  fig.polyline(tau, score, "#1f4e8c", { width: 0.9 });
  return fig.render();
}

function fringeSpectrum(table: Table): string {
  const [omega, density] = requireColumns(table, ["omega", "density"]);
  const fig = new Figure(extentOf(omega), extentOf([...density, 0]), {
    xLabel: "angular frequency (rad/s)",
    yLabel: "probability density",
    title: "Fringe-modulated photon spectrum",
  });
  fig.polyline(omega, density, "#1f4e8c", { width: 0.9 });
  return fig.render();
}

function fuAu(table: Table): string {
  const [u, A, f] = requireColumns(table, ["u", "A", "f"]);
  const fig = new Figure(extentOf(u), extentOf([...A, ...f, 0]), {
    xLabel: "impact parameter u",
    yLabel: "A(u), f(u)",
    title: "Magnification and delay factor of the point lens",
  });
  fig.polyline(u, A, "#1f4e8c");
  fig.polyline(u, f, "#8c1f1f");
  fig.legend([
    { label: "magnification A(u)", color: "#1f4e8c" },
    { label: "delay factor f(u)", color: "#8c1f1f" },
  ]);
  return fig.render();
}
