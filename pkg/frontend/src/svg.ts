/** Minimal deterministic SVG plotting: axes, polylines, points, reference
 * lines.  No timestamps or randomness in the output. */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[], padFraction = 0.05): Extent {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (!Number.isFinite(min) || !Number.isFinite(max)) {
    throw new Error("non-finite data");
  }
  if (min === max) {
    min -= 1;
    max += 1;
  }
  const pad = (max - min) * padFraction;
  return { min: min - pad, max: max + pad };
}

export class Figure {
  readonly width = 720;
  readonly height = 480;
  readonly margin = { left: 72, right: 24, top: 36, bottom: 56 };
  private parts: string[] = [];

  constructor(
    private xExtent: Extent,
    private yExtent: Extent,
    private options: { xLabel: string; yLabel: string; title?: string; xLog?: boolean },
  ) {
    if (options.xLog && xExtent.min <= 0) {
      throw new Error("log axis needs positive extent");
    }
  }

  private xPixel(x: number): number {
    const { left, right } = this.margin;
    const t = this.options.xLog
      ? (Math.log10(x) - Math.log10(this.xExtent.min)) /
        (Math.log10(this.xExtent.max) - Math.log10(this.xExtent.min))
      : (x - this.xExtent.min) / (this.xExtent.max - this.xExtent.min);
    return left + t * (this.width - left - right);
  }

  private yPixel(y: number): number {
    const { top, bottom } = this.margin;
    const t = (y - this.yExtent.min) / (this.yExtent.max - this.yExtent.min);
    return this.height - bottom - t * (this.height - top - bottom);
  }

  polyline(xs: number[], ys: number[], stroke: string, opts: { dash?: string; width?: number } = {}): void {
    const pts = xs
      .map((x, i) => `${this.xPixel(x).toFixed(2)},${this.yPixel(ys[i]).toFixed(2)}`)
      .join(" ");
    const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
    this.parts.push(
      `<polyline class="curve" fill="none" stroke="${stroke}" stroke-width="${opts.width ?? 1.8}"${dash} points="${pts}"/>`,
    );
  }

  points(xs: number[], ys: number[], fill: string, r = 3.5): void {
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle class="marker" cx="${this.xPixel(xs[i]).toFixed(2)}" cy="${this.yPixel(ys[i]).toFixed(2)}" r="${r}" fill="${fill}"/>`,
      );
    }
  }

  /** Horizontal dashed reference line spanning the plot area. */
  referenceLine(y: number, label: string): void {
    const yp = this.yPixel(y).toFixed(2);
    const { left, right } = this.margin;
    this.parts.push(
      `<line class="reference" x1="${left}" x2="${this.width - right}" y1="${yp}" y2="${yp}" stroke="#555" stroke-width="1.2" stroke-dasharray="6,4"/>`,
      `<text x="${this.width - right - 4}" y="${Number(yp) - 4}" text-anchor="end" font-size="11" fill="#555">${label}</text>`,
    );
  }

  errorBars(xs: number[], lo: number[], hi: number[], stroke: string): void {
    for (let i = 0; i < xs.length; i++) {
      const xp = this.xPixel(xs[i]).toFixed(2);
      this.parts.push(
        `<line class="errorbar" x1="${xp}" x2="${xp}" y1="${this.yPixel(lo[i]).toFixed(2)}" y2="${this.yPixel(hi[i]).toFixed(2)}" stroke="${stroke}" stroke-width="1"/>`,
      );
    }
  }

  legend(entries: { label: string; color: string }[]): void {
    const x = this.margin.left + 12;
    entries.forEach((entry, i) => {
      const y = this.margin.top + 16 + 18 * i;
      this.parts.push(
        `<line x1="${x}" x2="${x + 22}" y1="${y}" y2="${y}" stroke="${entry.color}" stroke-width="2.5"/>`,
        `<text x="${x + 28}" y="${y + 4}" font-size="12">${entry.label}</text>`,
      );
    });
  }

  private ticks(extent: Extent, count = 6, log = false): number[] {
    if (log) {
      const lo = Math.ceil(Math.log10(extent.min));
      const hi = Math.floor(Math.log10(extent.max));
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(10 ** e);
      return out.length >= 2 ? out : [extent.min, extent.max];
    }
    const span = extent.max - extent.min;
    const step = 10 ** Math.floor(Math.log10(span / count));
    const mult = [1, 2, 5, 10].find((m) => span / (m * step) <= count) ?? 10;
    const tick = mult * step;
    const out: number[] = [];
    for (let v = Math.ceil(extent.min / tick) * tick; v <= extent.max + 1e-12 * span; v += tick) {
      out.push(v);
    }
    return out;
  }

  private axes(): string {
    const { left, right, top, bottom } = this.margin;
    const x0 = left;
    const x1 = this.width - right;
    const y0 = this.height - bottom;
    const y1 = top;
    const bits = [
      `<line x1="${x0}" x2="${x1}" y1="${y0}" y2="${y0}" stroke="black" stroke-width="1.2"/>`,
      `<line x1="${x0}" x2="${x0}" y1="${y0}" y2="${y1}" stroke="black" stroke-width="1.2"/>`,
    ];
    for (const t of this.ticks(this.xExtent, 6, this.options.xLog)) {
      const xp = this.xPixel(t).toFixed(2);
      bits.push(
        `<line x1="${xp}" x2="${xp}" y1="${y0}" y2="${y0 + 5}" stroke="black"/>`,
        `<text x="${xp}" y="${y0 + 18}" text-anchor="middle" font-size="11">${formatTick(t)}</text>`,
      );
    }
    for (const t of this.ticks(this.yExtent)) {
      const yp = this.yPixel(t).toFixed(2);
      bits.push(
        `<line x1="${x0 - 5}" x2="${x0}" y1="${yp}" y2="${yp}" stroke="black"/>`,
        `<text x="${x0 - 8}" y="${Number(yp) + 4}" text-anchor="end" font-size="11">${formatTick(t)}</text>`,
      );
    }
    bits.push(
      `<text x="${(x0 + x1) / 2}" y="${this.height - 14}" text-anchor="middle" font-size="13">${this.options.xLabel}</text>`,
      `<text x="18" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 18 ${(y0 + y1) / 2})">${this.options.yLabel}</text>`,
    );
    if (this.options.title) {
      bits.push(
        `<text x="${(x0 + x1) / 2}" y="${top - 12}" text-anchor="middle" font-size="14" font-weight="bold">${this.options.title}</text>`,
      );
    }
    return bits.join("\n");
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      this.axes(),
      ...this.parts,
      "</svg>",
    ].join("\n");
  }
}

function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e4 || abs < 1e-3) return value.toExponential(0).replace("+", "");
  return Number(value.toPrecision(4)).toString();
}
