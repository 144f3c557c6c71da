/** Minimal deterministic SVG chart primitives (no DOM required). */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const SIZE = { width: 720, height: 480 };
export const MARGINS: Margins = { top: 40, right: 24, bottom: 72, left: 84 };

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((value: number) => r0 + ((value - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

export function ticks(domain: [number, number], count = 6): number[] {
  const [lo, hi] = domain;
  const rawStep = (hi - lo) / Math.max(count, 1);
  const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const candidates = [1, 2, 5, 10].map((m) => m * power);
  const step = candidates.find((c) => (hi - lo) / c <= count) ?? candidates[3];
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export function formatTick(value: number): string {
  if (value === 0) return "0";
  const abs = Math.abs(value);
  if (abs >= 1e9) return `${Number((value / 1e9).toPrecision(4))}e9`;
  if (abs >= 1e6) return `${Number((value / 1e6).toPrecision(4))}e6`;
  if (abs >= 1e4) return `${Number((value / 1e3).toPrecision(4))}e3`;
  return `${Number(value.toPrecision(4))}`;
}

const esc = (text: string) =>
  text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class SvgChart {
  private parts: string[] = [];
  readonly x: Scale;
  readonly y: Scale;

  constructor(xDomain: [number, number], yDomain: [number, number]) {
    this.x = linearScale(xDomain, [MARGINS.left, SIZE.width - MARGINS.right]);
    this.y = linearScale(yDomain, [SIZE.height - MARGINS.bottom, MARGINS.top]);
  }

  axes(xLabel: string, yLabel: string): void {
    const x0 = MARGINS.left;
    const x1 = SIZE.width - MARGINS.right;
    const y0 = SIZE.height - MARGINS.bottom;
    const y1 = MARGINS.top;
    this.parts.push(
      `<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333"/>`,
      `<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333"/>`,
    );
    for (const t of ticks(this.x.domain)) {
      const px = this.x(t);
      this.parts.push(
        `<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="#333"/>`,
        `<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="11">${formatTick(t)}</text>`,
      );
    }
    for (const t of ticks(this.y.domain)) {
      const py = this.y(t);
      this.parts.push(
        `<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="#333"/>`,
        `<text x="${x0 - 8}" y="${py + 4}" text-anchor="end" font-size="11">${formatTick(t)}</text>`,
      );
    }
    const cx = (x0 + x1) / 2;
    this.parts.push(
      `<text x="${cx}" y="${y0 + 44}" text-anchor="middle" font-size="13">${esc(xLabel)}</text>`,
      `<text transform="rotate(-90 18 ${(y0 + y1) / 2})" x="18" y="${(y0 + y1) / 2}" ` +
        `text-anchor="middle" font-size="13">${esc(yLabel)}</text>`,
    );
  }

  title(text: string): void {
    this.parts.push(
      `<text x="${SIZE.width / 2}" y="22" text-anchor="middle" font-size="15">${esc(text)}</text>`,
    );
  }

  polyline(xs: number[], ys: number[], stroke = "#1f6fb4"): void {
    const pts = xs.map((v, i) => `${this.x(v).toFixed(2)},${this.y(ys[i]).toFixed(2)}`);
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="1.8" points="${pts.join(" ")}"/>`,
    );
  }

  /** Horizontal run at each level with vertical connectors (step plot). */
  steps(segments: Array<{ x0: number; x1: number; y: number }>, stroke = "#1f6fb4"): void {
    let d = "";
    for (const seg of segments) {
      const px0 = this.x(seg.x0).toFixed(2);
      const px1 = this.x(seg.x1).toFixed(2);
      const py = this.y(seg.y).toFixed(2);
      d += d === "" ? `M ${px0} ${py}` : ` L ${px0} ${py}`;
      d += ` L ${px1} ${py}`;
    }
    this.parts.push(
      `<path fill="none" stroke="${stroke}" stroke-width="1.8" d="${d}" class="step"/>`,
    );
  }

  scatter(xs: number[], ys: number[], fill = "#b43a1f"): void {
    for (let i = 0; i < xs.length; i++) {
      this.parts.push(
        `<circle cx="${this.x(xs[i]).toFixed(2)}" cy="${this.y(ys[i]).toFixed(2)}" ` +
          `r="4" fill="${fill}" class="pt"/>`,
      );
    }
  }

  footer(text: string): void {
    this.parts.push(
      `<text x="${SIZE.width - MARGINS.right}" y="${SIZE.height - 8}" ` +
        `text-anchor="end" font-size="10" fill="#666" class="footer">${esc(text)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${SIZE.width}" ` +
      `height="${SIZE.height}" viewBox="0 0 ${SIZE.width} ${SIZE.height}">\n` +
      `<rect width="${SIZE.width}" height="${SIZE.height}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}
