import { mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { loadManifest } from "../src/data.js";
import { SchemaMismatch } from "../src/errors.js";
import { renderFigure } from "../src/figures.js";

const fixtures = join(__dirname, "fixtures");
const outDir = mkdtempSync(join(tmpdir(), "figures-"));

function renderToFile(name: string, spec: Parameters<typeof renderFigure>[0]): string {
  const svg = renderFigure(spec);
  const path = join(outDir, name);
  writeFileSync(path, svg);
  return svg;
}

describe("staircase", () => {
  it("draws one step per positive mode plus a zero tail", () => {
    const svg = renderToFile("staircase.svg", {
      kind: "staircase",
      input: join(fixtures, "acm_table.csv"),
    });
    expect(statSync(join(outDir, "staircase.svg")).size).toBeGreaterThan(0);
    const path = svg.match(/<path[^>]*d="([^"]+)"[^>]*class="step"/);
    expect(path).not.toBeNull();
    // 7 mode runs + zero tail = 8 horizontal segments.
    const horizontalRuns = (path![1].match(/L/g) ?? []).length;
    expect(horizontalRuns).toBeGreaterThanOrEqual(8);
    expect(svg).toContain("spectral efficiency");
  });
});

describe("timeseries", () => {
  it("renders the delivered-data column as a monotone polyline", () => {
    const svg = renderToFile("delivered.svg", {
      kind: "timeseries",
      input: join(fixtures, "trace.csv"),
      yColumn: "T_r_bits",
    });
    const match = svg.match(/points="([^"]+)"/);
    expect(match).not.toBeNull();
    const ys = match![1].split(" ").map((p) => Number(p.split(",")[1]));
    // SVG y grows downward, so delivered-data must be non-increasing.
    for (let i = 1; i < ys.length; i++) {
      expect(ys[i]).toBeLessThanOrEqual(ys[i - 1] + 1e-9);
    }
  });

  it("renders effective rate and buffer occupancy", () => {
    for (const column of ["R_e_bps", "T_d_bits"]) {
      const svg = renderToFile(`${column}.svg`, {
        kind: "timeseries",
        input: join(fixtures, "trace.csv"),
        yColumn: column,
      });
      expect(svg).toContain(column);
      expect(svg.length).toBeGreaterThan(500);
    }
  });

  it("renders a capacity curve via explicit columns", () => {
    const svg = renderToFile("curve.svg", {
      kind: "timeseries",
      input: join(fixtures, "link_curve.csv"),
      xColumn: "distance_m",
      yColumn: "capacity_bps_hz",
    });
    expect(svg).toContain("capacity_bps_hz");
  });

  it("fails with SchemaMismatch naming a renamed column", () => {
    expect(() =>
      renderFigure({
        kind: "timeseries",
        input: join(fixtures, "trace_renamed.csv"),
        yColumn: "T_r_bits",
      }),
    ).toThrowError(SchemaMismatch);
    try {
      renderFigure({
        kind: "timeseries",
        input: join(fixtures, "trace_renamed.csv"),
        yColumn: "T_r_bits",
      });
    } catch (err) {
      expect((err as SchemaMismatch).column).toBe("T_r_bits");
    }
  });
});

describe("pareto", () => {
  it("scatters delivered (up) against delay (right)", () => {
    const svg = renderToFile("pareto.svg", {
      kind: "pareto",
      input: join(fixtures, "pareto.json"),
    });
    const records = JSON.parse(
      readFileSync(join(fixtures, "pareto.json"), "utf8"),
    ) as unknown[];
    const circles = (svg.match(/class="pt"/g) ?? []).length;
    expect(circles).toBe(records.length);
    expect(svg).toContain("delivered (bits)");
    expect(svg).toContain("delay (s)");
  });

  it("fails with SchemaMismatch on a renamed field", () => {
    expect(() =>
      renderFigure({ kind: "pareto", input: join(fixtures, "pareto_renamed.json") }),
    ).toThrowError(/delivered_bits/);
  });
});

describe("determinism and provenance", () => {
  it("re-rendering produces identical bytes", () => {
    const spec = {
      kind: "timeseries" as const,
      input: join(fixtures, "trace.csv"),
      yColumn: "T_d_bits",
    };
    expect(renderFigure(spec)).toBe(renderFigure(spec));
  });

  it("stamps the footer from the run manifest", () => {
    const svg = renderFigure({
      kind: "timeseries",
      input: join(fixtures, "trace.csv"),
      provenance: loadManifest(join(fixtures, "manifest.json")),
    });
    const footer = svg.match(/class="footer">([^<]*)</);
    expect(footer).not.toBeNull();
    expect(footer![1]).toContain("ferrylink");
  });
});
