import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

import { SchemaMismatch } from "./errors.js";

/** Column contracts of the batch outputs this package consumes. */
export const TRACE_COLUMNS = [
  "t_s", "state", "x_m", "d_rg_m", "T_d_bits", "T_r_bits",
  "R_e_bps", "load_bps", "offload_bps", "passthrough_bps",
] as const;

export const ACM_COLUMNS = [
  "q", "modulation", "code_rate", "bits_per_symbol",
  "spectral_efficiency", "threshold_m",
] as const;

export const CURVE_COLUMNS = ["distance_m", "capacity_bps_hz"] as const;

export interface CsvTable {
  fields: string[];
  rows: Record<string, string>[];
}

export function loadCsv(path: string, required: readonly string[]): CsvTable {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of required) {
    if (!fields.includes(column)) {
      throw new SchemaMismatch(column, path);
    }
  }
  return { fields, rows: parsed.data };
}

export function numericColumn(table: CsvTable, column: string, source: string): number[] {
  if (!table.fields.includes(column)) {
    throw new SchemaMismatch(column, source);
  }
  return table.rows.map((row) => Number(row[column]));
}

const paretoRecord = z.object({
  d1_m: z.number(),
  d2_m: z.number(),
  alpha: z.number(),
  beta: z.number(),
  delivered_bits: z.number(),
  delay_s: z.number(),
});

export type ParetoRecord = z.infer<typeof paretoRecord>;

export function loadParetoJson(path: string): ParetoRecord[] {
  const data: unknown = JSON.parse(readFileSync(path, "utf8"));
  const result = z.array(z.record(z.string(), z.unknown())).safeParse(data);
  if (!result.success) {
    throw new SchemaMismatch("(array of objects)", path);
  }
  return result.data.map((entry) => {
    const rec = paretoRecord.safeParse(entry);
    if (!rec.success) {
      const missing = rec.error.issues[0]?.path.join(".") ?? "(unknown)";
      throw new SchemaMismatch(String(missing), path);
    }
    return rec.data;
  });
}

const manifest = z.object({
  preset: z.string().nullable().optional(),
  seed: z.number().optional(),
  version: z.string().optional(),
});

export interface Provenance {
  preset?: string | null;
  seed?: number;
  version?: string;
}

export function loadManifest(path: string): Provenance {
  const data: unknown = JSON.parse(readFileSync(path, "utf8"));
  const parsed = manifest.safeParse(data);
  return parsed.success ? parsed.data : {};
}
