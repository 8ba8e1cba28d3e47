/** Strict reader for the harness results CSV. */

import { readFileSync } from "node:fs";

export const RESULT_HEADER =
  "scenario,sweep_name,sweep_value,trial,method,snr_db,se_bits," +
  "bound_rhs,pattern_error_rate";

export interface ResultRow {
  scenario: string;
  sweepName: string;
  sweepValue: number;
  trial: number;
  method: string;
  snrDb: number;
  seBits: number;
  boundRhs: number | null;
  patternErrorRate: number | null;
}

export const COLUMNS = RESULT_HEADER.split(",");

function num(field: string, raw: string, line: number): number {
  const v = Number(raw);
  if (raw === "" || Number.isNaN(v)) {
    throw new Error(`line ${line}: bad numeric value for ${field}: '${raw}'`);
  }
  return v;
}

export function parseResults(path: string): ResultRow[] {
  const text = readFileSync(path, "utf8");
  const lines = text.split(/\r?\n/);
  if (lines[0] !== RESULT_HEADER) {
    throw new Error(`${path}: unexpected header '${lines[0]}'`);
  }
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const line = lines[i];
    if (line === "") continue;
    const parts = line.split(",");
    if (parts.length !== COLUMNS.length) {
      throw new Error(`${path}: line ${i + 1}: expected ${COLUMNS.length} fields`);
    }
    rows.push({
      scenario: parts[0],
      sweepName: parts[1],
      sweepValue: num("sweep_value", parts[2], i + 1),
      trial: num("trial", parts[3], i + 1),
      method: parts[4],
      snrDb: num("snr_db", parts[5], i + 1),
      seBits: num("se_bits", parts[6], i + 1),
      boundRhs: parts[7] === "" ? null : num("bound_rhs", parts[7], i + 1),
      patternErrorRate:
        parts[8] === "" ? null : num("pattern_error_rate", parts[8], i + 1),
    });
  }
  if (rows.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  return rows;
}

export function requireColumn(name: string): void {
  if (!COLUMNS.includes(name)) {
    throw new Error(`unknown column '${name}' (schema: ${RESULT_HEADER})`);
  }
}
