/**
 * Feature CSV emission, in the exact shape the classifier package
 * reads back: a `<set-name>,<dims>` header line, then one
 * `<image-id>,<label>,<v1>,...,<vdims>` row per image. Label tokens
 * are "melanoma" and "not-melanoma".
 */

import * as fs from "node:fs";

import { ConfigError, DataError } from "./networks.js";

export interface FeatureRow {
  readonly id: string;
  /** +1 melanoma, -1 not. */
  readonly label: number;
  readonly values: Float32Array | readonly number[];
}

export function formatFeatureFile(setName: string, dims: number, rows: readonly FeatureRow[]): string {
  if (setName.includes(",")) throw new ConfigError(`feature set name may not contain commas: '${setName}'`);
  const out: string[] = [`${setName},${dims}`];
  // Sort so reruns over the same directory produce identical bytes
  // regardless of readdir order.
  const sorted = [...rows].sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
  for (const row of sorted) {
    if (row.values.length !== dims) {
      throw new DataError(`row '${row.id}' has ${row.values.length} values, expected ${dims}`);
    }
    const token = row.label === 1 ? "melanoma" : "not-melanoma";
    const cells = Array.from(row.values, (v) => String(v)).join(",");
    out.push(`${row.id},${token},${cells}`);
  }
  return out.join("\n") + "\n";
}

export function writeFeatureFile(path: string, setName: string, dims: number, rows: readonly FeatureRow[]): void {
  fs.writeFileSync(path, formatFeatureFile(setName, dims, rows), "utf8");
}

const LABEL_TOKENS: Readonly<Record<string, number>> = {
  melanoma: 1,
  "not-melanoma": -1,
  "1": 1,
  "+1": 1,
  "-1": -1,
};

/**
 * Read an `image_id,label` CSV (header line optional). Returns a map
 * from image id to +1/-1.
 */
export function readLabelsCsv(path: string): Map<string, number> {
  let text: string;
  try {
    text = fs.readFileSync(path, "utf8");
  } catch (err) {
    throw new DataError(`cannot read labels file ${path}: ${(err as Error).message}`);
  }
  const labels = new Map<string, number>();
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i += 1) {
    const line = lines[i]!;
    if (!line.trim()) continue;
    const parts = line.split(",").map((p) => p.trim());
    if (i === 0 && parts[0] === "image_id" && parts[1] === "label") continue;
    if (parts.length !== 2) throw new DataError(`${path} line ${i + 1}: expected 'image_id,label'`);
    const [id, token] = parts as [string, string];
    if (labels.has(id)) throw new DataError(`${path} line ${i + 1}: duplicate image id '${id}'`);
    const label = LABEL_TOKENS[token];
    if (label === undefined) throw new DataError(`${path} line ${i + 1}: unknown label '${token}'`);
    labels.set(id, label);
  }
  if (labels.size === 0) throw new DataError(`${path}: no label rows`);
  return labels;
}
