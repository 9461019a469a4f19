import * as fs from "node:fs";
import * as path from "node:path";

import * as tf from "@tensorflow/tfjs";

import { type FeatureRow } from "./featurefile.js";
import { truncateAtLayer } from "./model.js";
import { DataError, type NetworkSpec } from "./networks.js";
import { decodePpm, type RgbImage } from "./ppm.js";
import { toNetworkInput } from "./resize.js";

export interface ImageEntry {
  readonly id: string;
  readonly path: string;
}

export interface ExcludedImage {
  readonly path: string;
  readonly reason: string;
}

export interface ExtractionResult {
  readonly rows: readonly FeatureRow[];
  /** Images that were skipped rather than embedded, with the cause. */
  readonly excluded: readonly ExcludedImage[];
}

export interface ExtractOptions {
  /** Receives one line per skipped or deduplicated image. */
  readonly warn?: (message: string) => void;
  /** Images per forward pass; bounds peak memory. */
  readonly batchSize?: number;
}

/**
 * List the .ppm files under `dir` as (id, path) pairs, id being the
 * file name without its extension. When several files collapse to the
 * same id (say `a.ppm` next to `a.PPM`), only the lexicographically
 * first path is kept; an image must not contribute two rows.
 */
export function scanImages(dir: string): { entries: ImageEntry[]; duplicates: string[] } {
  let names: string[];
  try {
    names = fs.readdirSync(dir);
  } catch (err) {
    throw new DataError(`cannot list image directory ${dir}: ${(err as Error).message}`);
  }
  const ppm = names.filter((n) => n.toLowerCase().endsWith(".ppm")).sort();
  const entries: ImageEntry[] = [];
  const duplicates: string[] = [];
  const seen = new Set<string>();
  for (const name of ppm) {
    const id = name.slice(0, name.length - 4);
    if (seen.has(id)) {
      duplicates.push(path.join(dir, name));
      continue;
    }
    seen.add(id);
    entries.push({ id, path: path.join(dir, name) });
  }
  if (entries.length === 0) throw new DataError(`no .ppm images in '${dir}'`);
  return { entries, duplicates };
}

/**
 * Run every readable image in `imagesDir` through the network and
 * collect one feature row per image.
 *
 * Unreadable files are skipped with a warning and reported in the
 * exclusion list; missing labels and shape mismatches are fatal. The
 * flattened activation width must equal the dimensionality the
 * network catalogue promises, since that number is written into the
 * CSV header downstream readers trust.
 */
export async function extractFeatures(
  imagesDir: string,
  spec: NetworkSpec,
  model: tf.LayersModel,
  labels: ReadonlyMap<string, number>,
  opts: ExtractOptions = {},
): Promise<ExtractionResult> {
  const warn = opts.warn ?? ((m) => console.warn(m));
  const batchSize = opts.batchSize ?? 8;

  const { entries, duplicates } = scanImages(imagesDir);
  const excluded: ExcludedImage[] = [];
  for (const dup of duplicates) {
    warn(`warning: skipped ${dup}: duplicate of an image already read`);
    excluded.push({ path: dup, reason: "duplicate image id" });
  }

  const usable: { entry: ImageEntry; image: RgbImage }[] = [];
  for (const entry of entries) {
    let image: RgbImage;
    try {
      image = decodePpm(fs.readFileSync(entry.path));
    } catch (err) {
      const reason = (err as Error).message;
      warn(`warning: skipped ${entry.path}: ${reason}`);
      excluded.push({ path: entry.path, reason });
      continue;
    }
    const label = labels.get(entry.id);
    if (label === undefined) {
      throw new DataError(`no label for image '${entry.id}' (${entry.path})`);
    }
    usable.push({ entry, image });
  }
  if (usable.length === 0) {
    throw new DataError(`no decodable images in '${imagesDir}'`);
  }

  const featureModel = truncateAtLayer(model, spec.featureLayer);
  const rows: FeatureRow[] = [];
  for (let start = 0; start < usable.length; start += batchSize) {
    const chunk = usable.slice(start, start + batchSize);
    const flat = tf.tidy(() => {
      const batch = tf.stack(chunk.map(({ image }) => toNetworkInput(image, spec.inputSize)));
      const activations = featureModel.predict(batch) as tf.Tensor;
      return activations.reshape([chunk.length, -1]);
    });
    const width = flat.shape[1] ?? 0;
    if (width !== spec.featureDim) {
      flat.dispose();
      throw new DataError(
        `layer '${spec.featureLayer}' produced ${width} values per image, ` +
          `but ${spec.name} features are ${spec.featureDim} wide; wrong weights?`,
      );
    }
    const data = flat.dataSync() as Float32Array;
    flat.dispose();
    chunk.forEach(({ entry }, i) => {
      rows.push({
        id: entry.id,
        label: labels.get(entry.id)!,
        values: data.slice(i * width, (i + 1) * width),
      });
    });
  }
  return { rows, excluded };
}
