/**
 * Loading pretrained networks from a local directory.
 *
 * Weights live on disk in the standard layers-model layout: a
 * `model.json` with the topology and a weights manifest, next to one
 * or more binary shard files. Reading is done with plain fs so the
 * loader works on the pure JS backend; no native bindings required.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import * as tf from "@tensorflow/tfjs";
import { z } from "zod";

import { DataError } from "./networks.js";

const manifestSchema = z.object({
  modelTopology: z.record(z.unknown()),
  weightsManifest: z
    .array(
      z.object({
        paths: z.array(z.string()).min(1),
        weights: z.array(
          z.object({
            name: z.string(),
            shape: z.array(z.number()),
            dtype: z.string(),
          }),
        ),
      }),
    )
    .min(1),
});

function missingWeightsError(dir: string, detail: string): DataError {
  return new DataError(
    [
      `no usable pretrained weights at '${dir}': ${detail}`,
      "The directory must contain a model.json in the layers-model format",
      "together with the weight shard files it references. To obtain one,",
      "download the pretrained checkpoint for the architecture from your",
      "framework's model zoo and convert it, for example:",
      "    pip install tensorflowjs",
      "    tensorflowjs_converter --input_format keras <checkpoint>.h5 <dir>",
      "then point --models at the parent directory.",
    ].join("\n"),
  );
}

/** Read and instantiate the network stored under `dir`. Fatal if absent. */
export async function loadModelDir(dir: string): Promise<tf.LayersModel> {
  const manifestPath = path.join(dir, "model.json");
  if (!fs.existsSync(manifestPath)) {
    throw missingWeightsError(dir, "model.json not found");
  }

  let parsed: z.infer<typeof manifestSchema>;
  try {
    parsed = manifestSchema.parse(JSON.parse(fs.readFileSync(manifestPath, "utf8")));
  } catch (err) {
    throw missingWeightsError(dir, `model.json is not a layers-model manifest (${(err as Error).message})`);
  }

  const weightSpecs: tf.io.WeightsManifestEntry[] = [];
  const shards: Buffer[] = [];
  for (const group of parsed.weightsManifest) {
    weightSpecs.push(...(group.weights as tf.io.WeightsManifestEntry[]));
    for (const rel of group.paths) {
      const shardPath = path.join(dir, rel);
      if (!fs.existsSync(shardPath)) {
        throw missingWeightsError(dir, `weight shard '${rel}' is missing`);
      }
      shards.push(fs.readFileSync(shardPath));
    }
  }
  const weightData = new Uint8Array(Buffer.concat(shards)).buffer;

  try {
    return await tf.loadLayersModel(
      tf.io.fromMemory({
        modelTopology: parsed.modelTopology,
        weightSpecs,
        weightData,
      }),
    );
  } catch (err) {
    throw missingWeightsError(dir, `weights failed to load (${(err as Error).message})`);
  }
}

/**
 * A view of `model` that stops at the named layer. Layers are shared
 * with the original model, so training either one updates both.
 */
export function truncateAtLayer(model: tf.LayersModel, layerName: string): tf.LayersModel {
  let layer: tf.layers.Layer;
  try {
    layer = model.getLayer(layerName);
  } catch {
    const names = model.layers.map((l) => l.name).join(", ");
    throw new DataError(`model has no layer '${layerName}' (layers: ${names})`);
  }
  return tf.model({ inputs: model.inputs, outputs: layer.output as tf.SymbolicTensor });
}
