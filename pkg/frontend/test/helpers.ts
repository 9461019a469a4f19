import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import * as tf from "@tensorflow/tfjs";

import type { NetworkSpec } from "../src/networks.js";

/** Small network contract used by unit tests; fast to build and run. */
export const TINY: NetworkSpec = { name: "tinynet", featureLayer: "feats", featureDim: 6, inputSize: 8 };

/**
 * A stand-in for a pretrained network that honours a catalogue row:
 * right input size, a feature layer with the right name and width,
 * and a two-layer classification head after it. Pooling keeps the
 * dense kernels small even at 227x227 inputs.
 */
export function buildStubNetwork(spec: NetworkSpec): tf.LayersModel {
  const pool = Math.min(56, spec.inputSize);
  const model = tf.sequential();
  model.add(
    tf.layers.averagePooling2d({
      inputShape: [spec.inputSize, spec.inputSize, 3],
      poolSize: pool,
      strides: pool,
      name: "squeeze",
    }),
  );
  model.add(tf.layers.flatten({ name: "stretch" }));
  model.add(
    tf.layers.dense({
      units: spec.featureDim,
      activation: "relu",
      name: spec.featureLayer,
      kernelInitializer: tf.initializers.glorotUniform({ seed: 11 }),
    }),
  );
  model.add(
    tf.layers.dense({
      units: 2,
      name: "head_fc",
      kernelInitializer: tf.initializers.glorotUniform({ seed: 12 }),
    }),
  );
  model.add(tf.layers.activation({ activation: "softmax", name: "head_softmax" }));
  return model;
}

/** Persist a model in the on-disk layout loadModelDir expects. */
export async function saveModelDir(model: tf.LayersModel, dir: string): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      const weightData = tf.io.CompositeArrayBuffer.join(artifacts.weightData);
      const manifest = {
        format: "layers-model",
        modelTopology: artifacts.modelTopology,
        weightsManifest: [{ paths: ["weights.bin"], weights: artifacts.weightSpecs }],
      };
      fs.writeFileSync(path.join(dir, "model.json"), JSON.stringify(manifest));
      fs.writeFileSync(path.join(dir, "weights.bin"), Buffer.from(weightData));
      return { modelArtifactsInfo: { dateSaved: new Date(), modelTopologyType: "JSON" } };
    }),
  );
}

export function tempDir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

export function writePpm(file: string, width: number, height: number, pixels: Uint8Array): void {
  if (pixels.length !== 3 * width * height) throw new Error("pixel buffer size mismatch");
  const header = Buffer.from(`P6\n${width} ${height}\n255\n`, "ascii");
  fs.writeFileSync(file, Buffer.concat([header, Buffer.from(pixels)]));
}

/** Deterministic pseudo-random pixel noise (mulberry32). */
export function noisePixels(width: number, height: number, seed: number): Uint8Array {
  let state = seed >>> 0;
  const next = () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
  const out = new Uint8Array(3 * width * height);
  for (let i = 0; i < out.length; i += 1) out[i] = Math.floor(next() * 256);
  return out;
}

export function writeLabelsCsv(file: string, labels: Record<string, string>): void {
  const lines = ["image_id,label"];
  for (const [id, token] of Object.entries(labels)) lines.push(`${id},${token}`);
  fs.writeFileSync(file, lines.join("\n") + "\n", "utf8");
}
