import * as fs from "node:fs";

import * as tf from "@tensorflow/tfjs";

import { scanImages } from "./features.js";
import { DataError, type NetworkSpec } from "./networks.js";
import { decodePpm } from "./ppm.js";
import { toNetworkInput } from "./resize.js";

export interface FineTuneOptions {
  readonly epochs?: number;
  readonly batchSize?: number;
  readonly learningRate?: number;
  readonly momentum?: number;
}

export interface FineTuneOutcome {
  readonly epochs: number;
  readonly batchSize: number;
  readonly learningRate: number;
  /** Training loss after the final epoch. */
  readonly finalLoss: number;
  readonly imagesUsed: number;
}

/**
 * Adapt a pretrained network to the melanoma task before extraction.
 *
 * The last two layers (the original classification head) are replaced
 * with a fresh two-way dense layer plus softmax, and the whole stack
 * is trained with momentum SGD. Layers are shared with the passed-in
 * model, so after this returns, feature extraction from that model
 * sees the adapted weights.
 *
 * Training order is the sorted image id order with shuffling off and
 * seeded head initialisation, which keeps reruns on the same inputs
 * reproducible up to floating point in the backend. Unreadable images
 * are skipped with a warning, mirroring extraction.
 */
export async function fineTune(
  model: tf.LayersModel,
  spec: NetworkSpec,
  imagesDir: string,
  labels: ReadonlyMap<string, number>,
  opts: FineTuneOptions = {},
  warn: (message: string) => void = (m) => console.warn(m),
): Promise<FineTuneOutcome> {
  const epochs = opts.epochs ?? 10;
  const batchSize = opts.batchSize ?? 5;
  const learningRate = opts.learningRate ?? 3e-4;
  const momentum = opts.momentum ?? 0.9;

  if (model.layers.length < 4) {
    throw new DataError(
      `model is too shallow to fine-tune: need at least 4 layers, found ${model.layers.length}`,
    );
  }

  const inputs: tf.Tensor3D[] = [];
  const targets: number[] = [];
  for (const entry of scanImages(imagesDir).entries) {
    let image;
    try {
      image = decodePpm(fs.readFileSync(entry.path));
    } catch (err) {
      warn(`warning: skipped ${entry.path}: ${(err as Error).message}`);
      continue;
    }
    const label = labels.get(entry.id);
    if (label === undefined) {
      throw new DataError(`no label for image '${entry.id}' (${entry.path})`);
    }
    inputs.push(toNetworkInput(image, spec.inputSize));
    targets.push(label === 1 ? 1 : 0);
  }
  if (inputs.length === 0) throw new DataError(`no decodable images in '${imagesDir}'`);

  const cut = model.layers[model.layers.length - 3]!.output as tf.SymbolicTensor;
  const head = tf.layers
    .dense({ units: 2, name: "refit_fc", kernelInitializer: tf.initializers.glorotUniform({ seed: 7 }) })
    .apply(cut) as tf.SymbolicTensor;
  const probs = tf.layers.activation({ activation: "softmax", name: "refit_softmax" }).apply(head) as tf.SymbolicTensor;
  const trainable = tf.model({ inputs: model.inputs, outputs: probs });
  trainable.compile({
    optimizer: tf.train.momentum(learningRate, momentum),
    loss: "categoricalCrossentropy",
  });

  const x = tf.stack(inputs);
  inputs.forEach((t) => t.dispose());
  const y = tf.oneHot(tf.tensor1d(targets, "int32"), 2);
  try {
    const history = await trainable.fit(x, y, { epochs, batchSize, shuffle: false, verbose: 0 });
    const losses = history.history["loss"] as number[];
    return {
      epochs,
      batchSize,
      learningRate,
      finalLoss: losses[losses.length - 1]!,
      imagesUsed: targets.length,
    };
  } finally {
    x.dispose();
    y.dispose();
  }
}
