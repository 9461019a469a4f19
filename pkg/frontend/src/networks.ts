/**
 * Catalogue of supported convolutional networks.
 *
 * Each entry names the layer whose activations serve as the image
 * descriptor, the width of that descriptor, and the square input size
 * the network expects. Feature CSV headers are derived from these
 * fields, so the table is part of the output contract: changing a row
 * changes what downstream readers see.
 */

export interface NetworkSpec {
  /** Architecture name, also the default weights directory name. */
  readonly name: string;
  /** Layer whose output is taken as the feature vector. */
  readonly featureLayer: string;
  /** Length of the feature vector that layer produces. */
  readonly featureDim: number;
  /** Side length of the square RGB input, in pixels. */
  readonly inputSize: number;
}

export const NETWORKS: readonly NetworkSpec[] = [
  { name: "alexnet", featureLayer: "fc7", featureDim: 4096, inputSize: 227 },
  { name: "googlenet", featureLayer: "pool5-7x7_s1", featureDim: 1024, inputSize: 224 },
  { name: "resnet18", featureLayer: "pool5", featureDim: 512, inputSize: 224 },
  { name: "resnet50", featureLayer: "avg_pool", featureDim: 2048, inputSize: 224 },
];

/**
 * Named bundles of networks that have worked well together on the two
 * dataset families this tool is used with. A preset run produces one
 * feature CSV per member network plus a manifest tying them together.
 */
export const PRESETS: Readonly<Record<string, readonly string[]>> = {
  mednode: ["alexnet", "googlenet", "resnet50"],
  "skin-lesion": ["resnet50", "resnet18"],
};

export function findNetwork(name: string): NetworkSpec {
  const spec = NETWORKS.find((n) => n.name === name);
  if (!spec) {
    const known = NETWORKS.map((n) => n.name).join(", ");
    throw new ConfigError(`unknown network '${name}' (choose from: ${known})`);
  }
  return spec;
}

/** Column set name used in feature CSV headers, e.g. "resnet50-avg_pool". */
export function featureSetName(spec: NetworkSpec): string {
  return `${spec.name}-${spec.featureLayer}`;
}

/** Bad command line or programmatic configuration. */
export class ConfigError extends Error {}

/** Unusable input data (images, labels, weights). */
export class DataError extends Error {}
