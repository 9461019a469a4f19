export { ConfigError, DataError, featureSetName, findNetwork, NETWORKS, PRESETS } from "./networks.js";
export type { NetworkSpec } from "./networks.js";
export { decodePpm } from "./ppm.js";
export type { RgbImage } from "./ppm.js";
export { toNetworkInput } from "./resize.js";
export { loadModelDir, truncateAtLayer } from "./model.js";
export { extractFeatures, scanImages } from "./features.js";
export type { ExcludedImage, ExtractionResult, ExtractOptions, ImageEntry } from "./features.js";
export { fineTune } from "./finetune.js";
export type { FineTuneOptions, FineTuneOutcome } from "./finetune.js";
export { formatFeatureFile, readLabelsCsv, writeFeatureFile } from "./featurefile.js";
export type { FeatureRow } from "./featurefile.js";
export { main } from "./cli.js";
