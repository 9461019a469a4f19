#!/usr/bin/env node
/**
 * Command line feature extractor.
 *
 * Turns a directory of PPM images into feature CSVs that the
 * classifier package consumes directly, either for one named network
 * or for a whole preset (which also emits a dataset manifest).
 * Exit codes: 0 success, 2 unusable data, 3 bad invocation.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { extractFeatures } from "./features.js";
import { writeFeatureFile } from "./featurefile.js";
import { readLabelsCsv } from "./featurefile.js";
import { fineTune } from "./finetune.js";
import { loadModelDir } from "./model.js";
import { ConfigError, DataError, featureSetName, findNetwork, NETWORKS, PRESETS } from "./networks.js";

const USAGE = `usage: extract --images <dir> --labels <csv>
               (--net <name> --out <file.csv> | --preset <name> --out-dir <dir>)
               [--models <dir>] [--dataset <name>]
               [--finetune] [--epochs N] [--batch N] [--lr X]

networks: ${NETWORKS.map((n) => n.name).join(", ")}
presets:  ${Object.keys(PRESETS).join(", ")}

Weights are looked up under <models>/<network>/model.json. --finetune
retrains the network on the labelled images before extraction
(defaults: epochs 10, batch 5, lr 0.0003, momentum SGD).`;

interface Io {
  out: (line: string) => void;
  err: (line: string) => void;
}

function parsePositiveInt(raw: string, flag: string): number {
  const value = Number(raw);
  if (!Number.isInteger(value) || value < 1) {
    throw new ConfigError(`${flag} must be a positive integer, got '${raw}'`);
  }
  return value;
}

function parsePositiveFloat(raw: string, flag: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value) || value <= 0) {
    throw new ConfigError(`${flag} must be a positive number, got '${raw}'`);
  }
  return value;
}

async function run(argv: string[], io: Io): Promise<number> {
  let values;
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        images: { type: "string" },
        labels: { type: "string" },
        net: { type: "string" },
        out: { type: "string" },
        preset: { type: "string" },
        "out-dir": { type: "string" },
        models: { type: "string", default: "models" },
        dataset: { type: "string", default: "dataset" },
        finetune: { type: "boolean", default: false },
        epochs: { type: "string", default: "10" },
        batch: { type: "string", default: "5" },
        lr: { type: "string", default: "0.0003" },
        help: { type: "boolean", default: false },
      },
      allowPositionals: false,
    }));
  } catch (err) {
    throw new ConfigError((err as Error).message);
  }

  if (values.help) {
    io.out(USAGE);
    return 0;
  }
  if (!values.images) throw new ConfigError("--images is required");
  if (!values.labels) throw new ConfigError("--labels is required (every output row carries a label)");
  const single = values.net !== undefined;
  const preset = values.preset !== undefined;
  if (single === preset) throw new ConfigError("give exactly one of --net or --preset");
  if (single && !values.out) throw new ConfigError("--out is required with --net");
  if (preset && !values["out-dir"]) throw new ConfigError("--out-dir is required with --preset");

  const epochs = parsePositiveInt(values.epochs!, "--epochs");
  const batchSize = parsePositiveInt(values.batch!, "--batch");
  const learningRate = parsePositiveFloat(values.lr!, "--lr");

  let netNames: readonly string[];
  if (single) {
    netNames = [values.net!];
  } else {
    const members = PRESETS[values.preset!];
    if (!members) {
      throw new ConfigError(`unknown preset '${values.preset}' (choose from: ${Object.keys(PRESETS).join(", ")})`);
    }
    netNames = members;
    fs.mkdirSync(values["out-dir"]!, { recursive: true });
  }

  const labels = readLabelsCsv(values.labels!);
  const warn = (m: string) => io.err(m);
  const manifestFeatures: { path: string; dims: number }[] = [];

  for (const name of netNames) {
    const spec = findNetwork(name);
    const modelDir = path.join(values.models!, spec.name);
    const model = await loadModelDir(modelDir);

    if (values.finetune) {
      const outcome = await fineTune(
        model,
        spec,
        values.images!,
        labels,
        { epochs, batchSize, learningRate },
        warn,
      );
      io.out(
        `fine-tuned ${spec.name} on ${outcome.imagesUsed} images ` +
          `(${outcome.epochs} epochs, batch ${outcome.batchSize}, lr ${outcome.learningRate}, ` +
          `final loss ${outcome.finalLoss.toFixed(4)})`,
      );
    }

    const { rows, excluded } = await extractFeatures(values.images!, spec, model, labels, { warn });
    const outPath = single ? values.out! : path.join(values["out-dir"]!, `${spec.name}.csv`);
    try {
      writeFeatureFile(outPath, featureSetName(spec), spec.featureDim, rows);
    } catch (err) {
      if (err instanceof DataError || err instanceof ConfigError) throw err;
      throw new DataError(`cannot write ${outPath}: ${(err as Error).message}`);
    }
    io.out(`${spec.name}: ${rows.length} images -> ${outPath} (${spec.featureDim} dims)`);
    if (excluded.length > 0) {
      io.out(`${spec.name}: excluded ${excluded.length} image${excluded.length === 1 ? "" : "s"}`);
    }
    manifestFeatures.push({ path: `${spec.name}.csv`, dims: spec.featureDim });
    model.dispose();
  }

  if (preset) {
    const manifestPath = path.join(values["out-dir"]!, "manifest.json");
    const manifest = { dataset: values.dataset, features: manifestFeatures };
    try {
      fs.writeFileSync(manifestPath, JSON.stringify(manifest, null, 2) + "\n", "utf8");
    } catch (err) {
      throw new DataError(`cannot write ${manifestPath}: ${(err as Error).message}`);
    }
    io.out(`wrote manifest ${manifestPath}`);
  }
  return 0;
}

export async function main(
  argv: string[] = process.argv.slice(2),
  io: Io = { out: (l) => console.log(l), err: (l) => console.error(l) },
): Promise<number> {
  try {
    return await run(argv, io);
  } catch (err) {
    if (err instanceof DataError) {
      io.err(`data error: ${err.message}`);
      return 2;
    }
    if (err instanceof ConfigError) {
      io.err(`configuration error: ${err.message}`);
      io.err(USAGE);
      return 3;
    }
    throw err;
  }
}

const invokedDirectly =
  typeof process.argv[1] === "string" && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main().then((code) => {
    process.exitCode = code;
  });
}
