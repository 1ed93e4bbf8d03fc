/**
 * CLI: train the toy model on a corpus file and write the loss trace.
 *
 *   node dist/src/main.js <corpus.jsonl> [--steps N] [--seed S]
 *       [--lr X] [--temperature T] [--out trace.jsonl]
 */

import { writeFileSync } from "node:fs";

import { loadCorpus } from "./corpus.js";
import { DEFAULT_TRAIN_CONFIG, smokeTrain } from "./train.js";

function main(argv: string[]): number {
  const positional: string[] = [];
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    if (argv[i].startsWith("--")) {
      flags.set(argv[i].slice(2), argv[i + 1] ?? "");
      i++;
    } else {
      positional.push(argv[i]);
    }
  }
  if (positional.length !== 1) {
    console.error("usage: main.js <corpus.jsonl> [--steps N] [--seed S] [--lr X] [--temperature T] [--out trace.jsonl]");
    return 2;
  }

  const config = {
    ...DEFAULT_TRAIN_CONFIG,
    steps: flags.has("steps") ? Number(flags.get("steps")) : DEFAULT_TRAIN_CONFIG.steps,
    seed: flags.has("seed") ? Number(flags.get("seed")) : DEFAULT_TRAIN_CONFIG.seed,
    learningRate: flags.has("lr") ? Number(flags.get("lr")) : DEFAULT_TRAIN_CONFIG.learningRate,
    temperature: flags.has("temperature")
      ? Number(flags.get("temperature"))
      : DEFAULT_TRAIN_CONFIG.temperature,
  };

  let examples;
  try {
    examples = loadCorpus(positional[0]);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  const { trace } = smokeTrain(examples, config);

  const first = trace[0];
  const last = trace[trace.length - 1];
  console.log(
    `trained ${config.steps} steps on ${examples.length} examples: ` +
      `L_H ${first.loss_h.toFixed(3)} -> ${last.loss_h.toFixed(3)}`,
  );
  if (flags.has("out")) {
    writeFileSync(
      flags.get("out")!,
      trace.map((entry) => JSON.stringify(entry)).join("\n") + "\n",
      "utf-8",
    );
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
