/**
 * Temperature-mixed sampling over per-task example pools: task i is
 * drawn with probability size_i^(1/T) / sum_j size_j^(1/T); inside a
 * task, examples are drawn uniformly without replacement per epoch.
 */

import { CorpusExample } from "./corpus.js";
import { Rand, shuffle } from "./rng.js";

export function groupByTask(examples: CorpusExample[]): Map<string, CorpusExample[]> {
  const byTask = new Map<string, CorpusExample[]>();
  for (const example of examples) {
    const pool = byTask.get(example.task);
    if (pool) {
      pool.push(example);
    } else {
      byTask.set(example.task, [example]);
    }
  }
  return byTask;
}

export function temperatureRates(
  sizes: Map<string, number>,
  temperature: number,
): Map<string, number> {
  if (temperature <= 0) throw new Error("temperature must be positive");
  let total = 0;
  const weights = new Map<string, number>();
  for (const [task, size] of sizes) {
    const weight = size ** (1 / temperature);
    weights.set(task, weight);
    total += weight;
  }
  if (total === 0) throw new Error("all task sizes are zero");
  for (const [task, weight] of weights) weights.set(task, weight / total);
  return weights;
}

export function* mixtureStream(
  byTask: Map<string, CorpusExample[]>,
  temperature: number,
  rand: Rand,
): Generator<CorpusExample> {
  const tasks = [...byTask.keys()].sort();
  const sizes = new Map(tasks.map((t) => [t, byTask.get(t)!.length]));
  const rates = temperatureRates(sizes, temperature);
  const cumulative: number[] = [];
  let acc = 0;
  for (const task of tasks) {
    acc += rates.get(task)!;
    cumulative.push(acc);
  }
  const epochs = new Map<string, CorpusExample[]>();
  while (true) {
    const roll = rand();
    let pick = tasks.length - 1;
    for (let i = 0; i < cumulative.length; i++) {
      if (roll < cumulative[i]) {
        pick = i;
        break;
      }
    }
    const task = tasks[pick];
    let epoch = epochs.get(task);
    if (!epoch || epoch.length === 0) {
      epoch = shuffle([...byTask.get(task)!], rand);
      epochs.set(task, epoch);
    }
    yield epoch.pop()!;
  }
}
