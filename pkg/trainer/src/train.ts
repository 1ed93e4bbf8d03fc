/**
 * Smoke-training loop: Adam over a temperature-mixed stream of corpus
 * examples, logging the full-batch dual, MLM, and hybrid losses at
 * every step. The point is to prove the corpus contract end to end,
 * not model quality.
 */

import { CorpusExample, buildVocab } from "./corpus.js";
import { exampleLoss, batchLosses } from "./losses.js";
import { DEFAULT_CONFIG, Model, ToyModelConfig, initModel, paramEntries, zeroGrads } from "./model.js";
import { groupByTask, mixtureStream } from "./mixture.js";
import { mulberry32 } from "./rng.js";

export interface TrainConfig {
  steps: number;
  learningRate: number;
  temperature: number;
  seed: number;
  model: ToyModelConfig;
}

export const DEFAULT_TRAIN_CONFIG: TrainConfig = {
  steps: 200,
  learningRate: 0.05,
  temperature: 2,
  seed: 0,
  model: DEFAULT_CONFIG,
};

const BETA1 = 0.9;
const BETA2 = 0.999;
const EPS = 1e-8;

export interface TraceEntry {
  step: number;
  loss_bd: number;
  loss_mlm: number;
  loss_h: number;
}

export interface TrainResult {
  model: Model;
  trace: TraceEntry[];
}

export function smokeTrain(
  examples: CorpusExample[],
  config: TrainConfig = DEFAULT_TRAIN_CONFIG,
): TrainResult {
  if (examples.length === 0) throw new Error("empty corpus");
  const rand = mulberry32(config.seed);
  const vocab = buildVocab(examples);
  const model = initModel(vocab, config.model, rand);
  const stream = mixtureStream(groupByTask(examples), config.temperature, rand);

  const trace: TraceEntry[] = [];
  const log = (step: number) => {
    const { bd, mlm, hybrid } = batchLosses(model, examples);
    trace.push({ step, loss_bd: bd, loss_mlm: mlm, loss_h: hybrid });
  };

  const firstMoment = new Map<string, Float64Array>();
  const secondMoment = new Map<string, Float64Array>();
  for (const [name, grad] of paramEntries(model.grads)) {
    firstMoment.set(name, new Float64Array(grad.length));
    secondMoment.set(name, new Float64Array(grad.length));
  }

  for (let step = 0; step < config.steps; step++) {
    log(step);
    const example = stream.next().value as CorpusExample;
    zeroGrads(model);
    exampleLoss(model, example, true);
    adamStep(model, firstMoment, secondMoment, step + 1, config.learningRate);
  }
  log(config.steps);
  return { model, trace };
}

function adamStep(
  model: Model,
  firstMoment: Map<string, Float64Array>,
  secondMoment: Map<string, Float64Array>,
  t: number,
  learningRate: number,
): void {
  const bias1 = 1 - BETA1 ** t;
  const bias2 = 1 - BETA2 ** t;
  for (const [name, grad] of paramEntries(model.grads)) {
    const param = model.params[name];
    const m = firstMoment.get(name)!;
    const s = secondMoment.get(name)!;
    for (let i = 0; i < param.length; i++) {
      m[i] = BETA1 * m[i] + (1 - BETA1) * grad[i];
      s[i] = BETA2 * s[i] + (1 - BETA2) * grad[i] * grad[i];
      param[i] -= (learningRate * (m[i] / bias1)) / (Math.sqrt(s[i] / bias2) + EPS);
    }
  }
}
