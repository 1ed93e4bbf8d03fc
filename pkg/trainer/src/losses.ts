/**
 * The three training losses over corpus examples.
 *
 * Dual examples and MLM examples share one sequence likelihood: an MLM
 * example is scored exactly as a dual example whose source is the
 * corrupted input and whose target is the sentinel-delimited spans.
 * The hybrid loss is the literal sum of the two.
 */

import { CorpusExample, encode, tokenize } from "./corpus.js";
import { Model, sequenceNll } from "./model.js";

export function lossBd(model: Model, source: string, target: string): number {
  return sequenceNll(
    model,
    encode(model.vocab, tokenize(source)),
    encode(model.vocab, tokenize(target)),
  );
}

export function lossMlm(model: Model, corruptedInput: string, sentinelTarget: string): number {
  return lossBd(model, corruptedInput, sentinelTarget);
}

export function lossHybrid(bd: number, mlm: number): number {
  return bd + mlm;
}

export function exampleLoss(model: Model, example: CorpusExample, withGrad = false): number {
  return sequenceNll(
    model,
    encode(model.vocab, tokenize(example.source)),
    encode(model.vocab, tokenize(example.target)),
    withGrad,
  );
}

export interface BatchLosses {
  bd: number;
  mlm: number;
  hybrid: number;
}

/** Per-objective sums over a batch; hybrid = bd + mlm by definition. */
export function batchLosses(model: Model, examples: CorpusExample[]): BatchLosses {
  let bd = 0;
  let mlm = 0;
  for (const example of examples) {
    const loss = exampleLoss(model, example);
    if (example.objective === "dual") {
      bd += loss;
    } else {
      mlm += loss;
    }
  }
  return { bd, mlm, hybrid: lossHybrid(bd, mlm) };
}
