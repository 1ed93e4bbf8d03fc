/**
 * Toy encoder-decoder scoring P(t_i | s, t_<i).
 *
 * Encoder: mean of the source token embeddings.
 * Decoder step i: concat(source mean, mean of embeddings of <bos>,
 * t_1..t_{i-1}) -> tanh MLP -> softmax over the vocabulary.
 *
 * The sequence loss is the sum over target positions of
 * -log P(t_i | s, t_<i) under teacher forcing. Gradients are computed
 * in closed form (no autograd) so they can be checked against finite
 * differences directly.
 *
 * The output layer starts at zero, so a freshly initialized model
 * assigns the uniform distribution: loss = targetLength * ln(V).
 */

import { BOS } from "./corpus.js";
import { Rand, smallNoise } from "./rng.js";

export interface ToyModelConfig {
  embedDim: number;
  hiddenDim: number;
}

export const DEFAULT_CONFIG: ToyModelConfig = { embedDim: 16, hiddenDim: 32 };

export interface Model {
  config: ToyModelConfig;
  vocab: Map<string, number>;
  vocabSize: number;
  bosId: number;
  params: ParamSet;
  grads: ParamSet;
}

export interface ParamSet {
  embed: Float64Array; // V x d
  w1: Float64Array; // h x 2d
  b1: Float64Array; // h
  w2: Float64Array; // V x h
  b2: Float64Array; // V
}

export function initModel(
  vocab: Map<string, number>,
  config: ToyModelConfig,
  rand: Rand,
): Model {
  const v = vocab.size;
  const { embedDim: d, hiddenDim: h } = config;
  const params: ParamSet = {
    embed: new Float64Array(v * d),
    w1: new Float64Array(h * 2 * d),
    b1: new Float64Array(h),
    w2: new Float64Array(v * h), // zero: uniform output at init
    b2: new Float64Array(v),
  };
  for (let i = 0; i < params.embed.length; i++) params.embed[i] = smallNoise(rand, 0.5);
  for (let i = 0; i < params.w1.length; i++) params.w1[i] = smallNoise(rand, 0.5);
  const bosId = vocab.get(BOS);
  if (bosId === undefined) throw new Error(`vocabulary lacks ${BOS}`);
  return {
    config,
    vocab,
    vocabSize: v,
    bosId,
    params,
    grads: emptyLike(params),
  };
}

function emptyLike(params: ParamSet): ParamSet {
  return {
    embed: new Float64Array(params.embed.length),
    w1: new Float64Array(params.w1.length),
    b1: new Float64Array(params.b1.length),
    w2: new Float64Array(params.w2.length),
    b2: new Float64Array(params.b2.length),
  };
}

export function zeroGrads(model: Model): void {
  for (const arr of Object.values(model.grads)) arr.fill(0);
}

export function paramEntries(set: ParamSet): [keyof ParamSet, Float64Array][] {
  return [
    ["embed", set.embed],
    ["w1", set.w1],
    ["b1", set.b1],
    ["w2", set.w2],
    ["b2", set.b2],
  ];
}

/**
 * Negative log-likelihood of the target ids given the source ids,
 * summed over target positions. With withGrad, gradients are added
 * into model.grads.
 */
export function sequenceNll(
  model: Model,
  sourceIds: number[],
  targetIds: number[],
  withGrad = false,
): number {
  const { embedDim: d, hiddenDim: h } = model.config;
  const v = model.vocabSize;
  const { embed, w1, b1, w2, b2 } = model.params;
  const grads = model.grads;
  if (targetIds.length === 0) return 0;

  const srcCount = sourceIds.length;
  const hsrc = new Float64Array(d);
  for (const id of sourceIds) {
    for (let k = 0; k < d; k++) hsrc[k] += embed[id * d + k];
  }
  if (srcCount > 0) {
    for (let k = 0; k < d; k++) hsrc[k] /= srcCount;
  }

  const seq = [model.bosId, ...targetIds];
  const prefixSum = new Float64Array(d);
  const dHsrcTotal = withGrad ? new Float64Array(d) : null;

  const x = new Float64Array(2 * d);
  const act = new Float64Array(h);
  const hidden = new Float64Array(h);
  const logits = new Float64Array(v);

  let loss = 0;
  for (let i = 1; i < seq.length; i++) {
    const prev = seq[i - 1];
    for (let k = 0; k < d; k++) prefixSum[k] += embed[prev * d + k];
    const prefixLen = i;

    for (let k = 0; k < d; k++) {
      x[k] = hsrc[k];
      x[d + k] = prefixSum[k] / prefixLen;
    }
    for (let j = 0; j < h; j++) {
      let sum = b1[j];
      const row = j * 2 * d;
      for (let k = 0; k < 2 * d; k++) sum += w1[row + k] * x[k];
      act[j] = sum;
      hidden[j] = Math.tanh(sum);
    }
    let maxLogit = -Infinity;
    for (let o = 0; o < v; o++) {
      let sum = b2[o];
      const row = o * h;
      for (let j = 0; j < h; j++) sum += w2[row + j] * hidden[j];
      logits[o] = sum;
      if (sum > maxLogit) maxLogit = sum;
    }
    let expSum = 0;
    for (let o = 0; o < v; o++) expSum += Math.exp(logits[o] - maxLogit);
    const lse = maxLogit + Math.log(expSum);
    const target = seq[i];
    loss += lse - logits[target];

    if (!withGrad) continue;

    // dLoss/dz = softmax(z) - onehot(target)
    const dz = new Float64Array(v);
    for (let o = 0; o < v; o++) dz[o] = Math.exp(logits[o] - lse);
    dz[target] -= 1;

    const dHidden = new Float64Array(h);
    for (let o = 0; o < v; o++) {
      const g = dz[o];
      if (g === 0) continue;
      const row = o * h;
      for (let j = 0; j < h; j++) {
        grads.w2[row + j] += g * hidden[j];
        dHidden[j] += w2[row + j] * g;
      }
      grads.b2[o] += g;
    }
    const dx = new Float64Array(2 * d);
    for (let j = 0; j < h; j++) {
      const da = dHidden[j] * (1 - hidden[j] * hidden[j]);
      if (da === 0) continue;
      const row = j * 2 * d;
      for (let k = 0; k < 2 * d; k++) {
        grads.w1[row + k] += da * x[k];
        dx[k] += w1[row + k] * da;
      }
      grads.b1[j] += da;
    }
    for (let k = 0; k < d; k++) dHsrcTotal![k] += dx[k];
    for (let p = 0; p < prefixLen; p++) {
      const id = seq[p];
      for (let k = 0; k < d; k++) grads.embed[id * d + k] += dx[d + k] / prefixLen;
    }
  }

  if (withGrad && srcCount > 0) {
    for (const id of sourceIds) {
      for (let k = 0; k < d; k++) grads.embed[id * d + k] += dHsrcTotal![k] / srcCount;
    }
  }
  return loss;
}
