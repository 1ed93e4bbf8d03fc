/**
 * Corpus contract: UTF-8 JSON lines with fields
 * {objective, task, direction?, source, target} where objective is
 * "dual" (direction required) or "mlm" (direction absent).
 *
 * Loading is strict: any malformed line aborts with its 1-based line
 * number, so a bad corpus is rejected before any training starts.
 */

import { readFileSync } from "node:fs";

export interface CorpusExample {
  objective: "dual" | "mlm";
  task: string;
  direction?: "forward" | "reverse";
  source: string;
  target: string;
}

/** Tokens the corpus builder reserves; always present in the vocabulary. */
export const SPECIAL_TOKENS = [
  "<nl>",
  "<vql>",
  "<schema>",
  "<table>",
  "<description>",
  "<question>",
  "<answer>",
] as const;

export const BOS = "<bos>";

export class CorpusFormatError extends Error {
  constructor(message: string, readonly line: number) {
    super(`line ${line}: ${message}`);
    this.name = "CorpusFormatError";
  }
}

export function parseCorpus(text: string): CorpusExample[] {
  const examples: CorpusExample[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    const lineNo = i + 1;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new CorpusFormatError(`invalid JSON (${(err as Error).message})`, lineNo);
    }
    examples.push(validateExample(obj, lineNo));
  }
  return examples;
}

export function loadCorpus(path: string): CorpusExample[] {
  return parseCorpus(readFileSync(path, "utf-8"));
}

function validateExample(obj: unknown, lineNo: number): CorpusExample {
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new CorpusFormatError("not a JSON object", lineNo);
  }
  const record = obj as Record<string, unknown>;
  for (const field of ["objective", "task", "source", "target"]) {
    if (typeof record[field] !== "string") {
      throw new CorpusFormatError(`missing or non-string field "${field}"`, lineNo);
    }
  }
  const objective = record.objective as string;
  if (objective !== "dual" && objective !== "mlm") {
    throw new CorpusFormatError(`unknown objective "${objective}"`, lineNo);
  }
  const direction = record.direction;
  if (objective === "dual") {
    if (direction !== "forward" && direction !== "reverse") {
      throw new CorpusFormatError("dual example needs direction forward|reverse", lineNo);
    }
  } else if (direction !== undefined) {
    throw new CorpusFormatError("mlm example must not carry a direction", lineNo);
  }
  return {
    objective,
    task: record.task as string,
    direction: direction as CorpusExample["direction"],
    source: record.source as string,
    target: record.target as string,
  };
}

export function tokenize(text: string): string[] {
  return text.split(/\s+/).filter((t) => t.length > 0);
}

/**
 * Vocabulary over the corpus plus the reserved tokens and <bos>,
 * in sorted order so ids are stable across runs.
 */
export function buildVocab(examples: CorpusExample[]): Map<string, number> {
  const tokens = new Set<string>([...SPECIAL_TOKENS, BOS]);
  for (const example of examples) {
    for (const token of tokenize(example.source)) tokens.add(token);
    for (const token of tokenize(example.target)) tokens.add(token);
  }
  const vocab = new Map<string, number>();
  for (const token of [...tokens].sort()) {
    vocab.set(token, vocab.size);
  }
  return vocab;
}

export function encode(vocab: Map<string, number>, tokens: string[]): number[] {
  return tokens.map((token) => {
    const id = vocab.get(token);
    if (id === undefined) {
      throw new Error(`out-of-vocabulary token "${token}"`);
    }
    return id;
  });
}
