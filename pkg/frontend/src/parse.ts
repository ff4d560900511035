import type { ActionRequest } from "./types.js";

export interface ParseFailure {
  ok: false;
  reason: string;
}

export interface ParseSuccess {
  ok: true;
  request: ActionRequest;
}

export type ParseResult = ParseSuccess | ParseFailure;

/**
 * Pulls the first balanced JSON object out of free-form model text,
 * tolerating code fences and surrounding prose.
 */
export const extractJsonObject = (raw: string): string | null => {
  const trimmed = raw.trim();
  const fenced = trimmed.match(/```(?:json)?\s*([\s\S]*?)```/i);
  const source = fenced ? fenced[1].trim() : trimmed;
  const start = source.indexOf("{");
  if (start < 0) return null;
  let depth = 0;
  let inString = false;
  let escaped = false;
  for (let i = start; i < source.length; i += 1) {
    const ch = source[i];
    if (inString) {
      if (escaped) escaped = false;
      else if (ch === "\\") escaped = true;
      else if (ch === '"') inString = false;
      continue;
    }
    if (ch === '"') inString = true;
    else if (ch === "{") depth += 1;
    else if (ch === "}") {
      depth -= 1;
      if (depth === 0) return source.slice(start, i + 1);
    }
  }
  return null;
};

export const parseModelOutput = (text: string): ParseResult => {
  const candidate = extractJsonObject(text);
  if (candidate === null) {
    return { ok: false, reason: "no JSON object found in model output" };
  }
  let data: unknown;
  try {
    data = JSON.parse(candidate);
  } catch {
    return { ok: false, reason: "extracted block is not valid JSON" };
  }
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    return { ok: false, reason: "model output is not a JSON object" };
  }
  const record = data as Record<string, unknown>;
  if (typeof record.action !== "string") {
    return { ok: false, reason: "missing string 'action' field" };
  }
  const parameters = record.parameters ?? {};
  if (typeof parameters !== "object" || Array.isArray(parameters)) {
    return { ok: false, reason: "'parameters' must be an object" };
  }
  return {
    ok: true,
    request: {
      action: record.action,
      parameters: parameters as Record<string, unknown>,
    },
  };
};

/**
 * Repeatedly asks the generator until the output parses or retries run out.
 * A final failure reports a skipped turn rather than inventing an action.
 */
export const parseWithRetries = async (
  generate: (attempt: number) => Promise<string>,
  maxRetries: number,
): Promise<ParseResult & { attempts: number }> => {
  let last: ParseResult = { ok: false, reason: "no attempts made" };
  for (let attempt = 0; attempt <= maxRetries; attempt += 1) {
    last = parseModelOutput(await generate(attempt));
    if (last.ok) return { ...last, attempts: attempt + 1 };
  }
  return { ...last, attempts: maxRetries + 1 };
};
