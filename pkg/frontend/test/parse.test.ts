import { describe, expect, it } from "vitest";

import {
  extractJsonObject,
  parseModelOutput,
  parseWithRetries,
} from "../src/parse.js";

describe("parseModelOutput", () => {
  it("accepts a clean JSON action", () => {
    const result = parseModelOutput(
      '{"action": "VIEW_PROBLEM", "parameters": {"problem_id": "b01_sum"}}',
    );
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.request.action).toBe("VIEW_PROBLEM");
      expect(result.request.parameters).toEqual({ problem_id: "b01_sum" });
    }
  });

  it("extracts JSON from a fenced block with commentary", () => {
    const text = [
      "Let me think about this. The easiest problem looks solvable.",
      "```json",
      '{"action": "SUBMIT_SOLUTION",',
      ' "parameters": {"problem_id": "b01_sum", "source": "print(1)",',
      '  "language": "python3"}}',
      "```",
      "That should do it.",
    ].join("\n");
    const result = parseModelOutput(text);
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.request.action).toBe("SUBMIT_SOLUTION");
  });

  it("handles braces inside string parameters", () => {
    const source = "int main() { return 0; }";
    const text = `answer: {"action": "TEST_CODE", "parameters": {"source": ${JSON.stringify(source)}}} trailing prose`;
    const result = parseModelOutput(text);
    expect(result.ok).toBe(true);
    if (result.ok) {
      expect(result.request.parameters.source).toBe(source);
    }
  });

  it("fails on prose with no JSON", () => {
    const result = parseModelOutput("I am not sure what to do next.");
    expect(result).toEqual({
      ok: false,
      reason: "no JSON object found in model output",
    });
  });

  it("fails when the action field is missing", () => {
    const result = parseModelOutput('{"parameters": {}}');
    expect(result.ok).toBe(false);
  });

  it("defaults parameters to an empty object", () => {
    const result = parseModelOutput('{"action": "TERMINATE"}');
    expect(result.ok).toBe(true);
    if (result.ok) expect(result.request.parameters).toEqual({});
  });

  it("extractJsonObject returns null without an opening brace", () => {
    expect(extractJsonObject("no json here")).toBeNull();
  });
});

describe("parseWithRetries", () => {
  it("retries until the model emits valid JSON", async () => {
    const replies = ["garbage", "still garbage", '{"action": "TERMINATE"}'];
    const result = await parseWithRetries(
      async (attempt) => replies[attempt],
      2,
    );
    expect(result.ok).toBe(true);
    expect(result.attempts).toBe(3);
  });

  it("reports failure after exhausting retries", async () => {
    const result = await parseWithRetries(async () => "never json", 1);
    expect(result.ok).toBe(false);
    expect(result.attempts).toBe(2);
  });
});
