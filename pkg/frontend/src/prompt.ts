import type { StateSnapshot } from "./types.js";

export interface PromptPair {
  system: string;
  user: string;
}

const SYSTEM_PROMPT = [
  "You are a competitive programming agent participating in a coding",
  "competition. You will receive the current state of the competition and",
  "results of your previous actions. Your goal is to solve as many problems",
  "as possible (achieve 'Accepted' status).",
  "",
  "Your final ranking is determined first by your total score. The score is",
  "a weighted sum of the problems you solve, with harder problems (e.g.,",
  "Platinum) being worth more than easier ones (e.g., Bronze). If scores are",
  "tied, the agent with the lower total of (actual consumed credit +",
  "penalties) ranks higher.",
  "",
  "You start with a limited credit budget, and many actions consume credit.",
  "You will be terminated from the competition when your actual consumed",
  "credit reaches the limit.",
  "",
  "Credit is consumed in three main ways:",
  "1. LLM Inference: generating responses, charged per token you use.",
  "2. Purchasing Hints: using hints to help solve problems.",
  "3. Testing Code: running your code against test cases before submission.",
  "",
  "IMPORTANT:",
  "- Penalties from wrong submissions affect your ranking tie-breaker but do",
  "  NOT count toward termination.",
  "- Solving problems is much more important than minimizing consumed",
  "  credit, so try your best to solve as many problems as possible.",
  "",
  "Please respond with a JSON object containing 'action' and 'parameters'",
  "fields.",
].join("\n");

const formatWeights = (weights: Record<string, number>): string =>
  ["Bronze", "Silver", "Gold", "Platinum"]
    .filter((level) => level in weights)
    .map((level) => `${level} (${weights[level]})`)
    .join(", ");

/**
 * Renders the (system, user) prompt pair for one turn. Pure function of the
 * snapshot, so a given state always yields byte-identical prompts.
 */
export const renderPrompt = (snapshot: StateSnapshot): PromptPair => {
  const { rules, status } = snapshot;
  const penalty = Object.values(rules.penalties)[0] ?? 0;
  const penaltyKinds = Object.keys(rules.penalties).sort().join(", ");
  const user = [
    "## Competition Rules",
    "- Credit System:",
    `  - Each participant starts with a total of ${rules.credit_limit.toLocaleString("en-US")} credit limit.`,
    "  - Credit is consumed by three main sources: LLM Inference, Purchasing Hints, and Testing Code.",
    "  - Your participation ends when your actual consumed credit reaches the limit.",
    "- Scoring Rules:",
    "  - Your Final Score is the sum of points from all problems you solve completely.",
    "  - No partial credit is awarded.",
    `  - Points are weighted by difficulty: ${formatWeights(rules.score_weights)}.`,
    `- Penalties: A penalty of ${penalty} points is incurred for ${penaltyKinds} submissions.`,
    "- Ranking and Tie-Breaking: Rank is determined by Final Score. Ties are broken by the lower (Actual Consumed Credit + Penalties).",
    `- Programming Languages: ${rules.languages.join(", ")} are available.`,
    "",
    "## Your Status",
    `- Name: ${status.name}`,
    `- Consumed Credit: ${status.consumed_credit}`,
    `- Solved Problems: ${status.solved_problems.join(", ") || "(none)"}`,
    `- Current Score: ${status.score}`,
    `- Penalty: ${status.penalty}`,
    "",
    "## Available Problems",
    ...snapshot.available_problems.map((id) => `- ${id}`),
    "",
    "## Current Rankings",
    snapshot.rankings,
    "",
    "## Available Actions",
    "1. VIEW_PROBLEM: View problem details.",
    "2. GET_HINT: Get a hint for a problem (consumes credit). Levels 0-4 are available.",
    "3. SUBMIT_SOLUTION: Submit a solution.",
    "4. TEST_CODE: Test code with custom test cases (consumes credit).",
    "5. TERMINATE: End participation.",
    "",
    "## Response Format",
    "Please respond using the following JSON format:",
    "{",
    '  "action": "<action_name>",',
    '  "parameters": {}',
    "}",
  ].join("\n");
  return { system: SYSTEM_PROMPT, user };
};
