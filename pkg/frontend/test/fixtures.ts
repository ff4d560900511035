import type { StateSnapshot } from "../src/types.js";

export const snapshotFixture = (
  overrides: Partial<StateSnapshot> = {},
): StateSnapshot => ({
  type: "state",
  turn_index: 0,
  rules: {
    credit_limit: 20_000_000,
    score_weights: { Bronze: 1, Silver: 2, Gold: 5, Platinum: 10 },
    hint_costs: [500, 1000, 1000, 1500, 1500],
    test_cost: 10,
    penalties: { WA: 100, RE: 100, CE: 100, TLE: 100, MLE: 100 },
    languages: ["cpp17", "java", "python3"],
  },
  status: {
    name: "agent-1",
    consumed_credit: 0,
    solved_problems: [],
    score: 0,
    penalty: 0,
  },
  available_problems: [
    "b01_sum", "b02_max", "b03_parity",
    "s01_sort", "s02_distinct", "s03_reverse",
    "g01_fib", "g02_gcd", "g03_range",
    "p01_pow", "p02_prime", "p03_subset",
  ],
  rankings: "1. agent-1: Score 0, Credit+Penalty: 0 [ACTIVE]",
  available_actions: [
    "VIEW_PROBLEM", "GET_HINT", "SUBMIT_SOLUTION", "TEST_CODE", "TERMINATE",
  ],
  ...overrides,
});
