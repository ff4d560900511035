/** Shapes mirrored from the arena server's line-delimited JSON protocol. */

export interface StateSnapshot {
  type: "state";
  turn_index: number;
  rules: {
    credit_limit: number;
    score_weights: Record<string, number>;
    hint_costs: number[];
    test_cost: number;
    penalties: Record<string, number>;
    languages: string[];
  };
  status: {
    name: string;
    consumed_credit: number;
    solved_problems: string[];
    score: number;
    penalty: number;
  };
  available_problems: string[];
  rankings: string;
  available_actions: string[];
}

export interface ActionRequest {
  action: string;
  parameters: Record<string, unknown>;
}

export interface Usage {
  input_tokens: number;
  output_tokens: number;
  model_id: string;
  idempotency_key?: string;
}

export interface ModelPrice {
  /** USD per million input tokens. */
  inputPerMtok: number;
  /** USD per million output tokens. */
  outputPerMtok: number;
}

export interface SessionConfig {
  modelId: string;
  price: ModelPrice;
  temperature: number;
  maxRetriesOnParseFailure: number;
  /** TCP endpoint of the arena server. */
  host: string;
  port: number;
}

export const defaultSessionConfig = (
  overrides: Partial<SessionConfig> = {},
): SessionConfig => {
  const config: SessionConfig = {
    modelId: "gpt-5",
    price: { inputPerMtok: 1.25, outputPerMtok: 10.0 },
    temperature: 0.7,
    maxRetriesOnParseFailure: 2,
    host: "127.0.0.1",
    port: 0,
    ...overrides,
  };
  if (config.temperature < 0) {
    throw new Error("temperature must be >= 0");
  }
  return config;
};
