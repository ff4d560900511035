export { ArenaClient } from "./client.js";
export { renderPrompt } from "./prompt.js";
export type { PromptPair } from "./prompt.js";
export {
  extractJsonObject,
  parseModelOutput,
  parseWithRetries,
} from "./parse.js";
export type { ParseFailure, ParseResult, ParseSuccess } from "./parse.js";
export { defaultSessionConfig } from "./types.js";
export type {
  ActionRequest,
  ModelPrice,
  SessionConfig,
  StateSnapshot,
  Usage,
} from "./types.js";
