import * as net from "node:net";
import { randomUUID } from "node:crypto";

import type {
  ActionRequest,
  SessionConfig,
  StateSnapshot,
  Usage,
} from "./types.js";

interface UsageAck {
  type: "usage_ack";
  charged: number;
  consumed_credit: number;
}

/**
 * Line-delimited JSON client for the arena's TCP transport.
 *
 * The protocol is strictly alternating (server state, client message, server
 * reply), so a simple FIFO of pending line-readers is enough.
 */
export class ArenaClient {
  private socket: net.Socket | null = null;
  private buffer = "";
  private waiters: Array<(line: string) => void> = [];
  private backlog: string[] = [];
  /** Most recent snapshot seen, including ones skipped while awaiting a
   * reply (the server pushes a fresh state after every exchange). */
  lastState: StateSnapshot | null = null;

  constructor(private readonly config: SessionConfig) {}

  connect(): Promise<void> {
    return new Promise((resolve, reject) => {
      const socket = net.createConnection(
        { host: this.config.host, port: this.config.port },
        () => resolve(),
      );
      socket.setEncoding("utf-8");
      socket.on("data", (chunk: string) => this.onData(chunk));
      socket.on("error", reject);
      this.socket = socket;
    });
  }

  close(): void {
    this.socket?.end();
    this.socket = null;
  }

  private onData(chunk: string): void {
    this.buffer += chunk;
    let index = this.buffer.indexOf("\n");
    while (index >= 0) {
      const line = this.buffer.slice(0, index);
      this.buffer = this.buffer.slice(index + 1);
      if (line.trim()) {
        const waiter = this.waiters.shift();
        if (waiter) waiter(line);
        else this.backlog.push(line);
      }
      index = this.buffer.indexOf("\n");
    }
  }

  private readLine(): Promise<string> {
    const queued = this.backlog.shift();
    if (queued !== undefined) return Promise.resolve(queued);
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  async readMessage<T = Record<string, unknown>>(): Promise<T> {
    return JSON.parse(await this.readLine()) as T;
  }

  private async readOfType<T extends Record<string, unknown>>(
    type: string,
  ): Promise<T> {
    for (;;) {
      const message = await this.readMessage();
      if (message.type === "state") {
        this.lastState = message as unknown as StateSnapshot;
        if (type === "state") return message as T;
        continue;
      }
      if (message.type === type) return message as T;
      throw new Error(`unexpected message type: ${String(message.type)}`);
    }
  }

  /** Waits for the next turn's snapshot. */
  readState(): Promise<StateSnapshot> {
    return this.readOfType<Record<string, unknown>>(
      "state",
    ) as Promise<unknown> as Promise<StateSnapshot>;
  }

  private send(message: Record<string, unknown>): void {
    if (!this.socket) throw new Error("client is not connected");
    this.socket.write(JSON.stringify(message) + "\n");
  }

  /** Sends one action (optionally with piggybacked usage); resolves with the
   * server's result message. */
  async sendAction(
    request: ActionRequest,
    usage?: Usage,
  ): Promise<Record<string, unknown>> {
    const message: Record<string, unknown> = {
      type: "action",
      action: request.action,
      parameters: request.parameters,
    };
    if (usage) message.usage = usage;
    this.send(message);
    return this.readOfType("result");
  }

  /**
   * Reports provider token usage for inference charging. Retries transport
   * hiccups with a stable idempotency key so the ledger gains one entry.
   */
  async reportUsage(
    inputTokens: number,
    outputTokens: number,
    maxAttempts = 3,
  ): Promise<UsageAck> {
    const usage: Usage = {
      input_tokens: inputTokens,
      output_tokens: outputTokens,
      model_id: this.config.modelId,
      idempotency_key: randomUUID(),
    };
    let lastError: unknown = null;
    for (let attempt = 0; attempt < maxAttempts; attempt += 1) {
      try {
        this.send({ type: "usage", ...usage });
        return await this.readOfType<UsageAck & Record<string, unknown>>(
          "usage_ack",
        );
      } catch (error) {
        lastError = error;
      }
    }
    throw lastError instanceof Error
      ? lastError
      : new Error("usage report failed");
  }

  /** Client-side mirror of the server's charge: credits are micro-USD,
   * rounded half up. */
  expectedCharge(inputTokens: number, outputTokens: number): number {
    const usd =
      (inputTokens * this.config.price.inputPerMtok +
        outputTokens * this.config.price.outputPerMtok) /
      1_000_000;
    return Math.floor(usd * 1_000_000 + 0.5);
  }
}
