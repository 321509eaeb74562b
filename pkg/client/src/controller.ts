/**
 * Pull-mode controller: create a session, step it, read events.
 *
 * Mirrors the usual embodied-agent loop:
 *
 *   const controller = await Controller.start("127.0.0.1", 8270, 17);
 *   const event = await controller.step({ action: "MoveAhead" });
 *   if (!event.metadata.lastActionSuccess) ...
 */

import { ClientEvent, decodeEvent } from "./events.js";
import type { ActionParams, SessionInit } from "./types.js";

export class ServerError extends Error {
  readonly status: number;
  readonly body: string;

  constructor(status: number, body: string) {
    super(`server returned ${status}: ${body}`);
    this.status = status;
    this.body = body;
  }
}

export class SessionGone extends ServerError {}

async function readError(response: Response): Promise<never> {
  const body = await response.text();
  if (response.status === 404) {
    throw new SessionGone(response.status, body);
  }
  throw new ServerError(response.status, body);
}

export class Controller {
  readonly baseUrl: string;
  readonly sessionId: string;
  /** Event returned by session creation. */
  readonly initialEvent: ClientEvent;
  lastEvent: ClientEvent;

  private constructor(baseUrl: string, sessionId: string, initialEvent: ClientEvent) {
    this.baseUrl = baseUrl;
    this.sessionId = sessionId;
    this.initialEvent = initialEvent;
    this.lastEvent = initialEvent;
  }

  /** Create a session on the engine and return a live controller. */
  static async start(
    host: string,
    port: number,
    scene: number,
    init: SessionInit = {},
  ): Promise<Controller> {
    const baseUrl = `http://${host}:${port}`;
    const response = await fetch(`${baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ scene, ...init }),
    });
    if (response.status !== 201) {
      await readError(response);
    }
    const text = await response.text();
    const parsed = JSON.parse(text) as { session_id: string; event: unknown };
    // re-slice the event portion so rawMetadata matches the wire bytes
    const eventStart = text.indexOf('"event":') + '"event":'.length;
    const eventBody = text.slice(eventStart, text.lastIndexOf("}"));
    return new Controller(baseUrl, parsed.session_id, decodeEvent(eventBody));
  }

  /** Execute one action and return the resulting event. */
  async step(action: ActionParams): Promise<ClientEvent> {
    const response = await fetch(`${this.baseUrl}/sessions/${this.sessionId}/step`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(action),
    });
    if (response.status !== 200) {
      await readError(response);
    }
    const event = decodeEvent(await response.text());
    this.lastEvent = event;
    return event;
  }

  /** Metadata snapshot without rendering a frame. */
  async metadata(): Promise<ClientEvent> {
    const response = await fetch(`${this.baseUrl}/sessions/${this.sessionId}/metadata`);
    if (response.status !== 200) {
      await readError(response);
    }
    return decodeEvent(await response.text());
  }

  /** Tear the session down. */
  async close(): Promise<void> {
    const response = await fetch(`${this.baseUrl}/sessions/${this.sessionId}`, {
      method: "DELETE",
    });
    if (response.status !== 204 && response.status !== 404) {
      await readError(response);
    }
  }
}
