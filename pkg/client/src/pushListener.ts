/**
 * Push-mode listener: the engine POSTs each event here and blocks until
 * the response body carries the next action. The policy callback maps a
 * decoded event to that action; returning {action: "Stop"} (or throwing)
 * ends the loop.
 */

import * as http from "node:http";

import { ClientEvent, decodeEvent } from "./events.js";
import type { ActionParams } from "./types.js";

export type Policy = (event: ClientEvent) => ActionParams | Promise<ActionParams>;

export interface PushListener {
  port: number;
  /** Resolves with the number of non-Stop actions returned once the loop ends. */
  done: Promise<number>;
  close(): Promise<void>;
}

export async function createPushListener(port: number, policy: Policy): Promise<PushListener> {
  let served = 0;
  let finish: (count: number) => void;
  const done = new Promise<number>((resolve) => {
    finish = resolve;
  });

  const server = http.createServer((request, response) => {
    const chunks: Buffer[] = [];
    request.on("data", (chunk) => chunks.push(chunk));
    request.on("end", async () => {
      let reply: ActionParams = { action: "Stop" };
      let stop = true;
      try {
        const event = decodeEvent(Buffer.concat(chunks).toString("utf-8"));
        reply = await policy(event);
        stop = reply.action === "Stop";
      } catch {
        // a failing policy answers Stop so the engine shuts down cleanly
        reply = { action: "Stop" };
        stop = true;
      }
      const body = JSON.stringify(reply);
      response.writeHead(200, {
        "Content-Type": "application/json",
        "Content-Length": Buffer.byteLength(body),
      });
      response.end(body);
      if (stop) {
        finish(served);
        server.close();
      } else {
        served += 1;
      }
    });
  });

  await new Promise<void>((resolve, reject) => {
    server.once("error", reject);
    server.listen(port, "127.0.0.1", resolve);
  });
  const address = server.address();
  const boundPort = typeof address === "object" && address ? address.port : port;

  return {
    port: boundPort,
    done,
    close: () =>
      new Promise<void>((resolve) => {
        server.close(() => resolve());
      }),
  };
}
