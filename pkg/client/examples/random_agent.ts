/**
 * Random navigation agent: connect, wander, report what it saw.
 *
 * Usage: node dist/examples/random_agent.js [host] [port] [scene] [steps]
 */

import { Controller } from "../src/index.js";

const host = process.argv[2] ?? "127.0.0.1";
const port = Number(process.argv[3] ?? process.env.HEARTH_PORT ?? 8270);
const scene = Number(process.argv[4] ?? 17);
const steps = Number(process.argv[5] ?? 50);

const MOVES = ["MoveAhead", "MoveBack", "MoveLeft", "MoveRight", "RotateLeft", "RotateRight"];

async function main(): Promise<void> {
  const controller = await Controller.start(host, port, scene);
  console.log(`session ${controller.sessionId}: ${controller.initialEvent.metadata.sceneName}`);
  const seen = new Set<string>();
  let blocked = 0;
  for (let i = 0; i < steps; i++) {
    const action = MOVES[Math.floor(Math.random() * MOVES.length)];
    const event = await controller.step({ action });
    if (!event.metadata.lastActionSuccess) blocked += 1;
    for (const obj of event.metadata.objects) {
      if (obj.visible) seen.add(obj.objectId);
    }
  }
  console.log(`${steps} steps, ${blocked} blocked, saw: ${[...seen].sort().join(", ") || "(nothing)"}`);
  await controller.close();
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
