/**
 * Scripted kitchen tour: walk until furniture comes into view, look down,
 * and try to interact with whatever is reachable.
 *
 * Usage: node dist/examples/scripted_kitchen_tour.js [host] [port]
 */

import { Controller } from "../src/index.js";
import type { ObjectMetadata } from "../src/index.js";

const host = process.argv[2] ?? "127.0.0.1";
const port = Number(process.argv[3] ?? process.env.HEARTH_PORT ?? 8270);

async function main(): Promise<void> {
  const controller = await Controller.start(host, port, 17);
  let event = controller.initialEvent;

  const interactables = () => event.metadata.objects.filter((o: ObjectMetadata) => o.interactable);
  const interesting = (o: ObjectMetadata) =>
    o.openable || o.toggleable || o.pickupable || o.receptacleObjectIds.length > 0;

  // sweep the room: turn, walk until blocked, repeat, until something
  // actionable is in reach
  event = await controller.step({ action: "LookDown" });
  outer: for (let leg = 0; leg < 8; leg++) {
    for (let i = 0; i < 10; i++) {
      event = await controller.step({ action: "MoveAhead" });
      if (interactables().some(interesting)) break outer;
      if (!event.metadata.lastActionSuccess) break;
    }
    event = await controller.step({ action: leg % 2 ? "RotateLeft" : "RotateRight" });
    if (interactables().some(interesting)) break;
  }

  for (const target of interactables()) {
    if (target.openable && !target.isOpen) {
      event = await controller.step({ action: "OpenObject", objectId: target.objectId });
      console.log(`OpenObject ${target.objectId}: ${event.metadata.errorCode}`);
    } else if (target.toggleable) {
      event = await controller.step({ action: "ToggleObjectOn", objectId: target.objectId });
      console.log(`ToggleObjectOn ${target.objectId}: ${event.metadata.errorCode}`);
    } else if (target.receptacle && target.receptacleObjectIds.length > 0) {
      console.log(`${target.objectId} contains: ${target.receptacleObjectIds.join(", ")}`);
      const itemId = target.receptacleObjectIds[0];
      event = await controller.step({ action: "PickupObject", objectId: itemId });
      console.log(`PickupObject ${itemId}: ${event.metadata.errorCode}`);
    } else if (target.pickupable && event.metadata.agent.heldObjectId === null) {
      event = await controller.step({ action: "PickupObject", objectId: target.objectId });
      console.log(`PickupObject ${target.objectId}: ${event.metadata.errorCode}`);
    }
  }
  console.log(`holding: ${event.metadata.agent.heldObjectId ?? "(nothing)"}`);
  await controller.close();
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
