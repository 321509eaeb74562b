/**
 * Client-side throughput probe: end-to-end actions per second through the
 * HTTP interface (includes transport and decode cost, unlike the engine's
 * own bench which measures the simulation alone).
 *
 * Usage: node dist/examples/bench_client.js [host] [port] [steps] [width]
 */

import { Controller } from "../src/index.js";

const host = process.argv[2] ?? "127.0.0.1";
const port = Number(process.argv[3] ?? process.env.HEARTH_PORT ?? 8270);
const steps = Number(process.argv[4] ?? 200);
const width = Number(process.argv[5] ?? 300);

async function main(): Promise<void> {
  const controller = await Controller.start(host, port, 17, { width, height: width });
  const start = performance.now();
  for (let i = 0; i < steps; i++) {
    await controller.step({ action: i % 4 === 3 ? "RotateRight" : "MoveAhead" });
  }
  const seconds = (performance.now() - start) / 1000;
  console.log(
    `${steps} steps at ${width}x${width} in ${seconds.toFixed(2)} s -> ` +
      `${(steps / seconds).toFixed(1)} actions/s end-to-end`,
  );
  await controller.close();
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
