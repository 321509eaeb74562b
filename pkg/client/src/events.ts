/**
 * Event decoding. Frame buffers travel base64; metadata is surfaced both
 * parsed and as the exact raw bytes so streams can be compared across
 * transports without re-serialization drift.
 */

import type { EventMetadata, FrameBuffers } from "./types.js";

export class ClientEvent {
  readonly frame: FrameBuffers | null;
  readonly metadata: EventMetadata;
  /** The metadata value exactly as it appeared on the wire. */
  readonly rawMetadata: string;

  constructor(frame: FrameBuffers | null, metadata: EventMetadata, rawMetadata: string) {
    this.frame = frame;
    this.metadata = metadata;
    this.rawMetadata = rawMetadata;
  }

  /** [height, width, 3] of the RGB frame. */
  get frameShape(): [number, number, number] | null {
    if (!this.frame) return null;
    return [this.frame.height, this.frame.width, 3];
  }
}

const META_KEY = '"metadata":';

/**
 * Extract the raw metadata JSON text. The server's canonical encoding
 * places `metadata` as the final top-level key, so its value spans from
 * the key to the closing brace of the body.
 */
export function extractRawMetadata(body: string): string {
  const idx = body.lastIndexOf(META_KEY);
  if (idx < 0 || !body.trimEnd().endsWith("}")) {
    throw new Error("event body has no metadata field");
  }
  const end = body.lastIndexOf("}");
  const raw = body.slice(idx + META_KEY.length, end);
  JSON.parse(raw); // verify the slice is a complete value
  return raw;
}

function b64Bytes(value: string): Uint8Array {
  return new Uint8Array(Buffer.from(value, "base64"));
}

export function decodeEvent(body: string): ClientEvent {
  let parsed: Record<string, unknown>;
  try {
    parsed = JSON.parse(body) as Record<string, unknown>;
  } catch (err) {
    throw new Error(`event body is not valid JSON: ${err}`);
  }
  if (typeof parsed !== "object" || parsed === null || !("metadata" in parsed)) {
    throw new Error("event body missing metadata");
  }
  const rawMetadata = extractRawMetadata(body);
  let frame: FrameBuffers | null = null;
  if ("frame_b64" in parsed) {
    const width = Number(parsed.width);
    const height = Number(parsed.height);
    if (parsed.format !== "RGB24") {
      throw new Error(`unknown frame format ${String(parsed.format)}`);
    }
    const rgb = b64Bytes(String(parsed.frame_b64));
    if (rgb.length !== width * height * 3) {
      throw new Error(`frame length ${rgb.length} != ${width}*${height}*3`);
    }
    frame = { width, height, rgb };
    if (typeof parsed.depth_b64 === "string") {
      const raw = b64Bytes(parsed.depth_b64);
      frame.depth = new Float32Array(raw.buffer, raw.byteOffset, raw.byteLength / 4);
    }
    if (typeof parsed.ids_b64 === "string") {
      const raw = b64Bytes(parsed.ids_b64);
      frame.instanceIds = new Int32Array(raw.buffer, raw.byteOffset, raw.byteLength / 4);
      frame.idTable = (parsed.ids_table as string[]) ?? [];
    }
  }
  return new ClientEvent(frame, parsed.metadata as EventMetadata, rawMetadata);
}
