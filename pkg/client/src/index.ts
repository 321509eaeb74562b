export { Controller, ServerError, SessionGone } from "./controller.js";
export { ClientEvent, decodeEvent, extractRawMetadata } from "./events.js";
export { createPushListener } from "./pushListener.js";
export type { Policy, PushListener } from "./pushListener.js";
export type {
  ActionParams,
  AgentMetadata,
  EventMetadata,
  FrameBuffers,
  ObjectMetadata,
  SessionInit,
} from "./types.js";
