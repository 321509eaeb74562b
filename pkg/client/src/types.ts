/**
 * Wire-facing types. Metadata is deliberately schema-transparent: plain
 * mappings mirroring the server payload verbatim, so wire evolution never
 * breaks the client.
 */

export interface AgentMetadata {
  position: [number, number, number];
  rotationYaw: number;
  cameraHorizon: number;
  heldObjectId: string | null;
}

export interface ObjectMetadata {
  objectId: string;
  objectType: string;
  position: [number, number, number];
  rotationYaw: number;
  distance: number;
  visible: boolean;
  interactable: boolean;
  pickupable: boolean;
  isPickedUp: boolean;
  openable: boolean;
  isOpen: boolean;
  toggleable: boolean;
  isToggled: boolean;
  sliceable: boolean;
  isSliced: boolean;
  receptacle: boolean;
  parentReceptacle: string | null;
  receptacleObjectIds: string[];
  mass: number;
  [key: string]: unknown;
}

export interface EventMetadata {
  sceneName: string;
  screenWidth: number;
  screenHeight: number;
  lastAction: string;
  lastActionSuccess: boolean;
  errorCode: string;
  errorMessage: string;
  agent: AgentMetadata;
  objects: ObjectMetadata[];
  [key: string]: unknown;
}

/** Discrete action request; extra parameters ride through untouched. */
export interface ActionParams {
  action: string;
  objectId?: string;
  receptacleId?: string;
  magnitude?: number;
  direction?: [number, number, number];
  position?: [number, number, number];
  rotation?: number;
  horizon?: number;
  seed?: number;
  agentId?: number;
  gridSize?: number;
  visibilityDistance?: number;
  width?: number;
  height?: number;
  renderDepth?: boolean;
  renderInstanceIds?: boolean;
  [key: string]: unknown;
}

export interface FrameBuffers {
  width: number;
  height: number;
  /** RGB24, row-major, top row first; length = width * height * 3. */
  rgb: Uint8Array;
  /** Meters, row-major; present when the session renders depth. */
  depth?: Float32Array;
  /** Indices into idTable, -1 = background. */
  instanceIds?: Int32Array;
  idTable?: string[];
}

export interface SessionInit {
  gridSize?: number;
  visibilityDistance?: number;
  width?: number;
  height?: number;
  renderDepth?: boolean;
  renderInstanceIds?: boolean;
  seed?: number;
}
