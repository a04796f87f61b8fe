// Envelope types for the engine's JSON-over-WebSocket protocol.

export interface SignalInfo {
  id: string;
  direction: "source" | "destination";
  value_kind: "continuous" | "pulse";
  range_min: number;
  range_max: number;
  unit: string;
  automatable: boolean;
}

export interface MappingInfo {
  id: number;
  sources: string[];
  destination: string;
  expression: string;
  enabled: boolean;
  smoothing_ms: number;
}

export interface AnnouncePayload {
  protocol_version: number;
  engine_version: string;
  signals: SignalInfo[];
  mappings: MappingInfo[];
  revision: number;
}

export interface ValuesPayload {
  frame_index: number;
  timestamp: number;
  revision: number;
  values: Record<string, number>;
}

export interface Envelope {
  kind: string;
  seq?: number;
  payload: Record<string, unknown>;
}

export function addMapCommand(
  seq: number,
  sources: string[],
  destination: string,
  expression: string,
  smoothingMs = 0,
): Envelope {
  return {
    kind: "add_map",
    seq,
    payload: { sources, destination, expression, smoothing_ms: smoothingMs },
  };
}

export function removeMapCommand(seq: number, id: number): Envelope {
  return { kind: "remove_map", seq, payload: { id } };
}

export function setExprCommand(seq: number, id: number, expression: string): Envelope {
  return { kind: "set_expr", seq, payload: { id, expression } };
}

export function setAutoCommand(seq: number, id: string, value: number): Envelope {
  return { kind: "set_auto", seq, payload: { id, value } };
}
