// Console state as a pure reducer over the protocol message history:
// replaying a recorded event log reproduces identical state.

import type {
  AnnouncePayload,
  Envelope,
  MappingInfo,
  SignalInfo,
  ValuesPayload,
} from "./protocol.js";

export interface ConsoleState {
  connected: boolean;
  protocolVersion: number | null;
  signals: SignalInfo[];
  mappings: MappingInfo[];
  revision: number;
  values: Record<string, number>;
  frameIndex: number;
  lastValuesAt: number; // engine timestamp of the last values envelope
  pending: Envelope[]; // sent commands not yet acked
  errors: { seq: number | null; message: string }[];
}

export function initialState(): ConsoleState {
  return {
    connected: false,
    protocolVersion: null,
    signals: [],
    mappings: [],
    revision: 0,
    values: {},
    frameIndex: -1,
    lastValuesAt: -1,
    pending: [],
    errors: [],
  };
}

export type ConsoleEvent =
  | { type: "open" }
  | { type: "close" }
  | { type: "sent"; envelope: Envelope }
  | { type: "message"; envelope: Envelope };

export function reduce(state: ConsoleState, event: ConsoleEvent): ConsoleState {
  switch (event.type) {
    case "open":
      // state is rebuilt solely from the announce that follows
      return { ...initialState(), connected: true };
    case "close":
      return { ...state, connected: false };
    case "sent":
      return { ...state, pending: [...state.pending, event.envelope] };
    case "message":
      return onMessage(state, event.envelope);
  }
}

export function replay(events: ConsoleEvent[]): ConsoleState {
  return events.reduce(reduce, initialState());
}

function onMessage(state: ConsoleState, env: Envelope): ConsoleState {
  if (env.kind === "announce") {
    const p = env.payload as unknown as AnnouncePayload;
    return {
      ...state,
      connected: true,
      protocolVersion: p.protocol_version,
      signals: p.signals,
      mappings: p.mappings,
      revision: p.revision,
    };
  }
  if (env.kind === "values") {
    const p = env.payload as unknown as ValuesPayload;
    return {
      ...state,
      values: { ...state.values, ...p.values },
      frameIndex: p.frame_index,
      revision: Math.max(state.revision, p.revision),
      lastValuesAt: p.timestamp,
    };
  }
  if (env.kind === "error") {
    const seq = env.seq ?? null;
    return {
      ...state,
      pending: state.pending.filter((c) => c.seq !== seq),
      errors: [
        ...state.errors,
        { seq, message: String((env.payload as { message?: string }).message ?? "unknown error") },
      ],
    };
  }
  if (env.kind === "ack") {
    const seq = env.seq ?? null;
    const matched = state.pending.find((c) => c.seq === seq);
    const payload = env.payload as { revision?: number; id?: number; value?: number };
    const next = {
      ...state,
      pending: state.pending.filter((c) => c.seq !== seq),
      revision: payload.revision ?? state.revision,
    };
    return matched ? applyAckedEdit(next, matched, payload) : next;
  }
  return state;
}

// The engine does not re-announce after edits; the table view is updated
// from the acked command. No mutation happens before the ack arrives.
function applyAckedEdit(
  state: ConsoleState,
  sent: Envelope,
  ack: { revision?: number; id?: number; value?: number },
): ConsoleState {
  const p = sent.payload as Record<string, unknown>;
  if (sent.kind === "add_map" && ack.id !== undefined) {
    const mapping: MappingInfo = {
      id: ack.id,
      sources: p.sources as string[],
      destination: p.destination as string,
      expression: p.expression as string,
      enabled: true,
      smoothing_ms: (p.smoothing_ms as number) ?? 0,
    };
    return { ...state, mappings: [...state.mappings, mapping] };
  }
  if (sent.kind === "remove_map") {
    return { ...state, mappings: state.mappings.filter((m) => m.id !== p.id) };
  }
  if (sent.kind === "set_expr") {
    return {
      ...state,
      mappings: state.mappings.map((m) =>
        m.id === p.id ? { ...m, expression: p.expression as string } : m,
      ),
    };
  }
  if (sent.kind === "set_auto") {
    const id = p.id as string;
    const value = ack.value ?? (p.value as number);
    return { ...state, values: { ...state.values, [id]: value } };
  }
  return state;
}

export function destinations(state: ConsoleState): SignalInfo[] {
  return state.signals.filter((s) => s.direction === "destination");
}

export function sources(state: ConsoleState): SignalInfo[] {
  return state.signals.filter((s) => s.direction === "source");
}
