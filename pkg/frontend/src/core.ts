// Pure view logic for the operator client. Everything here is DOM-free so it
// can be unit-tested in node; main.ts is the thin browser layer on top.

export interface AnswerItem {
  id: string;
  probability: number;
  band: string;
  text: string;
}

export interface AskResponse {
  intent: string;
  behavior: string | null;
  answer: string;
  items: AnswerItem[];
}

export interface MissionEventMsg {
  t: number;
  kind: string;
  data: Record<string, unknown>;
}

export interface ChatMsg {
  t: number;
  question: string;
  intent: string;
  behavior: string | null;
  answer: string;
  items: AnswerItem[];
}

export interface StateSnapshot {
  clock: number;
  phase: string | null;
  vars: Record<string, unknown>;
  zones: string[];
}

export interface Badge {
  band: string; // verbatim from the service; the client never re-bands
  label: string;
}

export interface TimelineEntry {
  clock: string;
  kind: string;
  detail: string;
}

const BAND_LABELS: Record<string, string> = {
  high: "High",
  medium: "Medium",
  low: "Low",
};

export function bandLabel(band: string): string {
  return BAND_LABELS[band] ?? band;
}

export function formatClock(t: number): string {
  const rounded = Number.isInteger(t) ? t.toString() : t.toFixed(1);
  return `t=${rounded}s`;
}

export function summarizeData(data: Record<string, unknown>): string {
  return Object.entries(data)
    .map(([key, value]) => `${key}=${String(value)}`)
    .join(", ");
}

export function timelineEntry(ev: MissionEventMsg): TimelineEntry {
  return {
    clock: formatClock(ev.t),
    kind: ev.kind,
    detail: summarizeData(ev.data),
  };
}

// One badge per answer item: the band comes straight from the service.
export function buildBadges(items: AnswerItem[]): Badge[] {
  return items.map((item) => ({
    band: item.band,
    label: `${bandLabel(item.band)} ${Math.round(item.probability * 100)}%`,
  }));
}

export function stateHeader(state: StateSnapshot): string {
  const phase = state.phase ?? "unknown";
  const zones = state.zones.length ? ` | zones: ${state.zones.join(", ")}` : "";
  return `${formatClock(state.clock)} | phase ${phase}${zones}`;
}

// Reconnection seeding: the server's event history is the source of truth;
// stream messages buffered while it loaded are appended only if they are
// newer than the last historical event.
export function mergeHistory(
  history: MissionEventMsg[],
  buffered: MissionEventMsg[],
): MissionEventMsg[] {
  const maxT = history.length > 0 ? history[history.length - 1].t : -Infinity;
  return [...history, ...buffered.filter((ev) => ev.t > maxT)];
}

export interface SseMessage {
  event: string;
  data: string;
}

// Incremental parser for a text/event-stream body; used by the node smoke
// test (the browser layer uses EventSource instead).
export class SseParser {
  private buffer = "";

  feed(chunk: string): SseMessage[] {
    this.buffer += chunk;
    const messages: SseMessage[] = [];
    let boundary = this.buffer.indexOf("\n\n");
    while (boundary !== -1) {
      const block = this.buffer.slice(0, boundary);
      this.buffer = this.buffer.slice(boundary + 2);
      const message = parseBlock(block);
      if (message !== null) {
        messages.push(message);
      }
      boundary = this.buffer.indexOf("\n\n");
    }
    return messages;
  }
}

function parseBlock(block: string): SseMessage | null {
  let event = "message";
  const dataLines: string[] = [];
  for (const line of block.split("\n")) {
    if (line.startsWith("event: ")) {
      event = line.slice("event: ".length);
    } else if (line.startsWith("data: ")) {
      dataLines.push(line.slice("data: ".length));
    }
  }
  if (dataLines.length === 0) {
    return null;
  }
  return { event, data: dataLines.join("\n") };
}
