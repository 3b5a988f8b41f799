// Browser layer: mission timeline on the left, chat panel on the right.
// All probability and band computation happens server-side; this file only
// renders what the service sends.

import { askQuestion, fetchEvents, fetchState, fetchTranscript, streamUrl } from "./api.js";
import {
  buildBadges,
  ChatMsg,
  formatClock,
  mergeHistory,
  MissionEventMsg,
  stateHeader,
  timelineEntry,
} from "./core.js";

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

let missionId: string | null = null;
let source: EventSource | null = null;

function setBanner(text: string, isError: boolean): void {
  const banner = $("banner");
  banner.textContent = text;
  banner.className = isError ? "banner error" : "banner";
}

function addTimelineRow(ev: MissionEventMsg): void {
  const entry = timelineEntry(ev);
  const row = document.createElement("li");
  row.className = "timeline-row";
  const clock = document.createElement("span");
  clock.className = "clock";
  clock.textContent = entry.clock;
  const kind = document.createElement("span");
  kind.className = "kind";
  kind.textContent = entry.kind;
  row.append(clock, kind);
  if (entry.detail) {
    const detail = document.createElement("span");
    detail.className = "detail";
    detail.textContent = entry.detail;
    row.append(detail);
  }
  $("timeline").append(row);
  row.scrollIntoView({ block: "nearest" });
}

function addChatRow(direction: "operator" | "system", text: string, msg?: ChatMsg): void {
  const row = document.createElement("div");
  row.className = `chat-row ${direction}`;
  const bubble = document.createElement("div");
  bubble.className = "bubble";
  bubble.textContent = text;
  row.append(bubble);
  if (msg && msg.items.length > 0) {
    const badges = document.createElement("div");
    badges.className = "badges";
    for (const badge of buildBadges(msg.items)) {
      const el = document.createElement("span");
      el.className = `badge band-${badge.band}`;
      el.textContent = badge.label;
      badges.append(el);
    }
    row.append(badges);
  }
  if (msg) {
    const when = document.createElement("div");
    when.className = "when";
    when.textContent = formatClock(msg.t);
    row.append(when);
  }
  $("chat").append(row);
  row.scrollIntoView({ block: "nearest" });
}

async function refreshHeader(): Promise<void> {
  if (!missionId) return;
  try {
    const state = await fetchState("", missionId);
    $("state-header").textContent = stateHeader(state);
  } catch {
    // Header refresh is best-effort; the stream will catch us up.
  }
}

function connect(id: string): void {
  missionId = id;
  source?.close();
  $("timeline").replaceChildren();
  $("chat").replaceChildren();

  // Subscribe first, buffer stream events until the history has rendered, so
  // a reconnect reproduces the full view from server data.
  let seeded = false;
  const buffered: MissionEventMsg[] = [];

  source = new EventSource(streamUrl("", id));
  source.addEventListener("mission_event", (raw) => {
    const ev = JSON.parse((raw as MessageEvent).data) as MissionEventMsg;
    if (seeded) {
      addTimelineRow(ev);
      void refreshHeader();
    } else {
      buffered.push(ev);
    }
  });
  source.addEventListener("chat", (raw) => {
    const msg = JSON.parse((raw as MessageEvent).data) as ChatMsg;
    addChatRow("operator", msg.question);
    addChatRow("system", msg.answer, msg);
  });
  source.onerror = () => {
    setBanner(`connection to mission ${id} lost - retrying`, true);
  };
  source.onopen = () => {
    setBanner(`connected to mission ${id}`, false);
  };

  void (async () => {
    try {
      const [history, transcript] = await Promise.all([
        fetchEvents("", id),
        fetchTranscript("", id),
      ]);
      for (const entry of transcript) {
        addChatRow("operator", entry.question);
        addChatRow("system", entry.answer, entry);
      }
      for (const ev of mergeHistory(history, buffered)) {
        addTimelineRow(ev);
      }
    } catch (err) {
      setBanner(`could not load mission ${id}: ${String(err)}`, true);
      for (const ev of buffered) {
        addTimelineRow(ev);
      }
    } finally {
      seeded = true;
    }
    void refreshHeader();
  })();

  const url = new URL(window.location.href);
  url.searchParams.set("mission", id);
  window.history.replaceState(null, "", url.toString());
}

async function sendQuestion(): Promise<void> {
  const input = $("question") as HTMLInputElement;
  const text = input.value.trim();
  if (!text || !missionId) return;
  input.value = "";
  try {
    await askQuestion("", missionId, text);
    // The chat event arrives over the stream, so nothing to render here.
  } catch (err) {
    input.value = text; // keep the question for retry
    addChatRow("system", `could not send question: ${String(err)}`);
  }
}

function init(): void {
  $("connect-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const id = ($("mission-id") as HTMLInputElement).value.trim();
    if (id) connect(id);
  });
  $("ask-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    void sendQuestion();
  });
  const fromUrl = new URL(window.location.href).searchParams.get("mission");
  if (fromUrl) {
    ($("mission-id") as HTMLInputElement).value = fromUrl;
    connect(fromUrl);
  } else {
    setBanner("enter a mission id to connect", false);
  }
}

document.addEventListener("DOMContentLoaded", init);
