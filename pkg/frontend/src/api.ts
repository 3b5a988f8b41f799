// Thin fetch wrapper over the mission API.

import type { AskResponse, ChatMsg, MissionEventMsg, StateSnapshot } from "./core.js";

export async function askQuestion(
  base: string,
  missionId: string,
  text: string,
): Promise<AskResponse> {
  const resp = await fetch(`${base}/api/missions/${missionId}/ask`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ text }),
  });
  if (!resp.ok) {
    throw new Error(`ask failed: ${resp.status} ${await resp.text()}`);
  }
  return (await resp.json()) as AskResponse;
}

export async function fetchState(base: string, missionId: string): Promise<StateSnapshot> {
  const resp = await fetch(`${base}/api/missions/${missionId}/state`);
  if (!resp.ok) {
    throw new Error(`state failed: ${resp.status} ${await resp.text()}`);
  }
  return (await resp.json()) as StateSnapshot;
}

export async function fetchEvents(base: string, missionId: string): Promise<MissionEventMsg[]> {
  const resp = await fetch(`${base}/api/missions/${missionId}/events`);
  if (!resp.ok) {
    throw new Error(`events failed: ${resp.status} ${await resp.text()}`);
  }
  const body = (await resp.json()) as { events: MissionEventMsg[] };
  return body.events;
}

export async function fetchTranscript(base: string, missionId: string): Promise<ChatMsg[]> {
  const resp = await fetch(`${base}/api/missions/${missionId}/transcript`);
  if (!resp.ok) {
    throw new Error(`transcript failed: ${resp.status} ${await resp.text()}`);
  }
  const body = (await resp.json()) as { entries: ChatMsg[] };
  return body.entries;
}

export function streamUrl(base: string, missionId: string): string {
  return `${base}/api/missions/${missionId}/stream`;
}
