import { SessionApp } from "./app";
import { SessionClient } from "./api";

declare global {
  interface Window {
    COSPAR_API_BASE?: string;
  }
}

function apiBase(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("api") ?? window.COSPAR_API_BASE ?? "";
}

async function start(): Promise<void> {
  const client = new SessionClient(apiBase());
  const elements = {
    card: document.getElementById("card")!,
    chart: document.getElementById("chart")!,
    history: document.getElementById("history")!,
    status: document.getElementById("status")!,
  };
  const params = new URLSearchParams(window.location.search);
  let sessionId = params.get("session");
  if (!sessionId) {
    const preset = params.get("preset") ?? "step-length-1d";
    const label = params.get("label") ?? "";
    const view = await client.createSession(preset, label);
    sessionId = view.id;
    params.set("session", sessionId);
    window.history.replaceState(null, "", `?${params.toString()}`);
  }
  const app = new SessionApp(client, elements, sessionId);
  await app.refresh();
}

start().catch((error) => {
  const status = document.getElementById("status");
  if (status) status.textContent = `failed to start: ${error}`;
});
