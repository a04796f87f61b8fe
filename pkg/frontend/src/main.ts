// Browser entry point: connects to the engine's WebSocket, keeps all state
// in the pure reducer, and renders the catalog, mapping table, automatable
// sliders and the scene canvas.

import {
  addMapCommand,
  removeMapCommand,
  setAutoCommand,
  setExprCommand,
  type Envelope,
} from "./protocol.js";
import {
  destinations,
  initialState,
  reduce,
  sources,
  type ConsoleState,
} from "./state.js";
import { SceneModel } from "./scene.js";

const WS_URL = `ws://${location.host}/ws`;

let state: ConsoleState = initialState();
let seq = 0;
let ws: WebSocket | null = null;
const scene = new SceneModel();

function dispatchSend(env: Envelope): void {
  if (!ws || ws.readyState !== WebSocket.OPEN) return;
  ws.send(JSON.stringify(env));
  state = reduce(state, { type: "sent", envelope: env });
  renderControls();
}

function connect(): void {
  ws = new WebSocket(WS_URL);
  ws.onopen = () => {
    state = reduce(state, { type: "open" });
    renderControls();
  };
  ws.onclose = () => {
    state = reduce(state, { type: "close" });
    renderControls();
    setTimeout(connect, 1000);
  };
  ws.onmessage = (ev: MessageEvent<string>) => {
    const env = JSON.parse(ev.data) as Envelope;
    state = reduce(state, { type: "message", envelope: env });
    if (env.kind === "values") {
      scene.update(state.values, performance.now() / 1000);
      renderMeters();
    } else {
      renderControls();
    }
  };
}

// -- DOM rendering ----------------------------------------------------------

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function renderControls(): void {
  el("status").textContent = state.connected
    ? `connected (protocol v${state.protocolVersion}, revision ${state.revision})`
    : "disconnected";
  renderCatalog();
  renderMappings();
  renderAutomatables();
  renderErrors();
}

function renderCatalog(): void {
  const rows = state.signals
    .map(
      (s) => `<tr>
        <td><code>${s.id}</code></td><td>${s.direction}</td><td>${s.value_kind}</td>
        <td>[${s.range_min.toPrecision(3)}, ${s.range_max.toPrecision(3)}]</td>
        <td class="meter" data-signal="${s.id}"><span></span></td>
      </tr>`,
    )
    .join("");
  el("catalog").innerHTML =
    `<tr><th>signal</th><th>dir</th><th>kind</th><th>range</th><th>value</th></tr>${rows}`;
  renderMeters();
}

function renderMeters(): void {
  for (const cell of document.querySelectorAll<HTMLElement>("td.meter")) {
    const id = cell.dataset.signal ?? "";
    const sig = state.signals.find((s) => s.id === id);
    const value = state.values[id];
    const span = cell.querySelector("span");
    if (!sig || value === undefined || !span) continue;
    const width = sig.range_max > sig.range_min
      ? (value - sig.range_min) / (sig.range_max - sig.range_min)
      : 0;
    span.style.width = `${Math.min(100, Math.max(0, width * 100))}%`;
    cell.title = value.toPrecision(4);
  }
  el("frame").textContent = state.frameIndex >= 0 ? `frame ${state.frameIndex}` : "";
}

function renderMappings(): void {
  const rows = state.mappings
    .map(
      (m) => `<tr data-id="${m.id}">
        <td>${m.id}</td>
        <td><code>${m.sources.join(", ")}</code></td>
        <td><code>${m.destination}</code></td>
        <td><input class="expr" value="${m.expression.replace(/"/g, "&quot;")}"></td>
        <td><button class="apply">apply</button> <button class="remove">remove</button></td>
      </tr>`,
    )
    .join("");
  el("mappings").innerHTML =
    `<tr><th>id</th><th>sources</th><th>destination</th><th>expression</th><th></th></tr>${rows}`;
  for (const row of document.querySelectorAll<HTMLElement>("#mappings tr[data-id]")) {
    const id = Number(row.dataset.id);
    const input = row.querySelector<HTMLInputElement>("input.expr");
    row.querySelector(".apply")?.addEventListener("click", () => {
      if (input) dispatchSend(setExprCommand(seq++, id, input.value));
    });
    row.querySelector(".remove")?.addEventListener("click", () => {
      dispatchSend(removeMapCommand(seq++, id));
    });
  }
  const srcSel = el("new-source") as HTMLSelectElement;
  const dstSel = el("new-destination") as HTMLSelectElement;
  srcSel.innerHTML = sources(state)
    .map((s) => `<option value="${s.id}">${s.id}</option>`)
    .join("");
  dstSel.innerHTML = destinations(state)
    .map((s) => `<option value="${s.id}">${s.id}</option>`)
    .join("");
}

function renderAutomatables(): void {
  const autos = state.signals.filter((s) => s.automatable);
  el("automatables").innerHTML = autos
    .map(
      (s) => `<label>${s.id}
        <input type="range" min="${s.range_min}" max="${s.range_max}" step="0.01"
               value="${state.values[s.id] ?? s.range_min}" data-signal="${s.id}">
      </label>`,
    )
    .join("");
  for (const slider of document.querySelectorAll<HTMLInputElement>(
    "#automatables input[type=range]",
  )) {
    slider.addEventListener("change", () => {
      dispatchSend(setAutoCommand(seq++, slider.dataset.signal ?? "", Number(slider.value)));
    });
  }
}

function renderErrors(): void {
  el("errors").innerHTML = state.errors
    .slice(-5)
    .map((e) => `<li>seq ${e.seq ?? "?"}: ${e.message}</li>`)
    .join("");
}

// -- scene canvas -----------------------------------------------------------

function drawScene(canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const now = performance.now() / 1000;
  const f = scene.frame(now);
  const w = canvas.width;
  const h = canvas.height;
  const p = f.params;

  ctx.fillStyle = `rgba(4, 6, 16, ${1 - 0.6 * p["scene/fog.density"]})`;
  ctx.fillRect(0, 0, w, h);

  // stars drift horizontally
  const drift = (now * 40 * p["scene/stars.drift_speed"]) % w;
  ctx.fillStyle = "rgba(220, 228, 255, 0.7)";
  for (let i = 0; i < 60; i++) {
    const x = ((i * 137) % w + drift) % w;
    const y = (i * 71) % h;
    ctx.fillRect(x, y, 2, 2);
  }

  // central light
  const hue = 360 * p["scene/light.hue"];
  const intensity = p["scene/light.intensity"];
  const glow = ctx.createRadialGradient(w / 2, h / 2, 0, w / 2, h / 2, h * 0.45);
  glow.addColorStop(0, `hsla(${hue}, 80%, 60%, ${intensity})`);
  glow.addColorStop(1, "transparent");
  ctx.fillStyle = glow;
  ctx.fillRect(0, 0, w, h);

  // particle ring orbiting the light
  const count = Math.round(12 + 48 * p["scene/particles.emission_rate"]);
  const orbit = now * 4 * p["scene/camera.orbit_speed"];
  const radius = h * (0.18 + 0.22 * p["scene/camera.fov"]);
  const size = 2 + 14 * p["scene/particles.size"];
  ctx.fillStyle = `hsla(${hue}, 70%, 75%, 0.85)`;
  for (let i = 0; i < count; i++) {
    const a = orbit + (i / count) * 2 * Math.PI;
    const x = w / 2 + radius * Math.cos(a);
    const y = h / 2 + radius * Math.sin(a) * 0.6;
    ctx.beginPath();
    ctx.arc(x, y, size / 2, 0, 2 * Math.PI);
    ctx.fill();
  }

  el("weight").textContent = `engine influence ${(100 * f.engineWeight).toFixed(0)}%`;
}

function start(): void {
  el("add-form").addEventListener("submit", (ev) => {
    ev.preventDefault();
    const srcSel = el("new-source") as HTMLSelectElement;
    const dstSel = el("new-destination") as HTMLSelectElement;
    const exprInput = el("new-expression") as HTMLInputElement;
    dispatchSend(addMapCommand(seq++, [srcSel.value], dstSel.value, exprInput.value));
  });
  connect();
  const canvas = el("scene") as HTMLCanvasElement;
  const tick = () => {
    drawScene(canvas);
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);
}

start();
