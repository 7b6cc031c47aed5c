/** DOM wiring for the playground page. All numbers shown come from service
 * responses routed through the pure view-model in playground.ts.
 */

import { createClient, type Edge } from "./api.js";
import { DEFAULT_BASE_URL } from "./config.js";
import {
  applyFailure,
  applyResponse,
  beginRequest,
  debounce,
  initialState,
  renderPrediction,
  renderSweep,
  runMarginSweep,
  setMargin,
  setSize,
  sweepValues,
  type PlaygroundState,
} from "./playground.js";

const SWEEP_STEP_MM = 0.25;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function polyline(points: [number, number][], width: number, height: number): string {
  if (points.length === 0) return "";
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(0, ...ys);
  const yMax = Math.max(...ys) || 1;
  return points
    .map(([x, y]) => {
      const px = ((x - xMin) / (xMax - xMin || 1)) * width;
      const py = height - ((y - yMin) / (yMax - yMin || 1)) * height;
      return `${px.toFixed(1)},${py.toFixed(1)}`;
    })
    .join(" ");
}

export function start(): void {
  const client = createClient(
    new URLSearchParams(window.location.search).get("service") ?? DEFAULT_BASE_URL
  );
  let state: PlaygroundState = initialState("pixel6a-left-index");

  const sizeInput = byId<HTMLInputElement>("size");
  const marginInput = byId<HTMLInputElement>("margin");
  const edgeSelect = byId<HTMLSelectElement>("edge");
  const presetSelect = byId<HTMLSelectElement>("preset");
  const compareToggle = byId<HTMLInputElement>("compare");
  const unlockToggle = byId<HTMLInputElement>("unlock");

  function paint(): void {
    const view = renderPrediction(state);
    byId("size-value").textContent = `${state.sizeMm.toFixed(2)} mm`;
    byId("margin-value").textContent = `${state.marginMm.toFixed(2)} mm`;
    if (!view) return;
    byId("sr").textContent = view.srText;
    byId("gamma1").textContent = view.gamma1Text;
    byId("sigma").textContent = view.sigmaText;
    byId("mu").textContent = view.muText;
    byId("regime").textContent = view.regime;
    byId("threshold").textContent = `${view.thresholdMm.toFixed(2)} mm`;
    byId("baseline").textContent = view.baselineSrText ?? "—";
    byId("extrapolation").hidden = !view.extrapolation;
    const banner = byId("banner");
    banner.hidden = view.banner === null;
    banner.textContent = view.banner ?? "";
    if (view.curve) {
      byId("density-line").setAttribute("points", polyline(view.curve, 420, 140));
    }
  }

  async function refresh(): Promise<void> {
    const begun = beginRequest(state);
    state = begun.state;
    try {
      const response = await client.predict({
        size_mm: state.sizeMm,
        margin_mm: state.marginMm,
        edge: state.edge,
        preset: state.preset,
        curve_points: 201,
      });
      state = applyResponse(state, begun.token, response);
    } catch (err) {
      const unreachable = !(err instanceof Error && err.name === "ApiError");
      state = applyFailure(state, begun.token, err instanceof Error ? err.message : String(err), unreachable);
    }
    paint();
  }

  async function refreshSweep(): Promise<void> {
    const margins = sweepValues(state.envelope.marginMinMm, state.envelope.marginMaxMm, SWEEP_STEP_MM);
    const points = await runMarginSweep(client, state, margins);
    const sweep = renderSweep(points, state.sizeMm);
    byId("sweep-line").setAttribute("points", polyline(sweep.curve, 420, 140));
    byId("threshold-marker").textContent =
      sweep.thresholdMarker === null ? "—" : `${sweep.thresholdMarker.toFixed(2)} mm`;
    byId("sweep-failures").textContent =
      sweep.failures.length > 0 ? `${sweep.failures.length} points failed` : "";
  }

  const debouncedRefresh = debounce(() => {
    void refresh();
  }, 150);
  const debouncedSweep = debounce(() => {
    void refreshSweep();
  }, 400);

  sizeInput.addEventListener("input", () => {
    state = setSize(state, Number(sizeInput.value));
    paint();
    debouncedRefresh();
    debouncedSweep();
  });
  marginInput.addEventListener("input", () => {
    state = setMargin(state, Number(marginInput.value));
    paint();
    debouncedRefresh();
  });
  edgeSelect.addEventListener("change", () => {
    state = { ...state, edge: edgeSelect.value as Edge };
    debouncedRefresh();
    debouncedSweep();
  });
  presetSelect.addEventListener("change", () => {
    state = { ...state, preset: presetSelect.value };
    debouncedRefresh();
    debouncedSweep();
  });
  compareToggle.addEventListener("change", () => {
    state = { ...state, compareBaseline: compareToggle.checked };
    paint();
  });
  unlockToggle.addEventListener("change", () => {
    state = { ...state, allowExtrapolation: unlockToggle.checked };
    paint();
  });

  void (async () => {
    const reachable = await client.health();
    if (!reachable) {
      state = { ...state, serviceReachable: false };
    } else {
      const presets = await client.presets();
      presetSelect.innerHTML = "";
      for (const p of presets) {
        const option = document.createElement("option");
        option.value = p.name;
        option.textContent = `${p.name} (${p.edge})`;
        presetSelect.append(option);
      }
      presetSelect.value = state.preset;
    }
    await refresh();
    await refreshSweep();
  })();
}

if (typeof document !== "undefined" && document.getElementById("playground")) {
  start();
}
