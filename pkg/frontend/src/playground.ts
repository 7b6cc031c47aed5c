/** Pure view-model for the playground: state transitions, clamping,
 * response bookkeeping, and sweep assembly. No DOM, no model math —
 * every displayed number is copied from a service response.
 */

import type { Client, Edge, PredictResponse } from "./api.js";

/** Fitted envelope of the default presets (sizes and margins, mm). */
export interface Envelope {
  sizeMinMm: number;
  sizeMaxMm: number;
  marginMinMm: number;
  marginMaxMm: number;
}

export const DEFAULT_ENVELOPE: Envelope = {
  sizeMinMm: 1.56,
  sizeMaxMm: 7.798,
  marginMinMm: 0,
  marginMaxMm: 18.715,
};

export interface PlaygroundState {
  preset: string;
  sizeMm: number;
  marginMm: number;
  edge: Edge;
  compareBaseline: boolean;
  /** When true, out-of-envelope inputs are kept and badged instead of clamped. */
  allowExtrapolation: boolean;
  envelope: Envelope;
  lastResponse: PredictResponse | null;
  /** Inputs the last response was computed for; guards against stale display. */
  lastResponseInputs: { sizeMm: number; marginMm: number; edge: Edge; preset: string } | null;
  errorMessage: string | null;
  serviceReachable: boolean;
  /** Monotone token; only the response carrying the newest token renders. */
  requestToken: number;
}

export function initialState(preset: string, envelope: Envelope = DEFAULT_ENVELOPE): PlaygroundState {
  return {
    preset,
    sizeMm: 4.679,
    marginMm: 4.679,
    edge: "left",
    compareBaseline: false,
    allowExtrapolation: false,
    envelope,
    lastResponse: null,
    lastResponseInputs: null,
    errorMessage: null,
    serviceReachable: true,
    requestToken: 0,
  };
}

function clamp(value: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, value));
}

/** Apply a slider/input change, clamping to the envelope unless unlocked. */
export function setSize(state: PlaygroundState, sizeMm: number): PlaygroundState {
  const value = state.allowExtrapolation
    ? sizeMm
    : clamp(sizeMm, state.envelope.sizeMinMm, state.envelope.sizeMaxMm);
  return { ...state, sizeMm: value };
}

export function setMargin(state: PlaygroundState, marginMm: number): PlaygroundState {
  const value = state.allowExtrapolation
    ? marginMm
    : clamp(marginMm, state.envelope.marginMinMm, state.envelope.marginMaxMm);
  return { ...state, marginMm: value };
}

/** True when current inputs leave the preset's fitted envelope. */
export function isExtrapolating(state: PlaygroundState): boolean {
  const { envelope } = state;
  return (
    state.sizeMm < envelope.sizeMinMm ||
    state.sizeMm > envelope.sizeMaxMm ||
    state.marginMm < envelope.marginMinMm ||
    state.marginMm > envelope.marginMaxMm
  );
}

/** Issue a new request token, superseding any in-flight request. */
export function beginRequest(state: PlaygroundState): { state: PlaygroundState; token: number } {
  const token = state.requestToken + 1;
  return { state: { ...state, requestToken: token }, token };
}

/** Accept a response only if it carries the newest token. */
export function applyResponse(
  state: PlaygroundState,
  token: number,
  response: PredictResponse
): PlaygroundState {
  if (token !== state.requestToken) {
    return state; // superseded; a newer request is in flight or rendered
  }
  return {
    ...state,
    lastResponse: response,
    lastResponseInputs: {
      sizeMm: state.sizeMm,
      marginMm: state.marginMm,
      edge: state.edge,
      preset: state.preset,
    },
    errorMessage: null,
    serviceReachable: true,
  };
}

export function applyFailure(state: PlaygroundState, token: number, message: string, unreachable = false): PlaygroundState {
  if (token !== state.requestToken) {
    return state;
  }
  return { ...state, errorMessage: message, serviceReachable: !unreachable };
}

/** SR rendered as a percentage with one decimal, straight from the response. */
export function formatSrPercent(sr: number): string {
  return `${(sr * 100).toFixed(1)}%`;
}

export interface PredictionView {
  srText: string;
  gamma1Text: string;
  sigmaText: string;
  muText: string;
  regime: string;
  thresholdMm: number;
  baselineSrText: string | null;
  extrapolation: boolean;
  banner: string | null;
  curve: [number, number][] | null;
  targetBoundsMm: [number, number];
}

/** Project state into the displayed readouts; null until a response exists. */
export function renderPrediction(state: PlaygroundState): PredictionView | null {
  const r = state.lastResponse;
  if (r === null) {
    return null;
  }
  return {
    srText: formatSrPercent(r.sr),
    gamma1Text: r.gamma1.toFixed(3),
    sigmaText: `${r.sigma_mm.toFixed(3)} mm`,
    muText: `${r.mu_mm.toFixed(3)} mm`,
    regime: r.regime,
    thresholdMm: r.threshold_mm,
    baselineSrText: state.compareBaseline ? formatSrPercent(r.gaussian_sr) : null,
    extrapolation: isExtrapolating(state),
    banner: state.serviceReachable ? state.errorMessage : "service unreachable",
    curve: r.curve ?? null,
    targetBoundsMm: [-state.lastResponseInputs!.sizeMm / 2, state.lastResponseInputs!.sizeMm / 2],
  };
}

export interface SweepPoint {
  value: number;
  response: PredictResponse | null;
  failed: boolean;
}

export interface SweepView {
  /** (swept value, SR) for each successful point. */
  curve: [number, number][];
  /** Swept value nearest the model's regime threshold, or null outside the range. */
  thresholdMarker: number | null;
  failures: number[];
  singlePoint: boolean;
}

/** Evenly spaced sweep values from lo to hi inclusive. */
export function sweepValues(lo: number, hi: number, step: number): number[] {
  const out: number[] = [];
  for (let v = lo; v <= hi + 1e-9; v += step) {
    out.push(Number(v.toFixed(6)));
  }
  return out;
}

/** Run a margin sweep at the state's fixed size via the service. */
export async function runMarginSweep(
  client: Client,
  state: PlaygroundState,
  margins: number[]
): Promise<SweepPoint[]> {
  const points: SweepPoint[] = [];
  for (const margin of margins) {
    try {
      const response = await client.predict({
        size_mm: state.sizeMm,
        margin_mm: margin,
        edge: state.edge,
        preset: state.preset,
      });
      points.push({ value: margin, response, failed: false });
    } catch {
      points.push({ value: margin, response: null, failed: true });
    }
  }
  return points;
}

/** Assemble the sweep view; the threshold marker snaps to the swept value
 * nearest the service-reported threshold edge distance. The swept quantity
 * is the margin, so the marker compares margin + size/2 with threshold_mm.
 */
export function renderSweep(points: SweepPoint[], sizeMm: number): SweepView {
  const ok = points.filter((p) => p.response !== null);
  const curve: [number, number][] = ok.map((p) => [p.value, p.response!.sr]);
  let thresholdMarker: number | null = null;
  if (ok.length > 0) {
    const thresholdMm = ok[0].response!.threshold_mm;
    const targetMargin = thresholdMm - sizeMm / 2;
    let bestDistance = Infinity;
    for (const p of points) {
      const distance = Math.abs(p.value - targetMargin);
      if (distance < bestDistance) {
        bestDistance = distance;
        thresholdMarker = p.value;
      }
    }
    const lo = Math.min(...points.map((p) => p.value));
    const hi = Math.max(...points.map((p) => p.value));
    if (targetMargin < lo || targetMargin > hi) {
      thresholdMarker = null;
    }
  }
  return {
    curve,
    thresholdMarker,
    failures: points.filter((p) => p.failed).map((p) => p.value),
    singlePoint: curve.length === 1,
  };
}

/** Trailing-edge debounce with injectable timers so tests can drive time. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
  setTimer: (cb: () => void, ms: number) => number = (cb, ms) => setTimeout(cb, ms) as unknown as number,
  clearTimer: (id: number) => void = (id) => clearTimeout(id)
): (...args: A) => void {
  let pending: number | null = null;
  return (...args: A) => {
    if (pending !== null) {
      clearTimer(pending);
    }
    pending = setTimer(() => {
      pending = null;
      fn(...args);
    }, waitMs);
  };
}
