/** Thin HTTP client for the prediction service.
 *
 * The playground performs no model math: every number it shows comes out of
 * one of these responses.
 */

export type Edge = "left" | "right" | "top" | "bottom";

export interface ShapeParams {
  xi: number;
  omega: number;
  alpha: number;
}

export interface PredictRequest {
  size_mm: number;
  margin_mm: number;
  edge: Edge;
  preset: string;
  curve_points?: number;
}

export interface PredictResponse {
  sr: number;
  gamma1: number;
  sigma_mm: number;
  mu_mm: number;
  shape: ShapeParams;
  regime: "skewed" | "gaussian";
  threshold_mm: number;
  gaussian_sr: number;
  curve?: [number, number][];
}

export interface PresetInfo {
  name: string;
  device: string;
  edge: string;
  axis: string;
  units: string;
  spec_version: string;
}

export interface FieldError {
  field: string;
  message: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly fieldErrors: FieldError[];

  constructor(status: number, message: string, fieldErrors: FieldError[] = []) {
    super(message);
    this.status = status;
    this.fieldErrors = fieldErrors;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function throwApiError(response: Response): Promise<never> {
  let fieldErrors: FieldError[] = [];
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (Array.isArray(body.errors)) {
      fieldErrors = body.errors;
      message = fieldErrors.map((e) => `${e.field}: ${e.message}`).join("; ");
    } else if (typeof body.detail === "string") {
      message = body.detail;
    }
  } catch {
    // non-JSON error body; keep the status message
  }
  throw new ApiError(response.status, message, fieldErrors);
}

export interface Client {
  health(): Promise<boolean>;
  presets(): Promise<PresetInfo[]>;
  predict(request: PredictRequest): Promise<PredictResponse>;
  curve(shape: ShapeParams, points?: number): Promise<[number, number][]>;
}

export function createClient(baseUrl: string, fetchImpl: FetchLike = fetch): Client {
  const url = (path: string) => `${baseUrl.replace(/\/$/, "")}${path}`;
  const post = async (path: string, body: unknown) => {
    const response = await fetchImpl(url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) await throwApiError(response);
    return response.json();
  };
  return {
    async health() {
      try {
        const response = await fetchImpl(url("/health"));
        return response.ok;
      } catch {
        return false;
      }
    },
    async presets() {
      const response = await fetchImpl(url("/presets"));
      if (!response.ok) await throwApiError(response);
      return (await response.json()).presets as PresetInfo[];
    },
    predict(request: PredictRequest) {
      return post("/predict", request) as Promise<PredictResponse>;
    },
    async curve(shape: ShapeParams, points = 201) {
      const body = await post("/curve", { shape, points });
      return body.curve as [number, number][];
    },
  };
}
