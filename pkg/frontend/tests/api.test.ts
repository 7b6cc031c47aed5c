import { describe, expect, it } from "vitest";

import { ApiError, createClient, type FetchLike } from "../src/api.js";

function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("service client", () => {
  it("posts predict requests to the configured base URL", async () => {
    let seenUrl = "";
    let seenBody: any = null;
    const fetchImpl: FetchLike = async (url, init) => {
      seenUrl = url;
      seenBody = JSON.parse(String(init?.body));
      return jsonResponse(200, { sr: 0.9, threshold_mm: 6.41 });
    };
    const client = createClient("http://example.test:8800/", fetchImpl);
    const doc = await client.predict({
      size_mm: 2.339,
      margin_mm: 0,
      edge: "left",
      preset: "pixel6a-left-index",
    });
    expect(seenUrl).toBe("http://example.test:8800/predict");
    expect(seenBody.size_mm).toBe(2.339);
    expect(seenBody.preset).toBe("pixel6a-left-index");
    expect(doc.sr).toBe(0.9);
  });

  it("surfaces field-level 400 messages", async () => {
    const fetchImpl: FetchLike = async () =>
      jsonResponse(400, { errors: [{ field: "size_mm", message: "must be positive" }] });
    const client = createClient("http://example.test", fetchImpl);
    await expect(
      client.predict({ size_mm: -1, margin_mm: 0, edge: "left", preset: "p" })
    ).rejects.toMatchObject({
      status: 400,
      fieldErrors: [{ field: "size_mm", message: "must be positive" }],
    });
  });

  it("surfaces 404 for unknown presets", async () => {
    const fetchImpl: FetchLike = async () => jsonResponse(404, { detail: "unknown preset: nope" });
    const client = createClient("http://example.test", fetchImpl);
    const failure = client.predict({ size_mm: 1, margin_mm: 0, edge: "left", preset: "nope" });
    await expect(failure).rejects.toBeInstanceOf(ApiError);
    await expect(
      client.predict({ size_mm: 1, margin_mm: 0, edge: "left", preset: "nope" })
    ).rejects.toMatchObject({ status: 404, message: "unknown preset: nope" });
  });

  it("reports health as false when the service is unreachable", async () => {
    const fetchImpl: FetchLike = async () => {
      throw new Error("connection refused");
    };
    const client = createClient("http://example.test", fetchImpl);
    expect(await client.health()).toBe(false);
  });

  it("lists presets", async () => {
    const fetchImpl: FetchLike = async () =>
      jsonResponse(200, {
        presets: [
          { name: "a", device: "", edge: "left", axis: "x", units: "mm", spec_version: "1.0" },
        ],
      });
    const client = createClient("http://example.test", fetchImpl);
    const presets = await client.presets();
    expect(presets.map((p) => p.name)).toEqual(["a"]);
  });

  it("unwraps density curves", async () => {
    const fetchImpl: FetchLike = async () =>
      jsonResponse(200, { curve: [[0, 0.1], [1, 0.2]] });
    const client = createClient("http://example.test", fetchImpl);
    const curve = await client.curve({ xi: 0, omega: 1, alpha: 0 }, 2);
    expect(curve).toEqual([
      [0, 0.1],
      [1, 0.2],
    ]);
  });
});
