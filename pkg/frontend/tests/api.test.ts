import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { mockTransport, RUN } from "./mock.js";
import type { ProgressEvent } from "../src/types.js";

describe("ApiClient", () => {
  it("surfaces server detail messages as ApiError", async () => {
    const { fetch } = mockTransport();
    const api = new ApiClient("http://mock", fetch);
    await expect(api.getRun("nope")).rejects.toThrowError(ApiError);
    await expect(api.getRun("nope")).rejects.toThrow(/unknown run/);
  });

  it("parses the SSE progress stream event by event", async () => {
    const { fetch } = mockTransport();
    const api = new ApiClient("http://mock", fetch);
    const events: ProgressEvent[] = [];
    await api.progress(RUN.run_id, (e) => events.push(e));
    expect(events.length).toBe(2);
    expect(events[0].completed).toBeLessThanOrEqual(events[1].completed);
    expect(events[1].completed).toBe(events[1].total);
  });

  it("waitForRun resolves once the run is done", async () => {
    const { fetch } = mockTransport();
    const api = new ApiClient("http://mock", fetch);
    const record = await api.waitForRun(RUN.run_id, 1000, 10);
    expect(record.status).toBe("done");
  });
});
