import { beforeEach, describe, expect, it } from "vitest";

import type { WhatIfOverrides, WhatIfReport } from "../src/types.js";
import { WhatIfPanel } from "../src/whatif.js";
import { case2Result, whatIfReport } from "./fixtures.js";

interface Pending {
  overrides: WhatIfOverrides;
  resolve: (report: WhatIfReport) => void;
  reject: (error: Error) => void;
}

class ManualClient {
  pending: Pending[] = [];

  whatif(_roundId: string, overrides: WhatIfOverrides): Promise<WhatIfReport> {
    return new Promise((resolve, reject) => {
      this.pending.push({ overrides, resolve, reject });
    });
  }

  settle(report: WhatIfReport): void {
    const next = this.pending.shift();
    if (!next) throw new Error("nothing pending");
    next.resolve(report);
  }

  fail(): void {
    const next = this.pending.shift();
    if (!next) throw new Error("nothing pending");
    next.reject(new Error("connection refused"));
  }
}

function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

describe("WhatIfPanel", () => {
  let root: HTMLElement;
  let client: ManualClient;
  let panel: WhatIfPanel;

  beforeEach(() => {
    document.body.innerHTML = "<div id='panel'></div>";
    root = document.getElementById("panel") as HTMLElement;
    client = new ManualClient();
    panel = new WhatIfPanel(root, client, "round-0001", case2Result());
  });

  it("shows the service-provided systemic risk initially", () => {
    expect(root.querySelector(".sr-value")!.textContent).toBe("0.38");
  });

  it("renders a slider per valued non-root node", () => {
    const rows = [...root.querySelectorAll(".slider-row")].map(
      (el) => (el as HTMLElement).dataset.node,
    );
    expect(rows).toEqual(["C1", "C2"]);
  });

  it("keeps at most one request in flight, latest wins", async () => {
    panel.setSlider("C1", 0.6);
    await tick();
    expect(client.pending).toHaveLength(1);

    // two more changes while the first request is still running
    panel.setSlider("C1", 0.7);
    panel.setSlider("C1", 0.9);
    await tick();
    expect(client.pending).toHaveLength(1);

    client.settle(whatIfReport(0.375, 0.4, { C1: 0.1 }));
    await tick();
    // the queued (latest) override fires exactly once
    expect(client.pending).toHaveLength(1);
    expect(client.pending[0].overrides.nodes).toEqual({ C1: 0.9 });

    client.settle(whatIfReport(0.375, 0.525, { C1: 0.4 }));
    await panel.idle();
    expect(root.querySelector(".sr-value")!.textContent).toBe("0.53");
    expect(root.querySelector(".sr-delta")!.textContent).toBe("+0.15");
  });

  it("applies delta badges from the service report", async () => {
    panel.setSlider("C1", 0.9);
    await tick();
    client.settle(whatIfReport(0.375, 0.525, { C1: 0.4 }));
    await panel.idle();
    const badge = root.querySelector(
      ".slider-row[data-node='C1'] .delta-badge",
    )!;
    expect(badge.textContent).toBe("+0.40");
  });

  it("marks values stale when the service is unreachable", async () => {
    panel.setSlider("C1", 0.9);
    await tick();
    client.fail();
    await panel.idle();
    const stale = root.querySelector(".stale-badge") as HTMLElement;
    expect(stale.hidden).toBe(false);
    // last good number retained
    expect(root.querySelector(".sr-value")!.textContent).toBe("0.38");
  });

  it("reset returns sliders to the baseline and reports zero delta", async () => {
    panel.setSlider("C1", 0.9);
    await tick();
    client.settle(whatIfReport(0.375, 0.525, { C1: 0.4 }));
    await panel.idle();

    panel.reset();
    await tick();
    expect(client.pending[0].overrides.nodes).toEqual({});
    client.settle(whatIfReport(0.375, 0.375, { C1: 0 }));
    await panel.idle();
    expect(root.querySelector(".sr-delta")!.textContent).toBe("+0.00");
  });

  it("sends the selected horizon with the request", async () => {
    const select = root.querySelector("select.horizon") as HTMLSelectElement;
    select.value = "1";
    select.dispatchEvent(new Event("change"));
    await tick();
    expect(client.pending[0].overrides.horizon).toBe(1);
  });
});
