/**
 * What-if panel: one slider per node value, recomputed live by the
 * service. At most one request is in flight; while it runs, the latest
 * slider state is queued and only the newest result is ever applied
 * (latest wins). If the service becomes unreachable the panel keeps the
 * last good numbers and flags them stale.
 */

import { fmt, fmtDelta } from "./format.js";
import type { ResultDocument, WhatIfOverrides, WhatIfReport } from "./types.js";

export interface WhatIfClient {
  whatif(roundId: string, overrides: WhatIfOverrides): Promise<WhatIfReport>;
}

export class WhatIfPanel {
  private readonly doc: Document;
  private readonly baseline = new Map<string, number>();
  private readonly sliders = new Map<string, HTMLInputElement>();
  private readonly deltaBadges = new Map<string, HTMLElement>();
  private srValue: HTMLElement | null = null;
  private srDelta: HTMLElement | null = null;
  private staleBadge: HTMLElement | null = null;

  private horizon: number | null = null;
  private inflight = false;
  private queued: Record<string, number> | null = null;
  private generation = 0;
  /** resolves when no request is running and nothing is queued */
  private idleResolvers: (() => void)[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly client: WhatIfClient,
    private readonly roundId: string,
    private readonly base: ResultDocument,
  ) {
    this.doc = root.ownerDocument;
    this.render();
  }

  private render(): void {
    this.root.textContent = "";

    const header = this.doc.createElement("div");
    header.className = "whatif-header";
    const srLabel = this.doc.createElement("span");
    srLabel.textContent = `systemic risk (${this.base.root}): `;
    this.srValue = this.doc.createElement("strong");
    this.srValue.className = "sr-value";
    this.srValue.textContent = fmt(this.base.systemic_risk);
    this.srDelta = this.doc.createElement("span");
    this.srDelta.className = "sr-delta";
    this.srDelta.textContent = fmtDelta(0);
    this.staleBadge = this.doc.createElement("span");
    this.staleBadge.className = "stale-badge";
    this.staleBadge.hidden = true;
    this.staleBadge.textContent = "stale";
    header.append(srLabel, this.srValue, " ", this.srDelta, " ", this.staleBadge);

    const horizonLabel = this.doc.createElement("label");
    horizonLabel.textContent = " horizon ";
    const horizonSelect = this.doc.createElement("select");
    horizonSelect.className = "horizon";
    for (let h = 1; h <= Math.max(2, this.base.config.k + 1); h += 1) {
      const option = this.doc.createElement("option");
      option.value = String(h);
      option.textContent = `h=${h}`;
      horizonSelect.appendChild(option);
    }
    horizonSelect.value = String(this.base.config.k);
    horizonSelect.addEventListener("change", () => {
      this.horizon = Number(horizonSelect.value);
      this.schedule();
    });
    horizonLabel.appendChild(horizonSelect);
    header.appendChild(horizonLabel);

    const reset = this.doc.createElement("button");
    reset.className = "reset";
    reset.textContent = "reset";
    reset.addEventListener("click", () => this.reset());
    header.appendChild(reset);
    this.root.appendChild(header);

    const list = this.doc.createElement("div");
    list.className = "whatif-sliders";
    const rows = [...this.base.nodes].sort((a, b) =>
      a.level === b.level ? (a.id < b.id ? -1 : 1) : a.level - b.level,
    );
    for (const row of rows) {
      if (row.effective === null || row.id === this.base.root) continue;
      this.baseline.set(row.id, row.effective);
      const line = this.doc.createElement("div");
      line.className = "slider-row";
      line.dataset.node = row.id;
      const name = this.doc.createElement("span");
      name.className = "name";
      name.textContent = row.id;
      const slider = this.doc.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = "1";
      slider.step = "0.01";
      slider.value = String(row.effective);
      slider.addEventListener("input", () => this.schedule());
      const badge = this.doc.createElement("span");
      badge.className = "delta-badge";
      badge.textContent = fmtDelta(0);
      this.sliders.set(row.id, slider);
      this.deltaBadges.set(row.id, badge);
      line.append(name, slider, badge);
      list.appendChild(line);
    }
    this.root.appendChild(list);
  }

  private overridesFromSliders(): Record<string, number> {
    const overrides: Record<string, number> = {};
    for (const [nodeId, slider] of this.sliders) {
      const value = Number(slider.value);
      if (value !== this.baseline.get(nodeId)) {
        overrides[nodeId] = value;
      }
    }
    return overrides;
  }

  setSlider(nodeId: string, value: number): void {
    const slider = this.sliders.get(nodeId);
    if (!slider) {
      throw new Error(`no slider for ${nodeId}`);
    }
    slider.value = String(value);
    this.schedule();
  }

  reset(): void {
    for (const [nodeId, slider] of this.sliders) {
      slider.value = String(this.baseline.get(nodeId));
    }
    this.schedule();
  }

  /** Queue a recompute; only one request runs at a time, latest wins. */
  private schedule(): void {
    const overrides = this.overridesFromSliders();
    if (this.inflight) {
      this.queued = overrides;
      return;
    }
    void this.fire(overrides);
  }

  private async fire(overrides: Record<string, number>): Promise<void> {
    this.inflight = true;
    const myGeneration = ++this.generation;
    try {
      const report = await this.client.whatif(this.roundId, {
        nodes: overrides,
        horizon: this.horizon ?? undefined,
      });
      if (myGeneration === this.generation) {
        this.apply(report);
      }
    } catch {
      if (myGeneration === this.generation && this.staleBadge) {
        this.staleBadge.hidden = false;
      }
    } finally {
      this.inflight = false;
      const queued = this.queued;
      this.queued = null;
      if (queued !== null) {
        void this.fire(queued);
      } else {
        for (const resolve of this.idleResolvers.splice(0)) {
          resolve();
        }
      }
    }
  }

  private apply(report: WhatIfReport): void {
    if (this.staleBadge) this.staleBadge.hidden = true;
    if (this.srValue) {
      this.srValue.textContent = fmt(report.systemic_risk.after);
    }
    if (this.srDelta) {
      this.srDelta.textContent = fmtDelta(report.systemic_risk.delta);
      this.srDelta.classList.toggle(
        "negative",
        (report.systemic_risk.delta ?? 0) < 0,
      );
    }
    for (const [nodeId, badge] of this.deltaBadges) {
      const delta = report.deltas[nodeId]?.effective.delta ?? 0;
      badge.textContent = fmtDelta(delta);
    }
  }

  /** Settles once no request is running and nothing is queued (tests). */
  idle(): Promise<void> {
    if (!this.inflight && this.queued === null) {
      return Promise.resolve();
    }
    return new Promise((resolve) => this.idleResolvers.push(resolve));
  }
}
