/**
 * App shell: round/expert selection with deep-linkable URLs
 * (#/round/<id>/expert/<id>/<tab>), tabs for the network overview,
 * evaluation grid, what-if scenarios, and feedback.
 */

import { ApiError, ServiceClient } from "./api.js";
import { FeedbackView } from "./feedback.js";
import { EvaluationGrid } from "./grid.js";
import { NetworkView } from "./network.js";
import type { SubmissionEntry } from "./types.js";
import { WhatIfPanel } from "./whatif.js";

const TABS = ["network", "evaluate", "whatif", "feedback"] as const;
type Tab = (typeof TABS)[number];

interface Route {
  round: string | null;
  expert: string;
  tab: Tab;
}

export function parseRoute(hash: string): Route {
  const parts = hash.replace(/^#\/?/, "").split("/").filter(Boolean);
  const route: Route = { round: null, expert: "", tab: "network" };
  for (let i = 0; i < parts.length - 1; i += 1) {
    if (parts[i] === "round") route.round = decodeURIComponent(parts[i + 1]);
    if (parts[i] === "expert") route.expert = decodeURIComponent(parts[i + 1]);
  }
  const last = parts[parts.length - 1] as Tab;
  if (TABS.includes(last)) route.tab = last;
  return route;
}

export function buildHash(route: Route): string {
  let hash = "#";
  if (route.round) hash += `/round/${encodeURIComponent(route.round)}`;
  if (route.expert) hash += `/expert/${encodeURIComponent(route.expert)}`;
  hash += `/${route.tab}`;
  return hash;
}

export class App {
  private readonly doc: Document;
  private route: Route = { round: null, expert: "", tab: "network" };
  private grid: EvaluationGrid | null = null;
  private pendingPrefill: SubmissionEntry[] | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: ServiceClient,
  ) {
    this.doc = root.ownerDocument;
  }

  async start(): Promise<void> {
    const win = this.doc.defaultView;
    if (win) {
      this.route = parseRoute(win.location.hash);
      win.addEventListener("hashchange", () => {
        this.route = parseRoute(win.location.hash);
        void this.renderBody();
      });
    }
    await this.renderChrome();
    await this.renderBody();
  }

  private async renderChrome(): Promise<void> {
    this.root.textContent = "";
    const bar = this.doc.createElement("header");
    bar.className = "topbar";

    const title = this.doc.createElement("strong");
    title.textContent = "systemic-risk evaluation";
    bar.appendChild(title);

    const roundSelect = this.doc.createElement("select");
    roundSelect.className = "round-select";
    const rounds = await this.client.rounds();
    for (const round of rounds) {
      const option = this.doc.createElement("option");
      option.value = round.round_id;
      option.textContent = `${round.round_id}${round.frozen ? "" : " (open)"}`;
      roundSelect.appendChild(option);
    }
    if (this.route.round === null && rounds.length > 0) {
      this.route.round = rounds[rounds.length - 1].round_id;
    }
    if (this.route.round) roundSelect.value = this.route.round;
    roundSelect.addEventListener("change", () => {
      this.route.round = roundSelect.value;
      this.commitRoute();
    });
    bar.appendChild(roundSelect);

    const newRound = this.doc.createElement("button");
    newRound.textContent = "new round";
    newRound.addEventListener("click", async () => {
      try {
        const round = await this.client.createRound(
          new Date().toISOString().slice(0, 10),
        );
        this.route.round = round.round_id;
        await this.renderChrome();
        this.commitRoute();
      } catch (error) {
        this.flash(error);
      }
    });
    bar.appendChild(newRound);

    const freeze = this.doc.createElement("button");
    freeze.textContent = "freeze round";
    freeze.addEventListener("click", async () => {
      if (!this.route.round) return;
      try {
        await this.client.freeze(this.route.round);
        await this.renderChrome();
        this.commitRoute();
      } catch (error) {
        this.flash(error);
      }
    });
    bar.appendChild(freeze);

    const expert = this.doc.createElement("input");
    expert.className = "expert-id";
    expert.placeholder = "expert id";
    expert.value = this.route.expert;
    expert.addEventListener("change", () => {
      this.route.expert = expert.value;
      this.commitRoute();
    });
    bar.appendChild(expert);

    const tabs = this.doc.createElement("nav");
    for (const tab of TABS) {
      const button = this.doc.createElement("button");
      button.dataset.tab = tab;
      button.textContent = tab;
      button.addEventListener("click", () => {
        this.route.tab = tab;
        this.commitRoute();
      });
      tabs.appendChild(button);
    }
    bar.appendChild(tabs);

    const flash = this.doc.createElement("div");
    flash.className = "flash";
    bar.appendChild(flash);

    this.root.appendChild(bar);
    const body = this.doc.createElement("main");
    body.className = "tab-body";
    this.root.appendChild(body);
  }

  private commitRoute(): void {
    const win = this.doc.defaultView;
    if (win) {
      win.location.hash = buildHash(this.route);
    }
    void this.renderBody();
  }

  private flash(error: unknown): void {
    const flash = this.root.querySelector(".flash");
    if (flash) {
      flash.textContent =
        error instanceof ApiError
          ? `${error.code}: ${error.message}`
          : String(error);
    }
  }

  private body(): HTMLElement {
    return this.root.querySelector(".tab-body") as HTMLElement;
  }

  private async renderBody(): Promise<void> {
    const body = this.body();
    if (!body) return;
    body.textContent = "";
    const round = this.route.round;
    try {
      switch (this.route.tab) {
        case "network": {
          if (!round) return this.needRound(body);
          const result = await this.client.result(round);
          new NetworkView(body).render(result);
          break;
        }
        case "evaluate": {
          const hierarchy = await this.client.hierarchy();
          this.grid = new EvaluationGrid(body, hierarchy, this.client);
          if (this.pendingPrefill) {
            this.grid.prefill(this.pendingPrefill);
            this.pendingPrefill = null;
          }
          const submit = this.doc.createElement("button");
          submit.className = "submit";
          submit.textContent = "submit evaluation";
          submit.addEventListener("click", () => {
            if (round && this.route.expert) {
              void this.grid?.submit(round, this.route.expert);
            } else {
              this.flash(new Error("pick a round and enter your expert id"));
            }
          });
          body.appendChild(submit);
          break;
        }
        case "whatif": {
          if (!round) return this.needRound(body);
          const result = await this.client.result(round);
          new WhatIfPanel(body, this.client, round, result);
          break;
        }
        case "feedback": {
          if (!round) return this.needRound(body);
          const view = new FeedbackView(body, this.client, (entries) => {
            this.pendingPrefill = entries;
            this.route.tab = "evaluate";
            this.commitRoute();
          });
          await view.load(round, this.route.expert);
          break;
        }
      }
    } catch (error) {
      if (error instanceof ApiError) {
        const panel = this.doc.createElement("div");
        panel.className = "error-panel";
        panel.textContent = `${error.code}: ${error.message}`;
        body.appendChild(panel);
      } else {
        throw error;
      }
    }
  }

  private needRound(body: HTMLElement): void {
    const panel = this.doc.createElement("div");
    panel.className = "empty-state";
    panel.textContent = "Create or select a round first.";
    body.appendChild(panel);
  }
}

declare global {
  interface Window {
    fcmriskApp?: App;
  }
}

// bootstrap only in a real browser; tests construct App directly
if (typeof window !== "undefined" && window.document?.getElementById("app")) {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("service") ?? window.location.origin;
  const app = new App(
    window.document.getElementById("app") as HTMLElement,
    new ServiceClient(base),
  );
  window.fcmriskApp = app;
  void app.start();
}
