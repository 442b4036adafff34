/**
 * Feedback view: the expert's entries against the merged consensus,
 * served pre-sorted by divergence and rendered verbatim. From here the
 * expert can re-open the evaluation grid pre-filled with their prior
 * entries for the next round.
 */

import { ApiError } from "./api.js";
import { fmt } from "./format.js";
import type { FeedbackReport, SubmissionEntry } from "./types.js";

export interface FeedbackClient {
  feedback(roundId: string, expertId: string): Promise<FeedbackReport>;
}

export class FeedbackView {
  private readonly doc: Document;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: FeedbackClient,
    private readonly onReopen?: (entries: SubmissionEntry[]) => void,
  ) {
    this.doc = root.ownerDocument;
  }

  async load(roundId: string, expertId: string): Promise<void> {
    this.root.textContent = "";
    let report: FeedbackReport;
    try {
      report = await this.client.feedback(roundId, expertId);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        const empty = this.doc.createElement("div");
        empty.className = "empty-state";
        empty.textContent =
          "No feedback yet: the round is still open. Freeze it to compare " +
          "your evaluation against the merged consensus.";
        this.root.appendChild(empty);
        return;
      }
      throw error;
    }
    this.renderReport(report);
  }

  private renderReport(report: FeedbackReport): void {
    const heading = this.doc.createElement("h3");
    heading.textContent = `${report.expert_id} vs merged (${report.round_id})`;
    this.root.appendChild(heading);

    const table = this.doc.createElement("table");
    table.className = "feedback-table";
    const head = this.doc.createElement("tr");
    for (const column of ["rank", "entry", "yours", "merged", "divergence"]) {
      const th = this.doc.createElement("th");
      th.textContent = column;
      head.appendChild(th);
    }
    table.appendChild(head);

    for (const record of report.records) {
      const tr = this.doc.createElement("tr");
      tr.dataset.rank = String(record.rank);
      const cells = [
        String(record.rank),
        `${record.src} -> ${record.dst}`,
        fmt(record.expert_weight),
        fmt(record.merged_weight),
        fmt(record.divergence),
      ];
      for (const value of cells) {
        const td = this.doc.createElement("td");
        td.textContent = value;
        tr.appendChild(td);
      }
      table.appendChild(tr);
    }
    this.root.appendChild(table);

    const reopen = this.doc.createElement("button");
    reopen.className = "reopen";
    reopen.textContent = "revise in evaluation grid";
    reopen.addEventListener("click", () => {
      this.onReopen?.(
        report.records.map((r) => ({
          src: r.src,
          dst: r.dst,
          weight: r.expert_weight,
          confidence: 1.0,
        })),
      );
    });
    this.root.appendChild(reopen);
  }
}
