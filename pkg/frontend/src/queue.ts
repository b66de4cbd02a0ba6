/** Request queue table: deadline-sorted, status-filterable, breach-flagged. */

import type { RequestDetail } from "./api.js";

export interface QueueRow {
  requestId: string;
  rightLabel: string;
  dataSubject: string;
  status: string;
  deadline: string;
  daysRemaining: number;
  breachFlag: boolean;
  extensionApplied: boolean;
}

export const STATUSES = [
  "Initiated", "Acknowledged", "RequiresAction", "ActionDelayed",
  "Accepted", "Rejected", "Fulfilled",
] as const;

/**
 * daysRemaining comes from the browser clock; the breach flag always mirrors
 * the service's computation, never a client-side rule.
 */
export function toQueueRow(detail: RequestDetail, now: Date = new Date()): QueueRow {
  const deadlineMs = Date.parse(detail.deadline);
  return {
    requestId: detail.id,
    rightLabel: detail.rightLabel,
    dataSubject: detail.dataSubject,
    status: detail.status,
    deadline: detail.deadline,
    daysRemaining: Math.floor((deadlineMs - now.getTime()) / 86_400_000),
    breachFlag: detail.breach,
    extensionApplied: detail.extensionApplied,
  };
}

export function sortByDeadline(rows: QueueRow[]): QueueRow[] {
  return [...rows].sort((a, b) =>
    a.deadline === b.deadline
      ? a.requestId.localeCompare(b.requestId)
      : a.deadline.localeCompare(b.deadline));
}

export function filterByStatus(rows: QueueRow[], status?: string): QueueRow[] {
  return status ? rows.filter((row) => row.status === status) : rows;
}

export interface QueueHandlers {
  onOpen?: (requestId: string) => void;
}

export function renderQueue(
  details: RequestDetail[],
  handlers: QueueHandlers = {},
  opts: { statusFilter?: string; now?: Date } = {},
): HTMLElement {
  const rows = sortByDeadline(
    filterByStatus(details.map((d) => toQueueRow(d, opts.now)), opts.statusFilter));

  const table = document.createElement("table");
  table.className = "queue";
  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const title of ["Request", "Right", "Data subject", "Status",
                       "Deadline", "Days left", "Extended"]) {
    const th = document.createElement("th");
    th.textContent = title;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const body = document.createElement("tbody");
  table.appendChild(body);
  const cell = (tr: HTMLTableRowElement, text: string) => {
    const td = document.createElement("td");
    td.textContent = text;
    tr.appendChild(td);
  };
  for (const row of rows) {
    const tr = document.createElement("tr");
    tr.dataset.requestId = row.requestId;
    tr.dataset.status = row.status;
    if (row.breachFlag) tr.classList.add("breach");
    cell(tr, row.requestId.slice(0, 8));
    cell(tr, row.rightLabel);
    cell(tr, row.dataSubject);
    cell(tr, row.status + (row.breachFlag ? " (deadline breached)" : ""));
    cell(tr, row.deadline);
    cell(tr, String(row.daysRemaining));
    cell(tr, row.extensionApplied ? "yes" : "no");
    tr.addEventListener("click", () => handlers.onOpen?.(row.requestId));
    body.appendChild(tr);
  }
  return table;
}
