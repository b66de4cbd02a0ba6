/** Queue rendering unit tests (no service needed). */

import { describe, expect, it } from "vitest";

import type { RequestDetail } from "../src/api.js";
import { filterByStatus, renderQueue, sortByDeadline, toQueueRow } from "../src/queue.js";

function detail(overrides: Partial<RequestDetail> = {}): RequestDetail {
  return {
    id: "req-1",
    iri: "https://controller.example/requests/req-1",
    dataSubject: "https://alice.example/me",
    subjectKey: "abc123",
    right: "https://w3id.org/dpv/legal/eu/gdpr#A15",
    rightArticle: "A15",
    rightLabel: "Right of access",
    status: "Initiated",
    submittedAt: "2026-01-10T09:00:00Z",
    deadline: "2026-02-10T09:00:00Z",
    extensionApplied: false,
    identityVerified: false,
    breach: false,
    lastJustification: null,
    legalEvents: ["acknowledge"],
    canVerifyIdentity: false,
    canExtend: true,
    policyId: "urn:uuid:p1",
    history: [],
    ...overrides,
  };
}

describe("queue rows", () => {
  it("derives days remaining from the browser clock", () => {
    const row = toQueueRow(detail(), new Date("2026-02-01T09:00:00Z"));
    expect(row.daysRemaining).toBe(9);
    const overdue = toQueueRow(detail(), new Date("2026-02-12T09:00:00Z"));
    expect(overdue.daysRemaining).toBe(-2);
  });

  it("mirrors the service breach flag instead of recomputing", () => {
    // Deadline is in the future by the local clock, yet the service says
    // breached (its clock is authoritative): the flag must follow the service.
    const row = toQueueRow(detail({ breach: true }),
                           new Date("2026-01-01T00:00:00Z"));
    expect(row.breachFlag).toBe(true);
  });

  it("sorts by deadline and filters by status", () => {
    const rows = [
      toQueueRow(detail({ id: "b", deadline: "2026-03-01T00:00:00Z" })),
      toQueueRow(detail({ id: "a", deadline: "2026-02-01T00:00:00Z", status: "Accepted" })),
    ];
    expect(sortByDeadline(rows).map((r) => r.requestId)).toEqual(["a", "b"]);
    expect(filterByStatus(rows, "Accepted").map((r) => r.requestId)).toEqual(["a"]);
    expect(filterByStatus(rows)).toHaveLength(2);
  });
});

describe("queue table", () => {
  it("renders an empty store as an empty queue", () => {
    const table = renderQueue([]);
    expect(table.querySelectorAll("tbody tr")).toHaveLength(0);
  });

  it("flags breached rows and keeps the rest plain", () => {
    const table = renderQueue([
      detail({ id: "ok-1" }),
      detail({ id: "late-1", breach: true }),
      detail({ id: "ok-2" }),
    ]);
    const flagged = table.querySelectorAll("tbody tr.breach");
    expect(flagged).toHaveLength(1);
    expect((flagged[0] as HTMLElement).dataset.requestId).toBe("late-1");
  });

  it("applies the status filter to rendering", () => {
    const table = renderQueue(
      [detail({ id: "x", status: "RequiresAction" }), detail({ id: "y" })],
      {},
      { statusFilter: "RequiresAction" });
    const rows = [...table.querySelectorAll("tbody tr")] as HTMLElement[];
    expect(rows.map((r) => r.dataset.requestId)).toEqual(["x"]);
  });
});
