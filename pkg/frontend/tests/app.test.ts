/** Console bootstrap: connectivity banner and queue wiring with a stub client. */

import { describe, expect, it } from "vitest";

import type { RequestDetail, ServiceClient } from "../src/api.js";
import { startConsole } from "../src/app.js";

function detail(id: string, status = "Initiated"): RequestDetail {
  return {
    id,
    iri: `https://controller.example/requests/${id}`,
    dataSubject: "https://alice.example/me",
    subjectKey: "abc123",
    right: "https://w3id.org/dpv/legal/eu/gdpr#A15",
    rightArticle: "A15",
    rightLabel: "Right of access",
    status,
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
  };
}

function stubClient(overrides: Partial<ServiceClient>): ServiceClient {
  const base = {
    health: async () => true,
    listRequests: async () => [],
    getRequest: async (id: string) => detail(id),
    decide: async () => detail("x"),
    justifications: async () => [],
    noticeTurtle: async () => "@prefix dpv: <https://w3id.org/dpv#> .",
  };
  return { ...base, ...overrides } as unknown as ServiceClient;
}

describe("console bootstrap", () => {
  it("shows the connectivity banner when the service is unreachable", async () => {
    const root = document.createElement("div");
    await startConsole(root, stubClient({ health: async () => false }));
    const banner = root.querySelector<HTMLElement>(".banner");
    expect(banner?.hidden).toBe(false);
    expect(banner?.textContent).toContain("unreachable");
    expect(root.querySelectorAll("tbody tr")).toHaveLength(0);
  });

  it("renders the queue and hides the banner when healthy", async () => {
    const root = document.createElement("div");
    await startConsole(root, stubClient({
      listRequests: async () => [detail("r1"), detail("r2", "Acknowledged")],
    }));
    expect(root.querySelector<HTMLElement>(".banner")?.hidden).toBe(true);
    const rows = [...root.querySelectorAll("tbody tr")] as HTMLElement[];
    expect(rows.map((r) => r.dataset.requestId)).toEqual(["r1", "r2"]);
  });
});
