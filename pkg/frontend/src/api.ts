/** Typed client for the rights-exercise service HTTP API. */

export interface HistoryEntry {
  from: string;
  to: string;
  at: string;
  actor: string;
  justification: string | null;
  noticeId: string | null;
}

export interface RequestDetail {
  id: string;
  iri: string;
  dataSubject: string;
  subjectKey: string;
  right: string;
  rightArticle: string;
  rightLabel: string;
  status: string;
  submittedAt: string;
  deadline: string;
  extensionApplied: boolean;
  identityVerified: boolean;
  breach: boolean;
  lastJustification: string | null;
  legalEvents: string[];
  canVerifyIdentity: boolean;
  canExtend: boolean;
  policyId: string;
  history: HistoryEntry[];
  noticeId?: string;
}

export interface JustificationOption {
  iri: string;
  label: string;
  category: string;
}

export interface DecisionBody {
  action: string;
  justification?: string;
  outcome?: boolean;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(detail);
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return resp.json() as Promise<T>;
}

export class ServiceClient {
  constructor(private base: string) {}

  async listRequests(status?: string): Promise<RequestDetail[]> {
    const url = new URL(this.base + "/requests");
    if (status) url.searchParams.set("status", status);
    return asJson(await fetch(url));
  }

  async getRequest(id: string): Promise<RequestDetail> {
    return asJson(await fetch(`${this.base}/requests/${id}`));
  }

  async decide(id: string, body: DecisionBody): Promise<RequestDetail> {
    const resp = await fetch(`${this.base}/requests/${id}/decisions`, {
      method: "POST",
      headers: { "Content-Type": "application/json", Accept: "application/json" },
      body: JSON.stringify(body),
    });
    return asJson(resp);
  }

  async justifications(category: string): Promise<JustificationOption[]> {
    const url = new URL(this.base + "/vocab/justifications");
    url.searchParams.set("category", category);
    return asJson(await fetch(url));
  }

  /** Notice preview; notices are served as text/turtle only. */
  async noticeTurtle(noticeIri: string): Promise<string> {
    const key = noticeIri.split("/").pop();
    const resp = await fetch(`${this.base}/notices/${key}`, {
      headers: { Accept: "text/turtle" },
    });
    if (!resp.ok) throw new ApiError(resp.status, `notice ${key} unavailable`);
    return resp.text();
  }

  async health(): Promise<boolean> {
    try {
      const resp = await fetch(`${this.base}/health`);
      return resp.ok;
    } catch {
      return false;
    }
  }
}
