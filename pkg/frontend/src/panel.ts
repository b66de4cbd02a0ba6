/** Decision panel: history, lifecycle-legal actions, justification pickers.
 *
 * Transition buttons are rendered exactly from the server-computed legal
 * event set, so the panel can never offer a move the lifecycle would refuse.
 * Identity verification and the deadline extension are utility controls,
 * rendered separately from the transition buttons. All state changes round-
 * trip through the service; errors surface verbatim.
 */

import { ApiError, ServiceClient } from "./api.js";
import type { JustificationOption, RequestDetail } from "./api.js";

/** Which picker category each justification-requiring action draws from. */
export const PICKER_CATEGORIES: Record<string, string> = {
  "reject": "NonFulfilment",
  "require-action": "Delay",
  "delay-action": "Delay",
  "extend": "Delay",
};

export interface PanelHandlers {
  onUpdated?: (detail: RequestDetail) => void;
  onError?: (message: string) => void;
}

export interface PanelVocab {
  NonFulfilment: JustificationOption[];
  Delay: JustificationOption[];
}

export async function loadPanelVocab(client: ServiceClient): Promise<PanelVocab> {
  const [nonFulfilment, delay] = await Promise.all([
    client.justifications("NonFulfilment"),
    client.justifications("Delay"),
  ]);
  return { NonFulfilment: nonFulfilment, Delay: delay };
}

function historyList(detail: RequestDetail): HTMLElement {
  const list = document.createElement("ol");
  list.className = "history";
  for (const entry of detail.history) {
    const item = document.createElement("li");
    const move = entry.from === entry.to ? entry.to : `${entry.from} → ${entry.to}`;
    item.textContent = entry.justification
      ? `${entry.at}: ${move} (${entry.justification.split("#").pop()})`
      : `${entry.at}: ${move}`;
    list.appendChild(item);
  }
  return list;
}

function pickerFor(action: string, vocab: PanelVocab): HTMLSelectElement | null {
  const category = PICKER_CATEGORIES[action];
  if (!category) return null;
  const select = document.createElement("select");
  select.dataset.action = action;
  select.className = "justification-picker";
  for (const option of vocab[category as keyof PanelVocab]) {
    const el = document.createElement("option");
    el.value = option.iri;
    el.textContent = option.label;
    select.appendChild(el);
  }
  return select;
}

export class DecisionPanel {
  readonly element: HTMLElement;

  constructor(
    private client: ServiceClient,
    private vocab: PanelVocab,
    private handlers: PanelHandlers = {},
  ) {
    this.element = document.createElement("section");
    this.element.className = "decision-panel";
  }

  async open(requestId: string): Promise<void> {
    const detail = await this.client.getRequest(requestId);
    this.render(detail);
  }

  render(detail: RequestDetail): void {
    this.element.replaceChildren();
    this.element.dataset.requestId = detail.id;
    this.element.dataset.status = detail.status;

    const title = document.createElement("h2");
    title.textContent = `${detail.rightLabel} — ${detail.status}`;
    this.element.appendChild(title);

    const meta = document.createElement("p");
    meta.className = "meta";
    meta.textContent =
      `${detail.dataSubject} · deadline ${detail.deadline}` +
      (detail.breach ? " · DEADLINE BREACHED" : "") +
      (detail.identityVerified ? " · identity verified" : "") +
      (detail.extensionApplied ? " · extension applied" : "");
    this.element.appendChild(meta);

    this.element.appendChild(historyList(detail));

    const actions = document.createElement("div");
    actions.className = "actions";
    for (const action of detail.legalEvents) {
      actions.appendChild(this.actionControl(detail.id, action, "transition"));
    }
    this.element.appendChild(actions);

    const utilities = document.createElement("div");
    utilities.className = "utilities";
    if (detail.canVerifyIdentity) {
      utilities.appendChild(this.verifyControl(detail.id, true));
      utilities.appendChild(this.verifyControl(detail.id, false));
    }
    if (detail.canExtend) {
      utilities.appendChild(this.actionControl(detail.id, "extend", "utility"));
    }
    this.element.appendChild(utilities);

    const error = document.createElement("p");
    error.className = "error";
    error.hidden = true;
    this.element.appendChild(error);

    const preview = document.createElement("pre");
    preview.className = "notice-preview";
    preview.hidden = true;
    this.element.appendChild(preview);
  }

  private actionControl(requestId: string, action: string,
                        kind: "transition" | "utility"): HTMLElement {
    const wrap = document.createElement("span");
    wrap.className = "action-control";
    const picker = pickerFor(action, this.vocab);
    if (picker) wrap.appendChild(picker);
    const button = document.createElement("button");
    button.dataset.action = action;
    button.dataset.kind = kind;
    button.textContent = action;
    button.addEventListener("click", () => {
      void this.submit(requestId, action, picker?.value);
    });
    wrap.appendChild(button);
    return wrap;
  }

  private verifyControl(requestId: string, outcome: boolean): HTMLElement {
    const button = document.createElement("button");
    button.dataset.action = "verify-identity";
    button.dataset.kind = "utility";
    button.dataset.outcome = String(outcome);
    button.textContent = outcome ? "identity verified" : "identity check failed";
    button.addEventListener("click", () => {
      void this.submit(requestId, "verify-identity", undefined, outcome);
    });
    return button;
  }

  async submit(requestId: string, action: string, justification?: string,
               outcome?: boolean): Promise<void> {
    try {
      const detail = await this.client.decide(requestId, {
        action,
        ...(justification ? { justification } : {}),
        ...(outcome === undefined ? {} : { outcome }),
      });
      this.render(detail);
      this.handlers.onUpdated?.(detail);
      if (detail.noticeId) {
        await this.showNotice(detail.noticeId);
      }
    } catch (err) {
      const message = err instanceof ApiError
        ? `${err.status}: ${err.detail}`
        : String(err);
      this.showError(message);
      this.handlers.onError?.(message);
    }
  }

  private async showNotice(noticeIri: string): Promise<void> {
    const preview = this.element.querySelector<HTMLPreElement>(".notice-preview");
    if (!preview) return;
    try {
      preview.textContent = await this.client.noticeTurtle(noticeIri);
      preview.hidden = false;
    } catch {
      preview.hidden = true;
    }
  }

  private showError(message: string): void {
    const error = this.element.querySelector<HTMLParagraphElement>(".error");
    if (error) {
      error.textContent = message;
      error.hidden = false;
    }
  }
}
