/** Console bootstrap: 10-second polling, status filter, connectivity banner. */

import { ServiceClient } from "./api.js";
import { DecisionPanel, loadPanelVocab } from "./panel.js";
import { STATUSES, renderQueue } from "./queue.js";

const POLL_INTERVAL_MS = 10_000;

function serviceBase(): string {
  const param = new URLSearchParams(window.location.search).get("service");
  return (param ?? window.location.origin).replace(/\/$/, "");
}

export async function startConsole(
  root: HTMLElement,
  client: ServiceClient = new ServiceClient(serviceBase()),
): Promise<void> {
  const banner = document.createElement("div");
  banner.className = "banner";
  banner.hidden = true;
  root.appendChild(banner);

  const controls = document.createElement("div");
  controls.className = "controls";
  const filter = document.createElement("select");
  filter.className = "status-filter";
  const any = document.createElement("option");
  any.value = "";
  any.textContent = "all statuses";
  filter.appendChild(any);
  for (const status of STATUSES) {
    const option = document.createElement("option");
    option.value = status;
    option.textContent = status;
    filter.appendChild(option);
  }
  controls.appendChild(filter);
  root.appendChild(controls);

  const queueHost = document.createElement("div");
  queueHost.className = "queue-host";
  root.appendChild(queueHost);

  const vocab = await loadPanelVocab(client);
  const panel = new DecisionPanel(client, vocab, {
    // A 409 means another DPO got there first; converge on server truth.
    onUpdated: () => void refresh(),
    onError: (message) => {
      if (message.startsWith("409")) void refresh();
    },
  });
  root.appendChild(panel.element);

  async function refresh(): Promise<void> {
    if (!(await client.health())) {
      banner.textContent = "service unreachable; retrying";
      banner.hidden = false;
      return;
    }
    banner.hidden = true;
    const details = await client.listRequests();
    const table = renderQueue(details, {
      onOpen: (id) => void panel.open(id),
    }, { statusFilter: filter.value || undefined });
    queueHost.replaceChildren(table);
  }

  filter.addEventListener("change", () => void refresh());
  await refresh();
  setInterval(() => void refresh(), POLL_INTERVAL_MS);
}

if (typeof document !== "undefined" && document.getElementById("console-root")) {
  void startConsole(document.getElementById("console-root")!);
}
