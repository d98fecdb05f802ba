/** Network page: counterparty registry CRUD. */

import { clear, el } from "../dom.js";
import type { PageContext, PageHandle } from "../page.js";
import { withPending } from "../pending.js";
import { Poller } from "../poller.js";
import type { Party } from "../types.js";

export function mountNetworkPage(root: HTMLElement, ctx: PageContext): PageHandle {
  let editingId: string | null = null;

  const nameInput = el("input", { type: "text", placeholder: "name", "data-testid": "party-name" });
  const leiInput = el("input", { type: "text", placeholder: "legal entity id", "data-testid": "party-lei" });
  const submitButton = el("button", { type: "button", "data-testid": "party-submit" }, "Register");
  const cancelButton = el("button", { type: "button", class: "link hidden", "data-testid": "party-cancel" }, "Cancel");
  const formTitle = el("h3", {}, "Register party");

  const tbody = el("tbody", { "data-testid": "party-rows" });

  function enterEditMode(party: Party): void {
    editingId = party.partyId;
    nameInput.value = party.name;
    leiInput.value = party.legalEntityId;
    formTitle.textContent = `Edit ${party.partyId}`;
    submitButton.textContent = "Save";
    cancelButton.classList.remove("hidden");
  }

  function exitEditMode(): void {
    editingId = null;
    nameInput.value = "";
    leiInput.value = "";
    formTitle.textContent = "Register party";
    submitButton.textContent = "Register";
    cancelButton.classList.add("hidden");
  }

  cancelButton.addEventListener("click", exitEditMode);

  submitButton.addEventListener("click", () => {
    void withPending(submitButton, ctx.notify, async () => {
      const name = nameInput.value.trim();
      const lei = leiInput.value.trim();
      if (editingId === null) {
        const party = await ctx.api.registerParty(name, lei);
        ctx.notify.toast(`Registered ${party.partyId} (${party.name})`);
      } else {
        const party = await ctx.api.updateParty(editingId, name, lei);
        ctx.notify.toast(`Updated ${party.partyId}`);
      }
      exitEditMode();
      poller.poke();
    });
  });

  function renderRows(parties: Party[]): void {
    clear(tbody);
    for (const party of parties) {
      const editButton = el("button", { type: "button", class: "link" }, "Edit");
      editButton.addEventListener("click", () => enterEditMode(party));
      const deleteButton = el("button", { type: "button", class: "link" }, "Delete");
      deleteButton.addEventListener("click", () => {
        void withPending(deleteButton, ctx.notify, async () => {
          await ctx.api.deleteParty(party.partyId);
          ctx.notify.toast(`Removed ${party.partyId}`);
          if (editingId === party.partyId) exitEditMode();
          poller.poke();
        });
      });
      tbody.append(
        el(
          "tr",
          {},
          el("td", {}, party.partyId),
          el("td", {}, party.name),
          el("td", {}, party.legalEntityId),
          el("td", {}, editButton, " ", deleteButton),
        ),
      );
    }
  }

  root.append(
    el("h2", {}, "Network"),
    el(
      "section",
      { class: "card" },
      formTitle,
      el("div", { class: "form-row" }, nameInput, leiInput, submitButton, cancelButton),
    ),
    el(
      "section",
      { class: "card" },
      el("h3", {}, "Registered parties"),
      el(
        "table",
        { class: "data-table" },
        el(
          "thead",
          {},
          el(
            "tr",
            {},
            el("th", {}, "Party"),
            el("th", {}, "Name"),
            el("th", {}, "Legal entity"),
            el("th", {}, ""),
          ),
        ),
        tbody,
      ),
    ),
  );

  async function refresh(): Promise<void> {
    renderRows(await ctx.api.parties());
  }

  const poller = new Poller(refresh);
  poller.start();
  return { refresh, dispose: () => poller.stop() };
}
