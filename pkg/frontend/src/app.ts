/**
 * DOM glue: renders the wizard, claim badge and advice panel into a root
 * element and wires them to the service clients. All protocol and state
 * rules live in api.ts / state.ts / wizard.ts so they stay testable
 * without a browser.
 */

import {
  AdvisorClient,
  ProverClient,
  tamperProof,
  type AdviseRequest,
} from "./api.js";
import {
  ADVICE_STYLES,
  beginAdvise,
  canAdvise,
  claimBadgeText,
  claimTooltip,
  completeAdvise,
  failAdvise,
  holdClaim,
  initialSession,
  selectCondition,
  setProceedWithoutClaim,
  setTamperDebug,
  type SessionState,
} from "./state.js";
import { answer, isComplete, startWizard, toAnswers, validationErrors, type WizardState } from "./wizard.js";

export interface AppConfig {
  proverUrl: string;
  advisorUrl: string;
}

export function createApp(root: HTMLElement, config: AppConfig) {
  const prover = new ProverClient(config.proverUrl);
  const advisor = new AdvisorClient(config.advisorUrl);
  let session: SessionState = initialSession();
  let wizard: WizardState | null = null;

  root.innerHTML = `
    <h1>Advice with verifiable traits</h1>
    <section id="wizard"><p>Loading questionnaire…</p></section>
    <section id="claim">
      <button id="request-proof" disabled>Request proof</button>
      <span id="claim-badge" title="">No claim held</span>
    </section>
    <section id="advice">
      <textarea id="query" placeholder="What should I do?"></textarea>
      <select id="style"></select>
      <label><input type="checkbox" id="proceed" /> proceed without verification</label>
      <label><input type="checkbox" id="tamper" /> tamper proof (debug)</label>
      <button id="ask" disabled>Ask advisor</button>
      <div id="transcript"></div>
      <div id="error" role="alert"></div>
    </section>
  `;

  const el = <T extends HTMLElement>(id: string) => root.querySelector(`#${id}`) as T;
  const styleSelect = el<HTMLSelectElement>("style");
  for (const style of ADVICE_STYLES) {
    const option = document.createElement("option");
    option.value = style.condition;
    option.textContent = style.label;
    styleSelect.appendChild(option);
  }

  function refreshControls() {
    el<HTMLButtonElement>("request-proof").disabled = wizard === null || !isComplete(wizard);
    const query = el<HTMLTextAreaElement>("query").value;
    el<HTMLButtonElement>("ask").disabled = !canAdvise(session, query);
    const badge = el<HTMLSpanElement>("claim-badge");
    badge.textContent = claimBadgeText(session);
    badge.title = claimTooltip(session);
  }

  function renderWizard() {
    const host = el<HTMLElement>("wizard");
    if (wizard === null) return;
    const errors = validationErrors(wizard);
    host.innerHTML = wizard.spec.questions
      .map((q) => {
        const choices = q.options
          .map(
            (text, idx) => `
              <label><input type="radio" name="q${q.id}" value="${idx}"
                ${wizard!.draft[q.id] === idx ? "checked" : ""}/> ${text}</label>`,
          )
          .join("");
        const error = errors.has(q.id) ? `<em class="field-error">${errors.get(q.id)}</em>` : "";
        return `<fieldset><legend>${q.text}</legend>${choices}${error}</fieldset>`;
      })
      .join("");
    host.querySelectorAll("input[type=radio]").forEach((input) =>
      input.addEventListener("change", (event) => {
        const target = event.target as HTMLInputElement;
        const questionId = Number(target.name.slice(1));
        wizard = answer(wizard!, questionId, Number(target.value));
        refreshControls();
      }),
    );
  }

  function renderTranscript() {
    el<HTMLElement>("transcript").innerHTML = session.transcript
      .map(
        (entry) => `
          <article>
            <p class="query">${entry.query}</p>
            <p class="proposal">${entry.proposalText}
              <span class="score-chip">${entry.proposalScore >= 0 ? "+" : ""}${entry.proposalScore}</span></p>
            <p class="explanation">${entry.explanation}</p>
            <span class="badge badge-${entry.badge.toLowerCase()}">${entry.badge}</span>
            ${entry.badge === "Valid" ? "" : "<em>advice based on unverified traits only</em>"}
          </article>`,
      )
      .join("");
  }

  el<HTMLButtonElement>("request-proof").addEventListener("click", async () => {
    if (wizard === null || !isComplete(wizard)) return;
    try {
      const doc = await prover.requestProof(toAnswers(wizard));
      session = holdClaim(session, doc);
      el<HTMLElement>("error").textContent = "";
    } catch (err) {
      el<HTMLElement>("error").textContent = `Proof request failed, try again: ${err}`;
    }
    refreshControls();
  });

  el<HTMLInputElement>("proceed").addEventListener("change", (event) => {
    session = setProceedWithoutClaim(session, (event.target as HTMLInputElement).checked);
    refreshControls();
  });
  el<HTMLInputElement>("tamper").addEventListener("change", (event) => {
    session = setTamperDebug(session, (event.target as HTMLInputElement).checked);
  });
  styleSelect.addEventListener("change", () => {
    session = selectCondition(session, styleSelect.value);
  });
  el<HTMLTextAreaElement>("query").addEventListener("input", refreshControls);

  el<HTMLButtonElement>("ask").addEventListener("click", async () => {
    const query = el<HTMLTextAreaElement>("query").value;
    if (!canAdvise(session, query)) return;
    const begun = beginAdvise(session);
    session = begun.state;
    refreshControls();
    const request: AdviseRequest = {
      query,
      d0_text: "",
      condition: session.selectedCondition,
    };
    if (session.claim !== null) {
      const doc = session.tamperDebug ? tamperProof(session.claim) : session.claim;
      request.journal = doc.journal;
      request.proof = doc.proof;
    }
    try {
      const response = await advisor.requestAdvice(request);
      session = completeAdvise(session, begun.token, query, response);
      renderTranscript();
    } catch (err) {
      session = failAdvise(session, begun.token);
      el<HTMLElement>("error").textContent = `Advice request failed: ${err}`;
    }
    refreshControls();
  });

  prover
    .fetchSpec()
    .then((spec) => {
      wizard = startWizard(spec);
      renderWizard();
      refreshControls();
    })
    .catch((err) => {
      el<HTMLElement>("wizard").innerHTML = `<p role="alert">Prover unreachable: ${err}</p>`;
    });

  return {
    getSession: () => session,
  };
}
