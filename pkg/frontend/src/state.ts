/**
 * Session state for the advice flow.
 *
 * Invariants enforced here rather than in the DOM layer:
 * - advise stays disabled until a claim is held or the user explicitly
 *   chooses to proceed without verification;
 * - every transcript entry carries the verification badge the advisor
 *   returned for that request;
 * - one in-flight advise request at a time, stale responses discarded via
 *   a request token.
 */

import type { AdviseResponse, ProofDocument, VerificationBadge } from "./api.js";
import { CATEGORY_LABELS } from "./api.js";

/** Human-facing names for the (c_prop, c_exp) condition pairings. */
export const ADVICE_STYLES: ReadonlyArray<{ label: string; condition: string }> = [
  { label: "Neutral", condition: "Cond0" },
  { label: "Cautious focus", condition: "Cond1" },
  { label: "Verified-strengths focus", condition: "Cond2" },
  { label: "Gentle verified focus", condition: "Cond3" },
  { label: "Contrasting view", condition: "Cond4" },
];

export interface TranscriptEntry {
  query: string;
  proposalText: string;
  proposalScore: number;
  explanation: string;
  badge: VerificationBadge;
}

export interface SessionState {
  claim: ProofDocument | null;
  proceedWithoutClaim: boolean;
  tamperDebug: boolean;
  selectedCondition: string;
  transcript: TranscriptEntry[];
  requestToken: number;
  inFlight: boolean;
}

export function initialSession(): SessionState {
  return {
    claim: null,
    proceedWithoutClaim: false,
    tamperDebug: false,
    selectedCondition: "Cond0",
    transcript: [],
    requestToken: 0,
    inFlight: false,
  };
}

export function holdClaim(state: SessionState, claim: ProofDocument): SessionState {
  return { ...state, claim };
}

export function dropClaim(state: SessionState): SessionState {
  return { ...state, claim: null };
}

export function setProceedWithoutClaim(state: SessionState, value: boolean): SessionState {
  return { ...state, proceedWithoutClaim: value };
}

export function setTamperDebug(state: SessionState, value: boolean): SessionState {
  return { ...state, tamperDebug: value };
}

export function selectCondition(state: SessionState, condition: string): SessionState {
  if (!ADVICE_STYLES.some((style) => style.condition === condition)) {
    throw new Error(`unknown condition ${condition}`);
  }
  return { ...state, selectedCondition: condition };
}

export function canAdvise(state: SessionState, query: string): boolean {
  if (state.inFlight) return false;
  if (query.trim().length === 0) return false;
  return state.claim !== null || state.proceedWithoutClaim;
}

/** Start an advise request; returns the token the response must match. */
export function beginAdvise(state: SessionState): { state: SessionState; token: number } {
  const token = state.requestToken + 1;
  return { state: { ...state, requestToken: token, inFlight: true }, token };
}

/** Record a response; responses for a superseded token are discarded. */
export function completeAdvise(
  state: SessionState,
  token: number,
  query: string,
  response: AdviseResponse,
): SessionState {
  if (token !== state.requestToken) return state;
  const entry: TranscriptEntry = {
    query,
    proposalText: response.proposal.text,
    proposalScore: response.proposal.score,
    explanation: response.explanation.text,
    badge: response.verification,
  };
  return { ...state, inFlight: false, transcript: [...state.transcript, entry] };
}

export function failAdvise(state: SessionState, token: number): SessionState {
  if (token !== state.requestToken) return state;
  return { ...state, inFlight: false };
}

export function claimBadgeText(state: SessionState): string {
  if (state.claim === null) return "No claim held";
  const label = CATEGORY_LABELS[state.claim.journal.category] ?? "Unknown";
  return `Verified claim: ${label} (program ${state.claim.journal.program_version})`;
}

export function claimTooltip(state: SessionState): string {
  return state.claim === null ? "" : `spec digest ${state.claim.journal.spec_digest}`;
}
