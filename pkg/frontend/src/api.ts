/**
 * Typed clients for the prover (entity 1) and advisor (entity 2) services.
 *
 * The privacy boundary lives here: the advisor client's request type has no
 * field for questionnaire answers, and `requestAdvice` is the only code path
 * that talks to the advisor origin. Raw answers only ever travel to the
 * prover's /v1/infer endpoint.
 */

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface QuestionnaireSpec {
  version: string;
  questions: Array<{
    id: number;
    text: string;
    options: string[];
    option_points: number[];
  }>;
}

export interface Journal {
  category: number;
  issued_at: number;
  program_version: string;
  spec_digest: string;
}

export interface ProofDocument {
  journal: Journal;
  proof: { backend_id: string; payload_hex: string };
}

export type VerificationBadge =
  | "Valid"
  | "InvalidProof"
  | "ProgramMismatch"
  | "MalformedJournal"
  | "NoClaim";

export interface AdviseRequest {
  query: string;
  d0_text: string;
  condition: string;
  preset?: string;
  journal?: Journal;
  proof?: ProofDocument["proof"];
  seed?: number;
}

export interface AdviseResponse {
  proposal: { text: string; score: number; retries_used: number };
  explanation: { text: string };
  verification: VerificationBadge;
  contexts_used: [string, string];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly body: unknown,
  ) {
    super(`request failed with status ${status}`);
  }
}

async function postJson<T>(fetchFn: FetchLike, url: string, body: unknown): Promise<T> {
  const response = await fetchFn(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  const parsed = await response.json().catch(() => undefined);
  if (!response.ok) throw new ApiError(response.status, parsed);
  return parsed as T;
}

export const CATEGORY_LABELS = [
  "Conservative",
  "Steady Growth",
  "Balanced",
  "Aggressive Investment",
] as const;

export class ProverClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async fetchSpec(): Promise<QuestionnaireSpec> {
    const response = await this.fetchFn(`${this.baseUrl}/v1/spec`);
    if (!response.ok) throw new ApiError(response.status, await response.text());
    return (await response.json()) as QuestionnaireSpec;
  }

  /** Sends the private answers; this is the only call that may carry them. */
  requestProof(answers: number[]): Promise<ProofDocument> {
    return postJson<ProofDocument>(this.fetchFn, `${this.baseUrl}/v1/infer`, { answers });
  }
}

export class AdvisorClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  requestAdvice(request: AdviseRequest): Promise<AdviseResponse> {
    return postJson<AdviseResponse>(this.fetchFn, `${this.baseUrl}/v1/advise`, request);
  }

  async verify(doc: ProofDocument): Promise<VerificationBadge> {
    const result = await postJson<{ outcome: VerificationBadge }>(
      this.fetchFn,
      `${this.baseUrl}/v1/verify`,
      doc,
    );
    return result.outcome;
  }
}

/**
 * Debug helper: corrupt one byte of the proof payload so the advisor's
 * verification must reject the claim. Used by the tamper toggle.
 */
export function tamperProof(doc: ProofDocument): ProofDocument {
  const hex = doc.proof.payload_hex;
  const flipped = (hex[0] === "0" ? "1" : "0") + hex.slice(1);
  return { journal: doc.journal, proof: { ...doc.proof, payload_hex: flipped } };
}
