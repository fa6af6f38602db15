/** Shared fixtures for the test suite. */

import type { ProofDocument, QuestionnaireSpec } from "../src/api.js";

export function makeSpec(): QuestionnaireSpec {
  return {
    version: "1.0.0",
    questions: Array.from({ length: 10 }, (_, id) => ({
      id,
      text: `Question ${id}?`,
      options: ["Low", "Medium", "High"],
      option_points: [0, 1, 2],
    })),
  };
}

export function makeProofDoc(): ProofDocument {
  return {
    journal: {
      category: 3,
      issued_at: 1700000000,
      program_version: "1.0.0",
      spec_digest: "ab".repeat(32),
    },
    proof: { backend_id: "mock", payload_hex: "cd".repeat(32) },
  };
}
