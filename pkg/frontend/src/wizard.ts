/** Questionnaire wizard state: collect 10 answers, validate client-side. */

import type { QuestionnaireSpec } from "./api.js";

export const QUESTION_COUNT = 10;

export interface WizardState {
  spec: QuestionnaireSpec;
  /** answer index per question, null while unanswered */
  draft: Array<number | null>;
}

export function startWizard(spec: QuestionnaireSpec): WizardState {
  if (spec.questions.length !== QUESTION_COUNT) {
    throw new Error(`expected ${QUESTION_COUNT} questions, got ${spec.questions.length}`);
  }
  return { spec, draft: Array(QUESTION_COUNT).fill(null) };
}

export function answer(state: WizardState, questionId: number, optionIndex: number): WizardState {
  if (questionId < 0 || questionId >= QUESTION_COUNT) {
    throw new Error(`question id ${questionId} out of range`);
  }
  if (optionIndex < 0 || optionIndex > 2 || !Number.isInteger(optionIndex)) {
    throw new Error(`option index ${optionIndex} out of range`);
  }
  const draft = [...state.draft];
  draft[questionId] = optionIndex;
  return { ...state, draft };
}

/** Per-question validation messages; empty when the form can be submitted. */
export function validationErrors(state: WizardState): Map<number, string> {
  const errors = new Map<number, string>();
  state.draft.forEach((value, id) => {
    if (value === null) errors.set(id, "Please choose an option.");
  });
  return errors;
}

export function isComplete(state: WizardState): boolean {
  return validationErrors(state).size === 0;
}

/** The private profile payload for the prover; never send this to the advisor. */
export function toAnswers(state: WizardState): number[] {
  if (!isComplete(state)) throw new Error("wizard incomplete");
  return state.draft.map((value) => value as number);
}
