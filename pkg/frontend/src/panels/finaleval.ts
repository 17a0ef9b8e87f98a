/** Final-evaluation screen: the only path to the test part.
 *
 * The capability token is only produced after an explicit confirmation,
 * and the API client refuses part=test requests without it.
 */

export interface TestAccess {
  readonly allowTest: true;
}

export function confirmFinalEvaluation(confirmed: boolean): TestAccess | null {
  return confirmed ? { allowTest: true } : null;
}

export const FINAL_EVAL_WARNING =
  "This runs the saved rules against the held-out test part. " +
  "Do this once, after rule building is finished; repeated peeking " +
  "defeats the point of the split.";
