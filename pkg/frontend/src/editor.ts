import type { ApiClient } from "./api.js";
import type { SuggestionPayload } from "./types.js";

/**
 * Accept/reject checklist over an advisor suggestion. Submitting posts
 * the accepted swaps and resolves to the child run id once the rerun
 * completes; the dashboard then shows parent and child side by side.
 */
export class SeedEditor {
  private acceptedRemovals = new Set<number>();
  private acceptedPromotions = new Set<number>();

  constructor(
    private api: ApiClient,
    private runId: string,
    readonly suggestion: SuggestionPayload,
  ) {}

  toggleRemoval(vertex: number): void {
    if (!this.suggestion.removals.some((c) => c.vertex === vertex)) {
      throw new Error(`vertex ${vertex} is not a suggested removal`);
    }
    this.acceptedRemovals.has(vertex)
      ? this.acceptedRemovals.delete(vertex)
      : this.acceptedRemovals.add(vertex);
  }

  togglePromotion(vertex: number): void {
    if (!this.suggestion.promotions.some((c) => c.vertex === vertex)) {
      throw new Error(`vertex ${vertex} is not a suggested promotion`);
    }
    this.acceptedPromotions.has(vertex)
      ? this.acceptedPromotions.delete(vertex)
      : this.acceptedPromotions.add(vertex);
  }

  acceptAll(): void {
    for (const c of this.suggestion.removals) this.acceptedRemovals.add(c.vertex);
    for (const c of this.suggestion.promotions) this.acceptedPromotions.add(c.vertex);
  }

  rejectAll(): void {
    this.acceptedRemovals.clear();
    this.acceptedPromotions.clear();
  }

  get accepted(): { removals: number[]; promotions: number[] } {
    return {
      removals: [...this.acceptedRemovals].sort((a, b) => a - b),
      promotions: [...this.acceptedPromotions].sort((a, b) => a - b),
    };
  }

  /** Submit is gated on at least one accepted swap. */
  get canSubmit(): boolean {
    return this.acceptedRemovals.size > 0 || this.acceptedPromotions.size > 0;
  }

  async submit(): Promise<string> {
    if (!this.canSubmit) throw new Error("nothing accepted");
    const { removals, promotions } = this.accepted;
    const { run_id } = await this.api.submitModified(
      this.runId,
      removals,
      promotions,
      this.suggestion.n,
    );
    await this.api.waitForRun(run_id);
    return run_id;
  }
}
