/** Judgment form state: all three fields must be set before submit. */
import type { AnnotationRecord, Severity, Validity } from "./types.js";
import { SEVERITY_LEVELS } from "./types.js";

export class JudgmentForm {
  validity: Validity | null = null;
  agreement: number | null = null;
  severity: Severity | null = null;

  setValidity(value: Validity): void {
    this.validity = value;
  }

  setAgreement(value: number): void {
    if (!Number.isInteger(value) || value < 1 || value > 5) {
      throw new RangeError(`agreement must be an integer in [1, 5], got ${value}`);
    }
    this.agreement = value;
  }

  setSeverity(value: Severity): void {
    if (!SEVERITY_LEVELS.includes(value)) {
      throw new RangeError(`unknown severity ${value}`);
    }
    this.severity = value;
  }

  /** Keyboard shortcut: digits 1-5 set the agreement scale. */
  handleKey(key: string): boolean {
    if (/^[1-5]$/.test(key)) {
      this.setAgreement(Number(key));
      return true;
    }
    return false;
  }

  get canSubmit(): boolean {
    return this.validity !== null && this.agreement !== null && this.severity !== null;
  }

  toRecord(annotator: string, claimId: string): AnnotationRecord {
    if (!this.canSubmit) {
      throw new Error("submit is disabled until validity, agreement and severity are set");
    }
    return {
      annotator,
      claim_id: claimId,
      validity: this.validity as Validity,
      agreement: this.agreement as number,
      severity: this.severity as Severity,
    };
  }

  reset(): void {
    this.validity = null;
    this.agreement = null;
    this.severity = null;
  }
}
