// Pure switch-panel and form logic, kept free of DOM and network so the
// behaviour is unit-testable.

import type { ExplainRequest } from "./api.js";

export type FilterSetting = "none" | "causal" | "diagnostic";
export type ScopeSetting = "local" | "global";
export type DetailSetting = "user" | "ke";
export type WhenSetting = number | "all" | null; // null = latest update

export interface SwitchPanelState {
  filter: FilterSetting;
  scope: ScopeSetting;
  detail: DetailSetting;
  when: WhenSetting;
}

export function defaultSwitches(): SwitchPanelState {
  return { filter: "none", scope: "local", detail: "user", when: null };
}

export type ExplainGate = { ok: true } | { ok: false; reason: string };

export function canExplain(switches: SwitchPanelState, hypothesis: string | null): ExplainGate {
  if (!hypothesis) {
    return { ok: false, reason: "Select an event to explain first." };
  }
  if (switches.scope === "global" && switches.filter === "none") {
    return {
      ok: false,
      reason: "Global explanations require the Causal or Diagnostic filter.",
    };
  }
  return { ok: true };
}

export function buildExplainBody(
  switches: SwitchPanelState,
  hypothesis: string,
  leg: string,
): ExplainRequest {
  const body: ExplainRequest = {
    hypothesis,
    leg,
    scope: switches.scope,
    filter: switches.filter,
    detail: switches.detail,
  };
  if (switches.when !== null) {
    body.when = switches.when;
  }
  return body;
}

/** Validate an evidence form; returns an error message or null when fine. */
export function validateConstraints(constraints: Record<string, number>): string | null {
  const names = Object.keys(constraints);
  if (names.length === 0) {
    return "Enter a target probability for at least one event.";
  }
  for (const name of names) {
    const value = constraints[name];
    if (!Number.isFinite(value) || value < 0 || value > 1) {
      return `${name}: probability must lie between 0 and 1.`;
    }
  }
  return null;
}

export interface TypeoutEntry {
  kind: "explanation" | "error" | "info";
  text: string;
}

/** Append without mutating; the typeout shows server text verbatim. */
export function appendTypeout(lines: TypeoutEntry[], entry: TypeoutEntry): TypeoutEntry[] {
  return [...lines, entry];
}
