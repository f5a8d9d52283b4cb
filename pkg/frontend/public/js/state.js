// Pure switch-panel and form logic, kept free of DOM and network so the
// behaviour is unit-testable.
export function defaultSwitches() {
    return { filter: "none", scope: "local", detail: "user", when: null };
}
export function canExplain(switches, hypothesis) {
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
export function buildExplainBody(switches, hypothesis, leg) {
    const body = {
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
export function validateConstraints(constraints) {
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
/** Append without mutating; the typeout shows server text verbatim. */
export function appendTypeout(lines, entry) {
    return [...lines, entry];
}
