// Session controller: owns client-side UI state (selections, switches,
// typeout) and talks to the service. Every mutation re-fetches what it
// may have staled; no probabilities are computed locally.
import { ApiError, } from "./api.js";
import { appendTypeout, buildExplainBody, canExplain, defaultSwitches, validateConstraints, } from "./state.js";
export class Consultation {
    constructor(api, sessionId) {
        this.api = api;
        this.sessionId = sessionId;
        this.net = null;
        this.history = [];
        this.selectedLeg = null;
        this.legDetail = null;
        this.hypothesis = null;
        this.switches = defaultSwitches();
        this.typeout = [];
        this.lastChain = [];
        this.onChange = () => { };
    }
    static async create(api, kb) {
        const { id } = await api.createSession(kb);
        const consultation = new Consultation(api, id);
        await consultation.refresh();
        return consultation;
    }
    static async attach(api, sessionId) {
        const consultation = new Consultation(api, sessionId);
        await consultation.refresh();
        return consultation;
    }
    changed() {
        this.onChange();
    }
    async refresh() {
        this.net = await this.api.net(this.sessionId);
        this.history = (await this.api.history(this.sessionId)).updates;
        if (this.selectedLeg) {
            this.legDetail = await this.api.leg(this.sessionId, this.selectedLeg);
        }
        this.changed();
    }
    async selectLeg(legId) {
        this.selectedLeg = legId;
        this.legDetail = await this.api.leg(this.sessionId, legId);
        if (this.hypothesis && !this.legDetail.events.some((e) => e.name === this.hypothesis)) {
            this.hypothesis = null;
        }
        this.changed();
    }
    selectEvent(name) {
        this.hypothesis = name;
        this.changed();
    }
    setSwitches(patch) {
        this.switches = { ...this.switches, ...patch };
        this.changed();
    }
    explainGate() {
        return canExplain(this.switches, this.hypothesis);
    }
    async explain() {
        const gate = this.explainGate();
        if (!gate.ok) {
            this.typeout = appendTypeout(this.typeout, { kind: "error", text: gate.reason });
            this.changed();
            return;
        }
        const body = buildExplainBody(this.switches, this.hypothesis, this.selectedLeg);
        try {
            const response = await this.api.explain(this.sessionId, body);
            this.typeout = appendTypeout(this.typeout, {
                kind: "explanation",
                text: response.rendered_text,
            });
            this.lastChain = [
                response.explanation.hypothesis,
                ...response.explanation.clauses.map((c) => c.explainer),
            ];
        }
        catch (error) {
            if (error instanceof ApiError) {
                // Service messages (FilterExhausted and friends) appear verbatim.
                this.typeout = appendTypeout(this.typeout, { kind: "error", text: error.body.message });
            }
            else {
                throw error;
            }
        }
        this.changed();
    }
    /** Returns an error message when the form is invalid (nothing posted). */
    async assertEvidence(constraints) {
        if (!this.selectedLeg) {
            return "Select a leg first.";
        }
        const problem = validateConstraints(constraints);
        if (problem !== null) {
            return problem;
        }
        try {
            await this.api.evidence(this.sessionId, this.selectedLeg, constraints);
        }
        catch (error) {
            if (error instanceof ApiError) {
                return error.body.message;
            }
            throw error;
        }
        await this.refresh();
        return null;
    }
    async initialize() {
        await this.api.initialize(this.sessionId);
        this.lastChain = [];
        await this.refresh();
    }
    async setStructure(links) {
        try {
            await this.api.structure(this.sessionId, links);
        }
        catch (error) {
            if (error instanceof ApiError) {
                return error.body.message;
            }
            throw error;
        }
        await this.refresh();
        return null;
    }
    clearTypeout() {
        this.typeout = [];
        this.changed();
    }
    pushInfo(text) {
        this.typeout = appendTypeout(this.typeout, { kind: "info", text });
        this.changed();
    }
}
