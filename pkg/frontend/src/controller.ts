// Session controller: owns client-side UI state (selections, switches,
// typeout) and talks to the service. Every mutation re-fetches what it
// may have staled; no probabilities are computed locally.

import {
  ApiClient,
  ApiError,
  ExplainResponse,
  LegDetail,
  NetSummary,
  UpdateSummary,
  CausalLink,
} from "./api.js";
import {
  SwitchPanelState,
  TypeoutEntry,
  appendTypeout,
  buildExplainBody,
  canExplain,
  defaultSwitches,
  validateConstraints,
  ExplainGate,
} from "./state.js";

export class Consultation {
  net: NetSummary | null = null;
  history: UpdateSummary[] = [];
  selectedLeg: string | null = null;
  legDetail: LegDetail | null = null;
  hypothesis: string | null = null;
  switches: SwitchPanelState = defaultSwitches();
  typeout: TypeoutEntry[] = [];
  lastChain: string[] = [];
  onChange: () => void = () => {};

  constructor(private api: ApiClient, readonly sessionId: string) {}

  static async create(api: ApiClient, kb: unknown): Promise<Consultation> {
    const { id } = await api.createSession(kb);
    const consultation = new Consultation(api, id);
    await consultation.refresh();
    return consultation;
  }

  static async attach(api: ApiClient, sessionId: string): Promise<Consultation> {
    const consultation = new Consultation(api, sessionId);
    await consultation.refresh();
    return consultation;
  }

  private changed(): void {
    this.onChange();
  }

  async refresh(): Promise<void> {
    this.net = await this.api.net(this.sessionId);
    this.history = (await this.api.history(this.sessionId)).updates;
    if (this.selectedLeg) {
      this.legDetail = await this.api.leg(this.sessionId, this.selectedLeg);
    }
    this.changed();
  }

  async selectLeg(legId: string): Promise<void> {
    this.selectedLeg = legId;
    this.legDetail = await this.api.leg(this.sessionId, legId);
    if (this.hypothesis && !this.legDetail.events.some((e) => e.name === this.hypothesis)) {
      this.hypothesis = null;
    }
    this.changed();
  }

  selectEvent(name: string): void {
    this.hypothesis = name;
    this.changed();
  }

  setSwitches(patch: Partial<SwitchPanelState>): void {
    this.switches = { ...this.switches, ...patch };
    this.changed();
  }

  explainGate(): ExplainGate {
    return canExplain(this.switches, this.hypothesis);
  }

  async explain(): Promise<void> {
    const gate = this.explainGate();
    if (!gate.ok) {
      this.typeout = appendTypeout(this.typeout, { kind: "error", text: gate.reason });
      this.changed();
      return;
    }
    const body = buildExplainBody(this.switches, this.hypothesis!, this.selectedLeg!);
    try {
      const response: ExplainResponse = await this.api.explain(this.sessionId, body);
      this.typeout = appendTypeout(this.typeout, {
        kind: "explanation",
        text: response.rendered_text,
      });
      this.lastChain = [
        response.explanation.hypothesis,
        ...response.explanation.clauses.map((c) => c.explainer),
      ];
    } catch (error) {
      if (error instanceof ApiError) {
        // Service messages (FilterExhausted and friends) appear verbatim.
        this.typeout = appendTypeout(this.typeout, { kind: "error", text: error.body.message });
      } else {
        throw error;
      }
    }
    this.changed();
  }

  /** Returns an error message when the form is invalid (nothing posted). */
  async assertEvidence(constraints: Record<string, number>): Promise<string | null> {
    if (!this.selectedLeg) {
      return "Select a leg first.";
    }
    const problem = validateConstraints(constraints);
    if (problem !== null) {
      return problem;
    }
    try {
      await this.api.evidence(this.sessionId, this.selectedLeg, constraints);
    } catch (error) {
      if (error instanceof ApiError) {
        return error.body.message;
      }
      throw error;
    }
    await this.refresh();
    return null;
  }

  async initialize(): Promise<void> {
    await this.api.initialize(this.sessionId);
    this.lastChain = [];
    await this.refresh();
  }

  async setStructure(links: CausalLink[]): Promise<string | null> {
    try {
      await this.api.structure(this.sessionId, links);
    } catch (error) {
      if (error instanceof ApiError) {
        return error.body.message;
      }
      throw error;
    }
    await this.refresh();
    return null;
  }

  clearTypeout(): void {
    this.typeout = [];
    this.changed();
  }

  pushInfo(text: string): void {
    this.typeout = appendTypeout(this.typeout, { kind: "info", text });
    this.changed();
  }
}
