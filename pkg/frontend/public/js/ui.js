// DOM layer: renders the consultation window from controller state and
// wires user actions back into it. No probability math happens here.
import { layoutNet } from "./graph.js";
const HELP_TEXT = [
    "Pick a leg, then an event: that event becomes the hypothesis to explain.",
    "Switches: Causal limits explainers to designated causes, Diagnostic to " +
        "symptoms; Local explains within the leg, Global chains along causal links " +
        "(and needs Causal or Diagnostic); User/Knowledge Engineer sets the detail; " +
        "When picks the update in focus (current, a number, or the whole history).",
    "Assert evidence from the form on the right; 'occurred' and 'ruled out' are " +
        "shortcuts for 1.0 and 0.0. Initialize resets the session to its priors.",
].join("\n");
function el(tag, className, text) {
    const node = document.createElement(tag);
    if (className)
        node.className = className;
    if (text !== undefined)
        node.textContent = text;
    return node;
}
function radioRow(name, options, current, onPick) {
    const row = el("div", "switch-row");
    row.append(el("span", "switch-name", name));
    for (const [value, label] of options) {
        const button = el("button", value === current ? "switch on" : "switch", label);
        button.onclick = () => onPick(value);
        row.append(button);
    }
    return row;
}
export function mountApp(root, consultation) {
    root.textContent = "";
    const header = el("header");
    header.append(el("h1", undefined, "Consultation Explanation Window"));
    header.append(el("span", "session-tag", `session ${consultation.sessionId.slice(0, 8)}`));
    const status = el("span", "status");
    header.append(status);
    const layout = el("main");
    const left = el("section", "pane legs-pane");
    const centre = el("section", "pane typeout-pane");
    const right = el("section", "pane evidence-pane");
    const bottom = el("section", "pane graph-pane");
    layout.append(left, centre, right, bottom);
    root.append(header, layout);
    const setStatus = (text) => {
        status.textContent = text;
    };
    const guard = (work) => {
        work.catch((error) => setStatus(String(error)));
    };
    function renderSwitches() {
        const panel = el("div", "switch-panel");
        panel.append(radioRow("Filter", [
            ["none", "None"],
            ["causal", "Causal"],
            ["diagnostic", "Diagnostic"],
        ], consultation.switches.filter, (filter) => consultation.setSwitches({ filter })), radioRow("Scope", [
            ["local", "Local"],
            ["global", "Global"],
        ], consultation.switches.scope, (scope) => consultation.setSwitches({ scope })), radioRow("Detail", [
            ["user", "User"],
            ["ke", "Knowledge Engineer"],
        ], consultation.switches.detail, (detail) => consultation.setSwitches({ detail })));
        const whenRow = el("div", "switch-row");
        whenRow.append(el("span", "switch-name", "When"));
        const select = el("select");
        select.id = "when-select";
        const current = new Option("Use-Current-Data", "current");
        const all = new Option("Use-All-History", "all");
        select.append(current, all);
        for (const update of consultation.history) {
            select.append(new Option(`update ${update.index} (${update.source_leg})`, String(update.index)));
        }
        const when = consultation.switches.when;
        select.value = when === null ? "current" : String(when);
        select.onchange = () => {
            const value = select.value;
            consultation.setSwitches({
                when: value === "current" ? null : value === "all" ? "all" : Number(value),
            });
        };
        whenRow.append(select);
        panel.append(whenRow);
        return panel;
    }
    function renderLegs() {
        left.textContent = "";
        left.append(el("h2", undefined, "Local Event Groups (LEGs)"));
        const legList = el("ul", "menu");
        for (const leg of consultation.net?.legs ?? []) {
            const item = el("li", leg.id === consultation.selectedLeg ? "picked" : "");
            const button = el("button", undefined, leg.id);
            button.onclick = () => guard(consultation.selectLeg(leg.id));
            item.append(button);
            legList.append(item);
        }
        left.append(legList);
        left.append(el("h2", undefined, "Events Within the Highlighted LEG"));
        const eventList = el("ul", "menu");
        for (const event of consultation.legDetail?.events ?? []) {
            const item = el("li", event.name === consultation.hypothesis ? "picked" : "");
            const button = el("button", undefined, `${event.name}  (${event.probability.toFixed(4)})`);
            button.onclick = () => consultation.selectEvent(event.name);
            item.append(button);
            eventList.append(item);
        }
        left.append(eventList);
    }
    function renderTypeout() {
        centre.textContent = "";
        const top = el("div", "typeout-top");
        top.append(el("h2", undefined, "Explanation Typeout Window"));
        top.append(renderSwitches());
        centre.append(top);
        const typeout = el("div", "typeout");
        for (const entry of consultation.typeout) {
            typeout.append(el("p", `entry ${entry.kind}`, entry.text));
        }
        centre.append(typeout);
        typeout.scrollTop = typeout.scrollHeight;
        const commands = el("div", "commands");
        const explainButton = el("button", "command", "Explain");
        const gate = consultation.explainGate();
        explainButton.disabled = !gate.ok;
        explainButton.title = gate.ok ? "" : gate.reason;
        explainButton.onclick = () => guard(consultation.explain());
        const hint = el("span", "hint", gate.ok ? "" : gate.reason);
        const whenButton = el("button", "command", "When");
        whenButton.onclick = () => {
            document.getElementById("when-select")?.focus();
        };
        const clearButton = el("button", "command", "Clear");
        clearButton.onclick = () => consultation.clearTypeout();
        const initButton = el("button", "command", "Initialize");
        initButton.onclick = () => {
            if (window.confirm("Reset the session to its prior probabilities?")) {
                guard(consultation.initialize());
            }
        };
        const structureButton = el("button", "command", "Structure");
        structureButton.onclick = () => {
            const currentLinks = consultation.net?.causal_links ?? [];
            const raw = window.prompt('Causal links as JSON (e.g. [{"from": "A", "to": "B"}])', JSON.stringify(currentLinks));
            if (raw === null)
                return;
            let links;
            try {
                links = JSON.parse(raw);
            }
            catch {
                setStatus("Structure: not valid JSON");
                return;
            }
            guard(consultation.setStructure(links).then((problem) => {
                if (problem)
                    setStatus(`Structure rejected: ${problem}`);
            }));
        };
        const helpButton = el("button", "command", "Help");
        helpButton.onclick = () => consultation.pushInfo(HELP_TEXT);
        commands.append(explainButton, whenButton, clearButton, initButton, structureButton, helpButton, hint);
        centre.append(commands);
    }
    function renderEvidence() {
        right.textContent = "";
        right.append(el("h2", undefined, "Assert Evidence"));
        const detail = consultation.legDetail;
        if (!detail) {
            right.append(el("p", "dim", "Select a leg to enter evidence."));
        }
        else {
            const form = el("form", "evidence-form");
            const inputs = new Map();
            for (const event of detail.events) {
                const row = el("div", "evidence-row");
                row.append(el("label", undefined, event.name));
                const input = el("input");
                input.type = "number";
                input.min = "0";
                input.max = "1";
                input.step = "0.01";
                input.placeholder = event.probability.toFixed(4);
                inputs.set(event.name, input);
                const occurred = el("button", "mini", "occurred");
                occurred.type = "button";
                occurred.onclick = () => {
                    input.value = "1.0";
                };
                const ruledOut = el("button", "mini", "ruled out");
                ruledOut.type = "button";
                ruledOut.onclick = () => {
                    input.value = "0.0";
                };
                row.append(input, occurred, ruledOut);
                form.append(row);
            }
            const problem = el("p", "problem");
            const submit = el("button", "command", "Assert");
            submit.type = "submit";
            form.append(submit, problem);
            form.onsubmit = (raised) => {
                raised.preventDefault();
                const constraints = {};
                for (const [name, input] of inputs) {
                    if (input.value.trim() !== "") {
                        constraints[name] = Number(input.value);
                    }
                }
                guard(consultation.assertEvidence(constraints).then((message) => {
                    problem.textContent = message ?? "";
                }));
            };
            right.append(form);
        }
        right.append(el("h2", undefined, "Update History"));
        const list = el("ol", "history");
        for (const update of consultation.history) {
            const constraints = Object.entries(update.constraints)
                .map(([name, p]) => `${name}=${p}`)
                .join(", ");
            list.append(el("li", undefined, `${update.source_leg}: ${constraints} → touched ${update.touched.join(", ")}`));
        }
        right.append(list);
    }
    const SVG_NS = "http://www.w3.org/2000/svg";
    function renderGraph() {
        bottom.textContent = "";
        bottom.append(el("h2", undefined, "LEG Net and Causal Structure"));
        const net = consultation.net;
        if (!net)
            return;
        const model = layoutNet(net, consultation.lastChain);
        const svg = document.createElementNS(SVG_NS, "svg");
        svg.setAttribute("viewBox", `0 0 ${model.width} ${model.height}`);
        const place = new Map(model.nodes.map((n) => [n.id, n]));
        for (const edge of model.edges) {
            const a = place.get(edge.a);
            const b = place.get(edge.b);
            const line = document.createElementNS(SVG_NS, "line");
            line.setAttribute("x1", String(a.x));
            line.setAttribute("y1", String(a.y));
            line.setAttribute("x2", String(b.x));
            line.setAttribute("y2", String(b.y));
            line.setAttribute("class", edge.highlighted ? "edge chain" : "edge");
            const title = document.createElementNS(SVG_NS, "title");
            title.textContent = `shared: ${edge.shared.join(", ")}`;
            line.append(title);
            svg.append(line);
        }
        for (const arrow of model.arrows) {
            const a = place.get(arrow.fromLeg);
            const b = place.get(arrow.toLeg);
            const line = document.createElementNS(SVG_NS, "line");
            const shrink = 0.18;
            line.setAttribute("x1", String(a.x + (b.x - a.x) * shrink));
            line.setAttribute("y1", String(a.y + (b.y - a.y) * shrink));
            line.setAttribute("x2", String(b.x - (b.x - a.x) * shrink));
            line.setAttribute("y2", String(b.y - (b.y - a.y) * shrink));
            line.setAttribute("class", "causal");
            line.setAttribute("marker-end", "url(#arrowhead)");
            const title = document.createElementNS(SVG_NS, "title");
            title.textContent = arrow.label;
            line.append(title);
            svg.append(line);
        }
        const defs = document.createElementNS(SVG_NS, "defs");
        defs.innerHTML =
            '<marker id="arrowhead" markerWidth="8" markerHeight="6" refX="8" refY="3" orient="auto">' +
                '<polygon points="0 0, 8 3, 0 6" /></marker>';
        svg.append(defs);
        for (const node of model.nodes) {
            const group = document.createElementNS(SVG_NS, "g");
            group.setAttribute("class", node.inChain ? "node chain" : "node");
            group.addEventListener("click", () => guard(consultation.selectLeg(node.id)));
            const circle = document.createElementNS(SVG_NS, "circle");
            circle.setAttribute("cx", String(node.x));
            circle.setAttribute("cy", String(node.y));
            circle.setAttribute("r", "26");
            const label = document.createElementNS(SVG_NS, "text");
            label.setAttribute("x", String(node.x));
            label.setAttribute("y", String(node.y - 32));
            label.textContent = node.id;
            const title = document.createElementNS(SVG_NS, "title");
            title.textContent = node.events.join(", ");
            group.append(circle, label, title);
            svg.append(group);
        }
        bottom.append(svg);
    }
    function render() {
        renderLegs();
        renderTypeout();
        renderEvidence();
        renderGraph();
    }
    consultation.onChange = render;
    render();
}
