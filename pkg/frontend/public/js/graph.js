// Net diagram model: legs on a circle, shared-event edges, causal links
// drawn between the legs housing their endpoints, and the last explanation
// chain highlighted. Pure geometry here; SVG assembly in ui.ts.
export function layoutNet(net, chain, width = 640, height = 360) {
    const count = net.legs.length;
    const radius = Math.min(width, height) / 2 - 60;
    const cx = width / 2;
    const cy = height / 2;
    const chainSet = new Set(chain);
    const nodes = net.legs.map((leg, k) => {
        const angle = (2 * Math.PI * k) / count - Math.PI / 2;
        return {
            id: leg.id,
            x: Math.round(cx + radius * Math.cos(angle)),
            y: Math.round(cy + radius * Math.sin(angle)),
            events: leg.events,
            inChain: leg.events.some((e) => chainSet.has(e)),
        };
    });
    const eventsByLeg = new Map(net.legs.map((leg) => [leg.id, new Set(leg.events)]));
    const consecutive = [];
    for (let i = 0; i + 1 < chain.length; i += 1) {
        consecutive.push([chain[i], chain[i + 1]]);
    }
    const edges = net.edges.map((edge) => {
        const aEvents = eventsByLeg.get(edge.a);
        const bEvents = eventsByLeg.get(edge.b);
        const highlighted = consecutive.some(([x, y]) => (aEvents?.has(x) && bEvents?.has(y)) || (aEvents?.has(y) && bEvents?.has(x)));
        return { ...edge, highlighted };
    });
    const firstLegOf = (event) => {
        for (const leg of net.legs) {
            if (leg.events.includes(event)) {
                return leg.id;
            }
        }
        return null;
    };
    const arrows = [];
    for (const link of net.causal_links) {
        const fromLeg = firstLegOf(link.from);
        const toLeg = firstLegOf(link.to);
        if (fromLeg && toLeg && fromLeg !== toLeg) {
            arrows.push({ fromLeg, toLeg, label: `${link.from} → ${link.to}` });
        }
    }
    return { nodes, edges, arrows, width, height };
}
