// Typed client for the consultation service. All numeric state lives on
// the server; this module only moves JSON.
export class ApiError extends Error {
    constructor(status, body) {
        super(body.message);
        this.status = status;
        this.body = body;
        this.name = "ApiError";
    }
    get code() {
        return this.body.code;
    }
}
export class ApiClient {
    constructor(base = "", fetchFn) {
        this.base = base;
        this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchFn(this.base + path, init);
        const text = await response.text();
        const data = text ? JSON.parse(text) : null;
        if (!response.ok) {
            const fallback = { code: "http_error", message: `HTTP ${response.status}` };
            throw new ApiError(response.status, data ?? fallback);
        }
        return data;
    }
    listSessions() {
        return this.request("GET", "/api/sessions");
    }
    createSession(kb) {
        return this.request("POST", "/api/sessions", kb);
    }
    net(session) {
        return this.request("GET", `/api/sessions/${session}/net`);
    }
    leg(session, legId) {
        return this.request("GET", `/api/sessions/${session}/legs/${encodeURIComponent(legId)}`);
    }
    evidence(session, leg, constraints) {
        return this.request("POST", `/api/sessions/${session}/evidence`, { leg, constraints });
    }
    explain(session, body) {
        return this.request("POST", `/api/sessions/${session}/explain`, body);
    }
    history(session) {
        return this.request("GET", `/api/sessions/${session}/history`);
    }
    structure(session, links) {
        return this.request("PUT", `/api/sessions/${session}/structure`, { links });
    }
    initialize(session) {
        return this.request("POST", `/api/sessions/${session}/initialize`);
    }
}
