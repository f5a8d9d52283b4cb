// Entry point: attach to an existing session (the service pre-creates one
// when started with --kb) or offer a paste box to start from a
// knowledge-base document.
import { ApiClient } from "./api.js";
import { Consultation } from "./controller.js";
import { mountApp } from "./ui.js";
const api = new ApiClient("");
async function boot() {
    const root = document.getElementById("app");
    if (!root)
        throw new Error("missing #app element");
    try {
        const { sessions } = await api.listSessions();
        if (sessions.length > 0) {
            const consultation = await Consultation.attach(api, sessions[sessions.length - 1]);
            mountApp(root, consultation);
            return;
        }
    }
    catch (error) {
        root.textContent = `Cannot reach the consultation service: ${String(error)}`;
        return;
    }
    root.textContent = "";
    const box = document.createElement("div");
    box.className = "starter";
    const heading = document.createElement("h1");
    heading.textContent = "Start a consultation";
    const textarea = document.createElement("textarea");
    textarea.placeholder = "Paste a knowledge-base JSON document here";
    const button = document.createElement("button");
    button.textContent = "Create session";
    const problem = document.createElement("p");
    problem.className = "problem";
    button.onclick = async () => {
        try {
            const kb = JSON.parse(textarea.value);
            const consultation = await Consultation.create(api, kb);
            mountApp(root, consultation);
        }
        catch (error) {
            problem.textContent = String(error);
        }
    };
    box.append(heading, textarea, button, problem);
    root.append(box);
}
boot();
