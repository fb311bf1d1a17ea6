import { ApiClient } from "./api";
import { SessionPanel } from "./state";
import { mount } from "./ui";

const DEFAULT_THEORY = `sort entity
const J M B : entity
pred man : entity default unknown
pred walk : entity default unknown
fact man(J) = true
fact man(M) = false
fact man(B) = true
fact walk(J) = true
fact walk(M) = true
`;

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8787";

const client = new ApiClient(baseUrl);
const panel = new SessionPanel(client);
const root = document.getElementById("app");
if (root === null) throw new Error("missing #app element");
mount(root, panel, DEFAULT_THEORY);
