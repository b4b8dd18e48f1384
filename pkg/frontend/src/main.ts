/** Entry point: reads service URL and annotator token from the query
 * string (?service=...&token=...), then mounts the session. */
import { mount } from "./view.js";

const params = new URLSearchParams(window.location.search);
const serviceUrl = params.get("service") ?? "http://127.0.0.1:8321";
const token = params.get("token") ?? "";

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}
if (!token) {
  root.textContent = "Add ?token=<your annotator token> to the URL to begin.";
} else {
  mount(root, serviceUrl, token);
}
