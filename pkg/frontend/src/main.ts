import { mount } from "./app.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://127.0.0.1:8080";
mount(document, base);
