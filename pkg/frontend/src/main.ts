/** Browser entry point. Service URLs can be overridden via query params. */

import { createApp } from "./app.js";

const params = new URLSearchParams(window.location.search);
createApp(document.getElementById("app") as HTMLElement, {
  proverUrl: params.get("prover") ?? "http://127.0.0.1:8100",
  advisorUrl: params.get("advisor") ?? "http://127.0.0.1:8200",
});
