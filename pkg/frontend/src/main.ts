import { App } from "./app.js";

window.addEventListener("DOMContentLoaded", () => {
  new App().start();
});
