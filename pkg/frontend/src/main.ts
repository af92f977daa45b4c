import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

window.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("app");
  if (!root) {
    throw new Error("missing #app container");
  }
  createApp(root, new ApiClient("")).catch((error) => {
    root.textContent = `failed to start: ${(error as Error).message}`;
  });
});
