import { ApiClient } from "./api.js";
import { AnnotatorApp } from "./app.js";

function param(name: string, fallback: string): string {
  const value = new URLSearchParams(window.location.search).get(name);
  return value && value.trim() ? value.trim() : fallback;
}

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app element");
}

const app = new AnnotatorApp({
  root,
  api: new ApiClient(param("service", "http://127.0.0.1:8712")),
  batchId: param("batch", "batch-1"),
  annotatorId: param("annotator", "anonymous"),
});

void app.start();
