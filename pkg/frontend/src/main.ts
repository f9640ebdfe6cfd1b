import { initApp } from "./app";
import "./style.css";

const root = document.querySelector<HTMLDivElement>("#app");
if (!root) {
  throw new Error("#app container missing");
}
initApp(root);
