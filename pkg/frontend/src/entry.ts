import { mountApp } from "./main";

const root = document.getElementById("app");
if (root) mountApp(root);
