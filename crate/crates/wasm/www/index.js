import init, { lattice_report, grid_max, artin_schreier } from "./pkg/latval_wasm.js";

const $ = (id) => document.getElementById(id);

function showError(el, msg) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = msg;
  el.appendChild(p);
}

function pre(text) {
  const p = document.createElement("pre");
  p.textContent = text;
  return p;
}

const SVG = "http://www.w3.org/2000/svg";

function svgEl(name, attrs) {
  const e = document.createElementNS(SVG, name);
  for (const [k, v] of Object.entries(attrs)) e.setAttribute(k, v);
  return e;
}

// Hasse diagram, rows by height, with the rank witness cube highlighted.
function hasse(r) {
  const rows = new Map();
  r.heights.forEach((h, i) => {
    if (!rows.has(h)) rows.set(h, []);
    rows.get(h).push(i);
  });
  const top = Math.max(...r.heights);
  const width = 640;
  const rowGap = 60;
  const height = (top + 1) * rowGap + 20;
  const pos = [];
  for (const [h, ids] of rows) {
    ids.forEach((id, k) => {
      pos[id] = [((k + 1) * width) / (ids.length + 1), height - 20 - h * rowGap];
    });
  }
  const svg = svgEl("svg", { width, height });
  for (const [lo, hi] of r.covers) {
    svg.appendChild(svgEl("line", { x1: pos[lo][0], y1: pos[lo][1], x2: pos[hi][0], y2: pos[hi][1] }));
  }
  const cube = new Set(r.cube);
  r.elements.forEach((name, i) => {
    const c = svgEl("circle", { cx: pos[i][0], cy: pos[i][1], r: 5 });
    if (cube.has(name)) c.setAttribute("class", "cube");
    const t = svgEl("title", {});
    t.textContent = name;
    c.appendChild(t);
    svg.appendChild(c);
    if (r.elements.length <= 20) {
      const label = svgEl("text", { x: pos[i][0] + 7, y: pos[i][1] + 3 });
      label.textContent = name;
      svg.appendChild(label);
    }
  });
  return svg;
}

function runLattice() {
  const out = $("lat-out");
  const r = JSON.parse(lattice_report($("lat-spec").value));
  if (r.error) return showError(out, r.error);
  const lines = [
    `elements: ${r.size}`,
    r.modular
      ? "modular: yes"
      : `modular: no, witness x = ${r.witness.x}, a = ${r.witness.a}, b = ${r.witness.b}`,
    `rk0(top/bot) = ${r.rk0}, rk_bot(top/bot) = ${r.rk_bot}`,
  ];
  if (r.pregeometry) {
    lines.push(`quasi-atoms: ${r.pregeometry.quasi_atoms.length}, geometry rank ${r.pregeometry.rank}`);
  }
  out.innerHTML = "";
  out.appendChild(pre(lines.join("\n")));
  if (r.size <= 128) out.appendChild(hasse(r));
}

function runGrid() {
  const out = $("grid-out");
  const r = JSON.parse(grid_max($("grid-sizes").value, Number($("grid-density").value), Number($("grid-seed").value)));
  if (r.error) return showError(out, r.error);
  const sets = r.sets.map((s) => s.map((i) => i + 1));
  const lines = [`largest grid: m = ${r.m}`, ...sets.map((s, c) => `S_${c + 1} = {${s.join(", ")}}`)];
  out.innerHTML = "";
  out.appendChild(pre(lines.join("\n")));
  if (r.sizes.length !== 2) return;
  const present = new Set(r.tuples.map((t) => t.join(",")));
  const inRows = new Set(r.sets[0]);
  const inCols = new Set(r.sets[1]);
  const table = document.createElement("table");
  table.className = "grid";
  for (let i = 0; i < r.sizes[0]; i++) {
    const tr = document.createElement("tr");
    for (let j = 0; j < r.sizes[1]; j++) {
      const td = document.createElement("td");
      if (present.has(`${i},${j}`)) td.className = inRows.has(i) && inCols.has(j) ? "hit" : "in";
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  out.appendChild(table);
}

function runArtinSchreier() {
  const out = $("as-out");
  const r = JSON.parse(artin_schreier(Number($("as-p").value), $("as-x").value, Number($("as-n").value)));
  if (r.error) return showError(out, r.error);
  out.innerHTML = "";
  out.appendChild(pre(`x = ${r.x}\ny = ${r.y}\ny^p - y = x: ${r.verified ? "yes" : "no"}`));
}

await init();
$("lat-run").addEventListener("click", runLattice);
$("grid-run").addEventListener("click", runGrid);
$("as-run").addEventListener("click", runArtinSchreier);
$("grid-density").addEventListener("input", (e) => ($("grid-density-val").textContent = e.target.value));
runLattice();
runGrid();
runArtinSchreier();
