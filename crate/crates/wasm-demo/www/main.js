import init, { sidon_set, certify, bounds_table } from "./pkg/sidon_designs_wasm.js";

const $ = (id) => document.getElementById(id);

function params() {
  return [
    $("family").value,
    Number($("q").value),
    Number($("remove").value),
    $("literal").checked,
  ];
}

function clear(canvas) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

// Rank-2 groups are drawn as a grid, everything else on a circle of
// element indices.
function drawSet(set) {
  const canvas = $("set-canvas");
  const ctx = clear(canvas);
  const members = new Set(set.indices);
  const { width: w, height: h } = canvas;
  if (set.moduli.length === 2 && set.order <= 4096) {
    const [rows, cols] = set.moduli;
    const cell = Math.min((w - 20) / cols, (h - 20) / rows);
    for (let i = 0; i < set.order; i++) {
      const r = Math.floor(i / cols), c = i % cols;
      ctx.fillStyle = members.has(i) ? "#2f6fbd" : "#e4e8ec";
      ctx.fillRect(10 + c * cell, 10 + r * cell, Math.max(cell - 1, 1), Math.max(cell - 1, 1));
    }
    return;
  }
  const cx = w / 2, cy = h / 2, rad = Math.min(w, h) / 2 - 20;
  const pos = (i) => {
    const t = (2 * Math.PI * i) / set.order - Math.PI / 2;
    return [cx + rad * Math.cos(t), cy + rad * Math.sin(t)];
  };
  ctx.strokeStyle = "#e4e8ec";
  ctx.beginPath();
  ctx.arc(cx, cy, rad, 0, 2 * Math.PI);
  ctx.stroke();
  if (set.size <= 40) {
    ctx.strokeStyle = "rgba(47,111,189,0.25)";
    for (const a of set.indices) {
      for (const b of set.indices) {
        if (a < b) {
          ctx.beginPath();
          ctx.moveTo(...pos(a));
          ctx.lineTo(...pos(b));
          ctx.stroke();
        }
      }
    }
  }
  ctx.fillStyle = "#2f6fbd";
  for (const i of set.indices) {
    const [x, y] = pos(i);
    ctx.beginPath();
    ctx.arc(x, y, set.order > 300 ? 2 : 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function drawDifferences(counts) {
  const canvas = $("diff-canvas");
  const ctx = clear(canvas);
  if (!counts) {
    ctx.fillStyle = "#555";
    ctx.fillText("group too large to tabulate", 20, 30);
    return;
  }
  const max = Math.max(2, ...counts);
  const { width: w, height: h } = canvas;
  const bar = (w - 20) / counts.length;
  const unit = (h - 30) / max;
  ctx.strokeStyle = "#999";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(10, h - 10 - unit);
  ctx.lineTo(w - 10, h - 10 - unit);
  ctx.stroke();
  ctx.setLineDash([]);
  counts.forEach((c, i) => {
    ctx.fillStyle = c > 1 ? "#b42318" : "#2f6fbd";
    ctx.fillRect(10 + i * bar, h - 10 - c * unit, Math.max(bar, 1), c * unit);
  });
}

function showSet() {
  const set = JSON.parse(sidon_set(...params()));
  if (set.error) {
    $("set-summary").innerHTML = `<p class="bad">${set.error}</p>`;
    clear($("set-canvas"));
    clear($("diff-canvas"));
    return;
  }
  const status = set.is_sidon
    ? '<span class="ok">Sidon</span>'
    : `<span class="bad">not Sidon: ${set.violation}</span>`;
  const shown = set.elements.slice(0, 24).map((e) => `(${e.join(", ")})`).join(" ");
  $("set-summary").innerHTML =
    `<p><b>${set.label}</b> in Z<sub>${set.moduli.join("</sub> × Z<sub>")}</sub>: ` +
    `|G| = ${set.order}, |S| = ${set.size}. ${status}</p>` +
    `<p><small>${shown}${set.size > 24 ? " …" : ""}</small></p>`;
  drawSet(set);
  drawDifferences(set.difference_counts);
  $("certify-out").textContent = "not run yet";
}

function runCertify() {
  const r = JSON.parse(certify(...params()));
  if (r.error) {
    $("certify-out").textContent = r.error;
    return;
  }
  const lines = [
    `${r.label}: d = ${r.dim}, ${r.vectors} vectors, weight sum ${r.weight_sum}`,
    `tr M          = ${r.trace_m.toExponential(12)}  (target ${r.target})`,
    `tr M²         = ${r.potential.toExponential(12)}  (target ${r.target})`,
    `tolerance     = ${r.tol.toExponential(2)}`,
  ];
  if (r.character_route) {
    lines.push(`tr M² (chars) = ${r.character_route.potential.toExponential(12)}`);
  }
  lines.push(
    r.direct_residual === null
      ? "direct check  skipped (d too large for the browser)"
      : `‖M − P‖_F     = ${r.direct_residual.toExponential(3)}`,
  );
  lines.push(r.certified ? "CERTIFIED" : "NOT CERTIFIED");
  $("certify-out").textContent = lines.join("\n");
}

function runTable() {
  const res = JSON.parse(bounds_table(Number($("dmax").value)));
  if (res.error) {
    $("table-summary").innerHTML = `<p class="bad">${res.error}</p>`;
    return;
  }
  const rows = res.rows;
  const canvas = $("bounds-canvas");
  const ctx = clear(canvas);
  const { width: w, height: h } = canvas;
  const excess = (v, d) => v - d * d;
  const top = Math.max(...rows.map((r) => Math.max(excess(r.sidon, r.d), excess(r.previous, r.d))));
  const x = (d) => 40 + ((d - 2) / Math.max(rows.length - 1, 1)) * (w - 60);
  const y = (v) => h - 25 - (v / top) * (h - 45);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(40, 10);
  ctx.lineTo(40, h - 25);
  ctx.lineTo(w - 20, h - 25);
  ctx.stroke();
  ctx.fillStyle = "#555";
  ctx.fillText(String(top), 4, 16);
  ctx.fillText("0", 26, h - 25);
  ctx.fillText(`d = ${rows[rows.length - 1].d}`, w - 70, h - 8);
  const line = (key, color) => {
    ctx.strokeStyle = color;
    ctx.beginPath();
    rows.forEach((r, i) => {
      const p = [x(r.d), y(excess(r[key], r.d))];
      i === 0 ? ctx.moveTo(...p) : ctx.lineTo(...p);
    });
    ctx.stroke();
  };
  line("previous", "#c77c0e");
  line("sidon", "#2f6fbd");
  ctx.fillStyle = "#1a7f37";
  for (const r of rows) {
    if (r.sic !== null) ctx.fillRect(x(r.d) - 2, y(0) - 2, 4, 4);
  }
  const count = (c) => rows.filter((r) => r.class === c).length;
  const wins = rows.filter((r) => r.class === "sidon").map((r) => `${r.d} (${r.witness})`);
  $("table-summary").innerHTML =
    `<p>${rows.length} rows: ${count("sic")} with a known SIC, ${count("tie")} ties, ` +
    `${count("sidon")} where the Sidon bound is strictly best, ${count("previous")} where it loses.</p>` +
    `<p><small>Strict improvements: ${wins.join(", ") || "none"}</small></p>` +
    `<p><small>SIC data sha256 ${res.sha256}</small></p>`;
}

await init();
for (const id of ["family", "q", "remove", "literal"]) {
  $(id).addEventListener("change", showSet);
}
$("certify").addEventListener("click", runCertify);
$("table").addEventListener("click", runTable);
showSet();
runTable();
