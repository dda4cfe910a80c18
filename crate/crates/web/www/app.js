import init, { equilibriumLadder, modelView, poissonRhoCurve } from "./pkg/schur_eq_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

function baseJson() {
  const kind = document.querySelector("input[name=kind]:checked").value;
  if (kind === "poisson") return JSON.stringify({ kind, params: { lambda: Number($("lambda").value) } });
  if (kind === "geometric") return JSON.stringify({ kind, params: { q: Number($("q").value) } });
  const pmf = $("pmf").value.split(/[\s,;]+/).filter((s) => s.length).map(Number);
  return JSON.stringify({ kind, pmf });
}

function call(out, f) {
  out.classList.remove("error");
  try {
    return JSON.parse(f());
  } catch (e) {
    out.classList.add("error");
    out.textContent = String(e);
    return null;
  }
}

function fmt(v) {
  return v === null || v === undefined ? "n/a" : Number(v).toPrecision(6);
}

function axes(ctx, w, h, pad) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(pad, pad / 2);
  ctx.lineTo(pad, h - pad);
  ctx.lineTo(w - pad / 2, h - pad);
  ctx.stroke();
}

// series: [{values, color}] drawn as grouped bars over x = 0..len-1
function bars(canvas, series, maxX) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  axes(ctx, w, h, pad);
  const len = Math.min(maxX, Math.max(...series.map((s) => s.values.length)));
  const top = Math.max(...series.flatMap((s) => s.values.slice(0, len)), 1e-12);
  const slot = (w - 1.5 * pad) / len;
  const bw = Math.max(1, (slot * 0.8) / series.length);
  series.forEach((s, k) => {
    ctx.fillStyle = s.color;
    s.values.slice(0, len).forEach((v, x) => {
      const bh = (v / top) * (h - 1.5 * pad);
      ctx.fillRect(pad + x * slot + k * bw, h - pad - bh, bw, bh);
    });
  });
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  const every = Math.ceil(len / 20);
  for (let x = 0; x < len; x += every) ctx.fillText(String(x), pad + x * slot, h - pad + 14);
  ctx.fillText(top.toPrecision(3), 2, pad / 2 + 8);
}

function runLadder() {
  const out = $("ladder-out");
  const order = Number($("order").value);
  const r = call(out, () => equilibriumLadder(baseJson(), order));
  if (!r) return;
  const series = r.levels.map((values, i) => ({ values, color: COLORS[i % COLORS.length] }));
  const visible = Math.max(...r.levels.map((l) => {
    let last = 0;
    l.forEach((p, x) => { if (p > 1e-4) last = x; });
    return last + 2;
  }));
  bars($("ladder"), series, visible);
  $("ladder-legend").innerHTML = series
    .map((s, i) => `<span><i class="swatch" style="background:${s.color}"></i>level ${i}</span>`)
    .join("");
  out.textContent = r.means.map((m, i) => `mean of level ${i}: ${fmt(m)}`).join("\n");
}

function heatmap(canvas, grid) {
  const ctx = canvas.getContext("2d");
  const size = grid.length;
  const cell = canvas.width / size;
  const top = Math.max(...grid.flat(), 1e-300);
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  grid.forEach((row, a) => row.forEach((p, b) => {
    const t = Math.sqrt(p / top);
    ctx.fillStyle = `rgb(${Math.round(255 - 220 * t)}, ${Math.round(255 - 150 * t)}, 255)`;
    // x1 down, x2 across
    ctx.fillRect(b * cell, a * cell, cell, cell);
  }));
  ctx.fillStyle = "#333";
  ctx.font = "10px sans-serif";
  ctx.fillText("x2 →", canvas.width - 40, 12);
  ctx.fillText("x1 ↓", 4, canvas.height - 6);
}

function runModel() {
  const out = $("model-out");
  const n = Number($("n").value);
  const r = call(out, () => modelView(baseJson(), n, Number($("grid").value)));
  if (!r) return;
  out.textContent = [
    `marginal mean      ${fmt(r.mean)}`,
    `marginal variance  ${fmt(r.variance)}`,
    `correlation rho    ${fmt(r.rho)}   (lower bound ${fmt(r.rho_lower_bound)})`,
    `P(X1 = 0, X2 = 0)  ${fmt(r.joint[0][0])}`,
  ].join("\n");
  heatmap($("joint"), r.joint);
  bars($("sum"), [{ values: r.sum, color: COLORS[0] }, { values: r.marginal, color: COLORS[1] }], 60);
}

function runCurve() {
  const out = $("curve-out");
  const n = Number($("curve-n").value);
  const r = call(out, () => poissonRhoCurve(n, Number($("lmin").value), Number($("lmax").value), 120));
  if (!r) return;
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 40;
  axes(ctx, w, h, pad);
  const lo = Math.log(r.lambda[0]);
  const hi = Math.log(r.lambda[r.lambda.length - 1]);
  const bottom = -1 / (n - 1);
  const px = (l) => pad + ((Math.log(l) - lo) / (hi - lo)) * (w - 1.5 * pad);
  const py = (v) => h - pad - (v / bottom) * (h - 1.5 * pad);
  ctx.strokeStyle = COLORS[0];
  ctx.lineWidth = 2;
  ctx.beginPath();
  r.lambda.forEach((l, k) => (k ? ctx.lineTo(px(l), py(r.rho[k])) : ctx.moveTo(px(l), py(r.rho[k]))));
  ctx.stroke();
  ctx.fillStyle = COLORS[1];
  r.lambda.forEach((l, k) => {
    if (r.closed_form[k] !== null && k % 6 === 0) ctx.fillRect(px(l) - 2, py(r.closed_form[k]) - 2, 4, 4);
  });
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(`rho = ${bottom.toFixed(3)}`, 2, pad / 2 + 8);
  ctx.fillText(`lambda = ${r.lambda[0]}`, pad, h - pad + 14);
  ctx.fillText(`${r.lambda[r.lambda.length - 1]}`, w - pad, h - pad + 14);
  const last = r.rho.length - 1;
  out.textContent = `rho at lambda = ${fmt(r.lambda[last])}: ${fmt(r.rho[last])}` +
    (r.closed_form[last] !== null ? `  (closed form ${fmt(r.closed_form[last])})` : "  (no closed form for this n)");
}

await init();
$("run-ladder").addEventListener("click", runLadder);
$("run-model").addEventListener("click", runModel);
$("run-curve").addEventListener("click", runCurve);
runLadder();
runModel();
runCurve();
