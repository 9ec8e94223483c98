import init, { toyUserScores, residualTrace, degreeProfiles } from "./pkg/parw_demo.js";

const $ = (id) => document.getElementById(id);

function report(f) {
  try {
    $("error").textContent = "";
    f();
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

function plot(canvas, series, { log = false } = {}) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 30;
  ctx.clearRect(0, 0, w, h);
  const tf = (v) => (log ? Math.log10(Math.max(v, 1e-300)) : v);
  const all = series.flatMap((s) => s.values.map(tf));
  const lo = Math.min(...all), hi = Math.max(...all);
  const span = hi - lo || 1;
  const n = Math.max(...series.map((s) => s.values.length));
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad / 2, w - pad * 1.5, h - pad * 1.5);
  ctx.fillStyle = "#555";
  ctx.fillText((log ? "1e" : "") + hi.toPrecision(3), 2, pad / 2 + 10);
  ctx.fillText((log ? "1e" : "") + lo.toPrecision(3), 2, h - pad);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.beginPath();
    s.values.forEach((v, i) => {
      const x = pad + ((w - pad * 1.5) * i) / Math.max(n - 1, 1);
      const y = pad / 2 + (h - pad * 1.5) * (1 - (tf(v) - lo) / span);
      i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
    });
    ctx.stroke();
  }
}

function drawToy() {
  const alpha = 10 ** Number($("alpha").value);
  $("alpha-value").textContent = alpha.toPrecision(3);
  report(() => {
    const s = toyUserScores(alpha);
    const row = (name, k) =>
      `<tr><th>${name}</th>${[0, 1, 2].map((u) => `<td>${s[k + u].toFixed(5)}</td>`).join("")}</tr>`;
    $("toy").innerHTML =
      "<tr><th></th><th>U1</th><th>U2</th><th>U3</th></tr>" + row("Λ = αI", 0) + row("Λ = αD", 3);
  });
}

function drawTrace() {
  report(() => {
    const t = residualTrace(Number($("trace-alpha").value), 10 ** Number($("trace-gamma").value),
      Number($("trace-iters").value), 1);
    plot($("trace"), [{ values: [1, ...t], color: "#1f77b4" }], { log: true });
  });
}

function drawProfile() {
  report(() => {
    const b = Number($("buckets").value);
    const p = degreeProfiles(b, Number($("graph-seed").value));
    plot($("profile"), [
      { values: Array.from(p.slice(0, b)), color: "#1f77b4" },
      { values: Array.from(p.slice(b)), color: "#ff7f0e" },
    ]);
  });
}

await init();
$("alpha").addEventListener("input", drawToy);
$("trace-run").addEventListener("click", drawTrace);
$("profile-run").addEventListener("click", drawProfile);
drawToy();
drawTrace();
drawProfile();
