import init, { Market, gammaSurface, simulatePath, controlCurves, ergodicGamma } from "./pkg/liquidation_web.js";

const AXES = ["r", "eta", "lambda", "k", "b", "sigma"];
const $ = (id) => document.getElementById(id);

function market() {
  const m = new Market();
  for (const key of ["lambda", "eta", "eta_std", "sigma", "b", "k", "phi", "r", "s0"]) {
    m[key] = Number($(key).value);
  }
  return m;
}

function guard(fn) {
  try {
    $("error").textContent = "";
    fn();
  } catch (e) {
    $("error").textContent = String(e.message ?? e);
  }
}

function fmt(x) {
  return Number(x).toPrecision(5);
}

// Blue (low) to yellow (high).
function colour(u) {
  const r = Math.round(255 * Math.min(1, Math.max(0, 1.6 * u - 0.3)));
  const g = Math.round(255 * Math.min(1, Math.max(0, 1.2 * u)));
  const b = Math.round(255 * Math.max(0, 1 - 1.4 * u));
  return `rgb(${r},${g},${b})`;
}

function drawSurface() {
  const nx = 40, ny = 30;
  const xs = [$("sx").value, +$("sx_lo").value, +$("sx_hi").value];
  const ys = [$("sy").value, +$("sy_lo").value, +$("sy_hi").value];
  const g = gammaSurface(market(), xs[0], xs[1], xs[2], nx, ys[0], ys[1], ys[2], ny);
  const lo = Math.min(...g), hi = Math.max(...g);
  const cv = $("surface"), ctx = cv.getContext("2d");
  const w = cv.width / nx, h = cv.height / ny;
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      ctx.fillStyle = colour(hi > lo ? (g[i * ny + j] - lo) / (hi - lo) : 0.5);
      ctx.fillRect(i * w, cv.height - (j + 1) * h, Math.ceil(w), Math.ceil(h));
    }
  }
  $("surface_info").textContent =
    `${xs[0]} →, ${ys[0]} ↑; γ from ${fmt(lo)} (blue) to ${fmt(hi)} (yellow)`;
  cv.onmousemove = (ev) => {
    const i = Math.min(nx - 1, Math.floor(ev.offsetX / w));
    const j = Math.min(ny - 1, Math.floor((cv.height - ev.offsetY) / h));
    const at = (a, k, n) => a[1] + ((a[2] - a[1]) * k) / (n - 1);
    $("surface_info").textContent =
      `${xs[0]}=${fmt(at(xs, i, nx))}, ${ys[0]}=${fmt(at(ys, j, ny))}: γ=${fmt(g[i * ny + j])}`;
  };
}

function line(ctx, xs, ys, box, opts = {}) {
  const [x0, y0, w, h] = box;
  const xmin = opts.xmin ?? Math.min(...xs), xmax = opts.xmax ?? Math.max(...xs);
  let ymin = opts.ymin ?? Math.min(...ys), ymax = opts.ymax ?? Math.max(...ys);
  if (ymax === ymin) { ymax += 1; ymin -= 1; }
  const px = (x) => x0 + ((x - xmin) / (xmax - xmin || 1)) * w;
  const py = (y) => y0 + h - ((y - ymin) / (ymax - ymin)) * h;
  ctx.strokeStyle = opts.colour ?? "#1f5fa8";
  ctx.setLineDash(opts.dash ?? []);
  ctx.beginPath();
  xs.forEach((x, k) => (k ? ctx.lineTo(px(x), py(ys[k])) : ctx.moveTo(px(x), py(ys[k]))));
  ctx.stroke();
  ctx.setLineDash([]);
  return { ymin, ymax, px, py };
}

function label(ctx, text, x, y) {
  ctx.fillStyle = "#444";
  ctx.fillText(text, x, y);
}

function drawPath() {
  const m = market();
  const flat = simulatePath(m, $("strategy").value.trim(), $("cash").value, +$("horizon").value, +$("dt").value, BigInt($("seed").value), 400);
  const t = [], q = [], pnl = [];
  for (let k = 0; k < flat.length; k += 5) {
    t.push(flat[k]); q.push(flat[k + 2]); pnl.push(flat[k + 4]);
  }
  const cv = $("path"), ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  const top = line(ctx, t, q, [40, 10, cv.width - 50, 150]);
  label(ctx, `Q ∈ [${fmt(top.ymin)}, ${fmt(top.ymax)}]`, 45, 22);
  // Skip the first few noisy samples of the running average.
  const skip = Math.floor(t.length / 20);
  const g = ergodicGamma(m);
  const bottom = line(ctx, t.slice(skip), pnl.slice(skip), [40, 190, cv.width - 50, 150], {
    colour: "#a8461f",
    xmin: t[0],
    xmax: t[t.length - 1],
    ymin: Math.min(g, ...pnl.slice(skip)),
    ymax: Math.max(g, ...pnl.slice(skip)),
  });
  line(ctx, [t[0], t[t.length - 1]], [g, g], [40, 190, cv.width - 50, 150], {
    colour: "#555", dash: [2, 3], ymin: bottom.ymin, ymax: bottom.ymax,
  });
  label(ctx, `final average PnL ${fmt(pnl[pnl.length - 1])}, γ ${fmt(g)}`, 45, 202);
}

function drawCurves() {
  const T = +$("c_horizon").value;
  const flat = controlCurves(market(), T, +$("c_alpha").value, +$("c_beta").value, 300);
  const erg = flat[0], disc = flat[1], t = [], f = [];
  for (let k = 2; k < flat.length; k += 2) { t.push(flat[k]); f.push(flat[k + 1]); }
  const cv = $("curves"), ctx = cv.getContext("2d");
  ctx.clearRect(0, 0, cv.width, cv.height);
  // Log scale: the terminal rate can exceed the ergodic one by orders of magnitude.
  const lf = f.map(Math.log10);
  const ymin = Math.min(...lf, Math.log10(disc)) - 0.05, ymax = Math.max(...lf, Math.log10(erg)) + 0.05;
  const box = [50, 10, cv.width - 70, cv.height - 30];
  line(ctx, t, lf, box, { ymin, ymax });
  line(ctx, [0, T], [Math.log10(erg), Math.log10(erg)], box, { ymin, ymax, colour: "#333", dash: [6, 4] });
  line(ctx, [0, T], [Math.log10(disc), Math.log10(disc)], box, { ymin, ymax, colour: "#2a8a3a", dash: [2, 3] });
  label(ctx, `log10 ν/q from ${fmt(ymin)} to ${fmt(ymax)}; t from 0 to ${T}`, 55, cv.height - 6);
  label(ctx, `ergodic ${fmt(erg)}, discounted ${fmt(disc)}, finite at T ${fmt(f[f.length - 1])}`, 55, 22);
}

function refreshGamma() {
  guard(() => ($("gamma").textContent = fmt(ergodicGamma(market()))));
}

await init();
for (const [id, initial] of [["sx", "r"], ["sy", "k"]]) {
  for (const a of AXES) $(id).add(new Option(a, a, false, a === initial));
}
$("market").addEventListener("change", refreshGamma);
$("surface_go").onclick = () => guard(drawSurface);
$("path_go").onclick = () => guard(drawPath);
$("curves_go").onclick = () => guard(drawCurves);
refreshGamma();
guard(drawSurface);
guard(drawPath);
guard(drawCurves);
