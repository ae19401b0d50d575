import init, { cluster, route, bounds } from "./pkg/ncc_wasm_demo.js";

const $ = (id) => document.getElementById(id);
const dim = () => Number($("m").value);

function show(id, f) {
  const out = $(id);
  out.classList.remove("error");
  try {
    return f(out);
  } catch (e) {
    out.classList.add("error");
    out.textContent = e.message ?? String(e);
  }
}

function drawCluster(view) {
  const ctx = $("canvas").getContext("2d");
  const { width, height } = ctx.canvas;
  const r = Math.min(width, height) / 2 - 30;
  const pos = (i) => {
    const a = -Math.PI / 2 + (2 * Math.PI * (i - 1)) / view.m;
    return [width / 2 + r * Math.cos(a), height / 2 + r * Math.sin(a)];
  };
  const line = (a, b, dash, color) => {
    ctx.setLineDash(dash);
    ctx.strokeStyle = color;
    ctx.beginPath();
    ctx.moveTo(...pos(a));
    ctx.lineTo(...pos(b));
    ctx.stroke();
  };
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 2;
  for (let i = 1; i <= view.m; i++) line(i, (i % view.m) + 1, [], "#000");
  for (const [a, b] of view.inner) line(a, b, [], "#06c");
  for (const [a, b] of view.outer) line(a, b, [6, 5], "#c60");
  ctx.setLineDash([]);
  ctx.font = "14px system-ui";
  for (let i = 1; i <= view.m; i++) {
    const [x, y] = pos(i);
    ctx.fillStyle = "#fff";
    ctx.beginPath();
    ctx.arc(x, y, 11, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#000";
    ctx.fillText(String(i), x - 4, y + 5);
  }
}

function onDraw() {
  show("cluster-out", (out) => {
    const view = JSON.parse(cluster(dim()));
    drawCluster(view);
    out.textContent = view.rotation
      .map((rot, k) => `direction ${k + 1} (degree ${view.degree[k]}): ${rot.join(" ")}`)
      .join("\n");
  });
}

function onRoute() {
  show("route-out", (out) => {
    const p = JSON.parse(route(dim(), $("from").value, $("to").value));
    out.innerHTML = "";
    const head = `${p.vertices.length - 1} steps: ${p.long} long, ${p.medium} medium, ${p.short} short; ` +
      `long directions [${p.long_directions.join(", ")}]\n\n${p.vertices[0]}\n`;
    out.append(head);
    p.kinds.forEach((kind, k) => {
      const span = document.createElement("span");
      span.className = kind;
      span.textContent = `${kind.padEnd(7)} ${p.vertices[k + 1]}\n`;
      out.append(span);
    });
  });
}

function onBounds() {
  show("bounds-out", (out) => {
    out.textContent = "computing...";
    // let the message paint before the blocking call
    setTimeout(() => show("bounds-out", (o) => {
      const r = JSON.parse(bounds(dim(), Number($("samples").value), Number($("seed").value)));
      o.textContent = JSON.stringify(r, null, 2);
    }), 20);
  });
}

function syncLabels() {
  const m = dim();
  if (m < 4 || m > 10) return;
  $("from").value = `b${"0".repeat(m)}:d1:p2`;
  $("to").value = `b11${"0".repeat(m - 2)}:d3:p2`;
}

await init();
$("draw").onclick = onDraw;
$("route").onclick = onRoute;
$("bounds").onclick = onBounds;
$("m").onchange = () => { syncLabels(); onDraw(); };
onDraw();
