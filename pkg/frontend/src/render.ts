// Deterministic SVG/HTML string rendering of a server scene. Rendering uses
// only the server's display approximations; exact strings appear verbatim in
// labels and tooltips.

import { FlipPayload, LabelIndices, ServerState } from "./types.js";

export function labelText(label: LabelIndices): string {
    return label.join(".");
}

export function triangleKey(labels: LabelIndices[]): string {
    return labels.map(labelText).sort().join("-");
}

interface Viewport {
    minX: number;
    minY: number;
    width: number;
    height: number;
}

function fitToHull(state: ServerState): Viewport {
    const xs = state.points.map((p) => p.approx[0]);
    const ys = state.points.map((p) => p.approx[1]);
    const minX = Math.min(...xs);
    const maxX = Math.max(...xs);
    const minY = Math.min(...ys);
    const maxY = Math.max(...ys);
    const margin = 0.08 * Math.max(maxX - minX, maxY - minY, 1);
    return {
        minX: minX - margin,
        minY: minY - margin,
        width: maxX - minX + 2 * margin,
        height: maxY - minY + 2 * margin,
    };
}

function pointMap(state: ServerState): Map<string, [number, number]> {
    const map = new Map<string, [number, number]>();
    for (const p of state.points) {
        map.set(p.text, p.approx);
    }
    return map;
}

// y is flipped so the scene displays in the usual mathematical orientation
function toScreen(view: Viewport, xy: [number, number]): [number, number] {
    return [xy[0], view.minY + view.height - (xy[1] - view.minY)];
}

function fmt(value: number): string {
    return Number(value.toFixed(4)).toString();
}

function trianglePath(
    view: Viewport,
    points: Map<string, [number, number]>,
    texts: string[],
): string {
    const coords = texts.map((t) => {
        const xy = points.get(t);
        if (!xy) {
            throw new Error(`scene has no point labeled ${t}`);
        }
        return toScreen(view, xy);
    });
    return coords.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
}

export interface RenderOptions {
    hover?: FlipPayload | null;
    size?: number;
}

export function renderScene(state: ServerState, options: RenderOptions = {}): string {
    if (state.triangles.length === 0) {
        return renderLabelList(state);
    }
    const view = fitToHull(state);
    const points = pointMap(state);
    const hover = options.hover ?? null;
    const highlight = new Set(
        hover ? hover.before.map((labels) => triangleKey(labels)) : [],
    );
    const size = options.size ?? 640;
    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${fmt(view.minX)} ${fmt(view.minY)} ${fmt(view.width)} ${fmt(view.height)}" width="${size}" height="${size}" data-level="${state.level}" data-key="${state.canonical_key}">`,
    );

    const triangles = [...state.triangles].sort((a, b) => (a.key < b.key ? -1 : 1));
    for (const tri of triangles) {
        const classes = ["tri", tri.color];
        if (highlight.has(tri.key)) {
            classes.push("flip-before");
        }
        const fill = tri.color === "black" ? "#222222" : "#ffffff";
        parts.push(
            `<polygon class="${classes.join(" ")}" data-key="${tri.key}" points="${trianglePath(view, points, tri.texts)}" fill="${fill}" stroke="#444444" stroke-width="${fmt(view.width / 220)}"/>`,
        );
    }

    if (hover) {
        for (const labels of hover.after) {
            const texts = labels.map(labelText);
            parts.push(
                `<polygon class="flip-after" points="${trianglePath(view, points, texts)}" fill="none" stroke="#d4500f" stroke-width="${fmt(view.width / 120)}" stroke-dasharray="${fmt(view.width / 60)}"/>`,
            );
        }
    }

    const used = [...state.points]
        .sort((a, b) => (a.text < b.text ? -1 : 1));
    for (const p of used) {
        const [x, y] = toScreen(view, p.approx);
        const r = view.width / (p.used ? 90 : 160);
        const cls = p.used ? "pt used" : "pt unused";
        parts.push(
            `<circle class="${cls}" cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${p.used ? "#1d4ed8" : "#c9c9c9"}"/>`,
        );
        if (p.used) {
            parts.push(
                `<text class="lbl" x="${fmt(x + view.width / 70)}" y="${fmt(y - view.width / 90)}" font-size="${fmt(view.width / 26)}">${p.text}</text>`,
            );
        }
    }
    parts.push("</svg>");
    return parts.join("");
}

export function renderLabelList(state: ServerState): string {
    const items = state.points
        .map((p) => `<li>${p.text}: (${p.exact[0]}, ${p.exact[1]})</li>`)
        .join("");
    return `<ul class="label-list">${items}</ul>`;
}

export function renderFlipList(
    flips: FlipPayload[],
    hover: number | null,
): string {
    if (flips.length === 0) {
        return `<p class="notice">no flips available</p>`;
    }
    const rows = flips.map((f) => {
        const before = f.before.map((labels) => triangleKey(labels)).join(", ");
        const cls = f.index === hover ? "flip hover" : "flip";
        return (
            `<li class="${cls}" data-index="${f.index}">` +
            `<button class="apply" data-index="${f.index}">apply</button> ` +
            `<span class="type">Type ${f.type}</span> ` +
            `<span class="dir">${f.direction}</span> ` +
            `<span class="support">${before}</span></li>`
        );
    });
    return `<ol class="flip-list">${rows.join("")}</ol>`;
}

export function renderGkz(coords: string[], sum: string): string {
    const items = coords.map((c, i) => `<li>h<sub>${i + 1}</sub> share: ${c}</li>`).join("");
    return `<div class="gkz"><p>coordinate sum ${sum}</p><ul>${items}</ul></div>`;
}

export function renderStatus(state: ServerState | null, notice: string): string {
    if (!state) {
        return `<p class="status">${notice || "no session"}</p>`;
    }
    const base = `level ${state.level}, ${state.triangles.length} triangles, history ${state.history_length}`;
    return `<p class="status">${base}${notice ? " — " + notice : ""}</p>`;
}
