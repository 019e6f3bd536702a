// Rendering tests against payloads captured from the live session API.

import { test } from "node:test";
import assert from "node:assert/strict";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { renderFlipList, renderLabelList, renderScene, triangleKey } from "../src/render.js";
import { FlipList, ServerState } from "../src/types.js";

const here = dirname(fileURLToPath(import.meta.url));

function fixture<T>(name: string): T {
    return JSON.parse(
        readFileSync(join(here, "..", "..", "test", "fixtures", name), "utf-8"),
    ) as T;
}

const before = fixture<ServerState>("q4_before.json");
const after = fixture<ServerState>("q4_after.json");
const flipsBefore = fixture<FlipList>("q4_flips_before.json");

test("scene shows four triangles, two filled black", () => {
    const svg = renderScene(before);
    const polygons = svg.match(/<polygon class="tri/g) ?? [];
    assert.equal(polygons.length, 4);
    const blacks = svg.match(/class="tri black"/g) ?? [];
    assert.equal(blacks.length, 2);
    const whites = svg.match(/class="tri white"/g) ?? [];
    assert.equal(whites.length, 2);
    assert.match(svg, /fill="#222222"/);
});

test("used vertices carry their dotted labels", () => {
    const svg = renderScene(before);
    for (const text of ["1.2", "1.3", "1.4", "2.3", "3.4"]) {
        assert.ok(svg.includes(`>${text}</text>`), `label ${text} missing`);
    }
    // 2.4 is not used in the initial state: dot only, no label
    assert.ok(!svg.includes(">2.4</text>"));
});

test("applying the Type III flip swaps the center label", () => {
    const svgBefore = renderScene(before);
    const svgAfter = renderScene(after);
    assert.ok(svgBefore.includes(">1.3</text>"));
    assert.ok(!svgBefore.includes(">2.4</text>"));
    assert.ok(svgAfter.includes(">2.4</text>"));
    assert.ok(!svgAfter.includes(">1.3</text>"));
});

test("rendering is deterministic", () => {
    assert.equal(renderScene(before), renderScene(before));
    assert.equal(renderScene(after), renderScene(after));
});

test("hover highlights the before-support and previews the after-support", () => {
    const flip = flipsBefore.flips[0];
    const svg = renderScene(before, { hover: flip });
    const highlighted = svg.match(/flip-before/g) ?? [];
    assert.equal(highlighted.length, flip.before.length);
    const previews = svg.match(/<polygon class="flip-after"/g) ?? [];
    assert.equal(previews.length, flip.after.length);
    assert.match(svg, /stroke-dasharray/);
});

test("flip list renders types and supports; empty list degrades to a notice", () => {
    const html = renderFlipList(flipsBefore.flips, null);
    assert.match(html, /Type III/);
    assert.match(html, /data-index="0"/);
    assert.equal(renderFlipList([], null), `<p class="notice">no flips available</p>`);
});

test("empty scene falls back to the label list", () => {
    const empty: ServerState = { ...before, triangles: [] };
    const html = renderScene(empty);
    assert.match(html, /^<ul class="label-list">/);
    assert.match(html, /1\.2: \(6, 0\)/);
    assert.equal(html, renderLabelList(empty));
});

test("triangle keys match the server's canonical form", () => {
    for (const tri of before.triangles) {
        assert.equal(triangleKey(tri.labels), tri.key);
    }
});
