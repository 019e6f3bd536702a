// DOM wiring: one in-flight mutation at a time, every scene from the server.

import { ApiError, Client } from "./api.js";
import {
    ageDownEnabled,
    ageUpEnabled,
    canUndo,
    initialView,
    ViewState,
    withBusy,
    withFlips,
    withHover,
    withNotice,
    withScene,
    withSession,
} from "./state.js";
import { renderFlipList, renderGkz, renderScene, renderStatus } from "./render.js";
import { FlipPayload } from "./types.js";

const client = new Client("");
let view: ViewState = initialView();

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) {
        throw new Error(`missing element #${id}`);
    }
    return node as T;
}

function currentHoverFlip(): FlipPayload | null {
    if (view.hover === null || !view.flips) {
        return null;
    }
    return view.flips.flips.find((f) => f.index === view.hover) ?? null;
}

function drawScene(): void {
    const scene = el<HTMLDivElement>("scene");
    scene.innerHTML = view.scene
        ? renderScene(view.scene, { hover: currentHoverFlip() })
        : "";
    for (const node of document.querySelectorAll<HTMLLIElement>("li.flip")) {
        node.classList.toggle("hover", Number(node.dataset.index) === view.hover);
    }
}

function draw(): void {
    drawScene();
    el<HTMLDivElement>("flips").innerHTML = view.flips
        ? renderFlipList(view.flips.flips, view.hover)
        : "";
    el<HTMLDivElement>("status").innerHTML = renderStatus(view.scene, view.notice);
    el<HTMLButtonElement>("age-up").disabled = view.busy || !ageUpEnabled(view);
    el<HTMLButtonElement>("age-down").disabled = view.busy || !ageDownEnabled(view);
    el<HTMLButtonElement>("undo").disabled = view.busy || !canUndo(view);
}

// hover and click are delegated so re-rendering never replaces a node under
// the pointer mid-gesture
function wireFlipDelegation(): void {
    const flips = el<HTMLDivElement>("flips");
    flips.addEventListener("mouseover", (event) => {
        const item = (event.target as HTMLElement).closest<HTMLLIElement>("li.flip");
        const hover = item ? Number(item.dataset.index) : null;
        if (hover !== view.hover) {
            view = withHover(view, hover);
            drawScene();
        }
    });
    flips.addEventListener("mouseleave", () => {
        if (view.hover !== null) {
            view = withHover(view, null);
            drawScene();
        }
    });
    flips.addEventListener("click", (event) => {
        const button = (event.target as HTMLElement).closest<HTMLButtonElement>("button.apply");
        if (button) {
            void applyFlip(Number(button.dataset.index));
        }
    });
}

async function refreshFlips(): Promise<void> {
    if (!view.sessionId) {
        return;
    }
    const flips = await client.getFlips(view.sessionId);
    view = withFlips(view, flips);
    draw();
    void refreshGkz();
}

async function refreshGkz(): Promise<void> {
    if (!view.sessionId) {
        return;
    }
    const payload = await client.getGkz(view.sessionId);
    el<HTMLDivElement>("gkz").innerHTML = renderGkz(payload.gkz, payload.sum);
}

async function mutate(action: () => Promise<void>): Promise<void> {
    if (view.busy) {
        return;
    }
    view = withBusy(view, true);
    draw();
    try {
        await action();
    } catch (err) {
        if (err instanceof ApiError && err.status === 409 && view.sessionId) {
            // stale flip: refresh the scene and flip list and carry on
            const scene = await client.getState(view.sessionId);
            view = withNotice(withScene(view, scene), "state changed; flips refreshed");
        } else {
            view = withNotice(view, String(err));
        }
    } finally {
        view = withBusy(view, false);
        draw();
        await refreshFlips();
    }
}

async function applyFlip(index: number): Promise<void> {
    await mutate(async () => {
        if (!view.sessionId || !view.flips) {
            return;
        }
        const scene = await client.applyFlip(view.sessionId, index, view.flips.revision);
        view = withScene(view, scene);
    });
}

async function startSession(): Promise<void> {
    const text = el<HTMLTextAreaElement>("points").value.trim();
    const k = Number(el<HTMLInputElement>("level").value);
    const points = text
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line.length > 0)
        .map((line) => line.split(/[\s,]+/).slice(0, 2) as [string, string]);
    await mutate(async () => {
        const created = await client.createSession({ points, k, init: "coherent" });
        view = withSession(view, created.state);
    });
}

function wireControls(): void {
    el<HTMLButtonElement>("start").onclick = () => void startSession();
    el<HTMLButtonElement>("age-up").onclick = () =>
        void mutate(async () => {
            if (view.sessionId) {
                view = withScene(view, await client.age(view.sessionId, "up"));
            }
        });
    el<HTMLButtonElement>("age-down").onclick = () =>
        void mutate(async () => {
            if (view.sessionId) {
                view = withScene(view, await client.age(view.sessionId, "down"));
            }
        });
    el<HTMLButtonElement>("undo").onclick = () =>
        void mutate(async () => {
            if (view.sessionId) {
                view = withScene(view, await client.undo(view.sessionId));
            }
        });
}

wireControls();
wireFlipDelegation();
draw();
