// View state and its pure transitions. The scene always mirrors the last
// server response; nothing here computes geometry.

import { FlipList, ServerState } from "./types.js";

export interface ViewState {
    sessionId: string | null;
    scene: ServerState | null;
    flips: FlipList | null;
    hover: number | null;
    busy: boolean;
    notice: string;
}

export function initialView(): ViewState {
    return { sessionId: null, scene: null, flips: null, hover: null, busy: false, notice: "" };
}

export function withSession(view: ViewState, scene: ServerState): ViewState {
    return { ...view, sessionId: scene.id, scene, flips: null, hover: null, notice: "" };
}

export function withScene(view: ViewState, scene: ServerState): ViewState {
    // a new scene invalidates the flip list and any hover preview
    return { ...view, scene, flips: null, hover: null };
}

export function withFlips(view: ViewState, flips: FlipList): ViewState {
    if (view.scene && flips.revision !== view.scene.revision) {
        return { ...view, notice: "flip list is stale; refresh" };
    }
    return { ...view, flips, notice: "" };
}

export function withHover(view: ViewState, hover: number | null): ViewState {
    return { ...view, hover };
}

export function withNotice(view: ViewState, notice: string): ViewState {
    return { ...view, notice };
}

export function withBusy(view: ViewState, busy: boolean): ViewState {
    return { ...view, busy };
}

export function canUndo(view: ViewState): boolean {
    return !!view.scene && view.scene.history_length > 0;
}

export function ageUpEnabled(view: ViewState): boolean {
    return !!view.scene && view.scene.can_age_up;
}

export function ageDownEnabled(view: ViewState): boolean {
    return !!view.scene && view.scene.can_age_down;
}
