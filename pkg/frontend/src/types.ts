// Server payload shapes. All geometry decisions happen server-side; the
// client only consumes exact rational strings plus display approximations.

export type LabelIndices = number[];

export interface LabeledPoint {
    label: LabelIndices;
    text: string;
    used: boolean;
    exact: [string, string];
    approx: [number, number];
}

export interface TrianglePayload {
    labels: LabelIndices[];
    texts: string[];
    color: "white" | "black";
    key: string;
}

export interface ServerState {
    id: string;
    revision: number;
    n: number;
    level: number;
    points: LabeledPoint[];
    triangles: TrianglePayload[];
    hull: LabelIndices[];
    canonical_key: string;
    history_length: number;
    can_age_up: boolean;
    can_age_down: boolean;
}

export interface FlipPayload {
    index: number;
    type: "I" | "II" | "III" | "IV";
    direction: "forward" | "backward";
    before: LabelIndices[][];
    after: LabelIndices[][];
}

export interface FlipList {
    revision: number;
    flips: FlipPayload[];
}

export interface GkzPayload {
    gkz: string[];
    gkz_approx: number[];
    sum: string;
}

export interface SessionCreated {
    id: string;
    state: ServerState;
}
