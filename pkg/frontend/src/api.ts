// Thin typed client for the session API. The fetch function is injectable so
// tests can run against canned responses without a browser or server.

import { FlipList, GkzPayload, ServerState, SessionCreated } from "./types.js";

export type FetchLike = (url: string, init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
    constructor(public status: number, public payload: unknown) {
        super(`API error ${status}`);
    }
}

export class Client {
    constructor(
        private baseUrl: string = "",
        private fetchImpl: FetchLike = (url, init) => fetch(url, init),
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: Parameters<FetchLike>[1] = { method };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const resp = await this.fetchImpl(this.baseUrl + path, init);
        const payload = await resp.json();
        if (resp.status !== 200) {
            throw new ApiError(resp.status, payload);
        }
        return payload as T;
    }

    createSession(body: {
        points: [string, string][];
        k: number;
        init?: "coherent" | "file";
        heights?: string[];
        triangles?: number[][][];
    }): Promise<SessionCreated> {
        return this.request("POST", "/sessions", body);
    }

    getState(id: string): Promise<ServerState> {
        return this.request("GET", `/sessions/${id}`);
    }

    getFlips(id: string): Promise<FlipList> {
        return this.request("GET", `/sessions/${id}/flips`);
    }

    applyFlip(id: string, index: number, revision: number): Promise<ServerState> {
        return this.request("POST", `/sessions/${id}/flips/${index}`, { revision });
    }

    age(id: string, direction: "up" | "down"): Promise<ServerState> {
        return this.request("POST", `/sessions/${id}/age`, { direction });
    }

    undo(id: string): Promise<ServerState> {
        return this.request("POST", `/sessions/${id}/undo`);
    }

    getGkz(id: string): Promise<GkzPayload> {
        return this.request("GET", `/sessions/${id}/gkz`);
    }
}
