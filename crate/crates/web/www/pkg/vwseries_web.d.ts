/* tslint:disable */
/* eslint-disable */

/**
 * Euler characteristics of Hilbert schemes of points.
 */
export function hilbertNumbers(euler: number, count: number): string;

/**
 * `vw_{r,c2}` of a K3 for `c2 < order`.
 */
export function k3Series(rank: number, order: number): string;

/**
 * Pair invariant with its breakdown by composition.
 */
export function pairsFromVw(surface: string, charge: string, n: number, theory: string, table: string): string;

/**
 * Vafa-Witten invariants of every multiple from pair invariants.
 */
export function vwFromPairs(surface: string, charge: string, n: number, theory: string, pair_values: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly hilbertNumbers: (a: number, b: number) => [number, number];
    readonly k3Series: (a: number, b: number) => [number, number];
    readonly pairsFromVw: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly vwFromPairs: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
