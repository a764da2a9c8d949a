/* tslint:disable */
/* eslint-disable */

/**
 * Products over `(Z[ζ]/P^n)^×` for `n = 1..=n_max`, `ζ` a primitive
 * `2^t`-th root of unity.
 */
export function cyclo_demo(t: number, n_max: number): string;

/**
 * Moduli `2 ≤ A ≤ max_a` whose unit product is `-1`.
 */
export function gauss_table(max_a: bigint): string;

/**
 * Closed form and enumeration for `o/a`, `o = Z[x]/(poly)`.
 */
export function verify(poly: string, ideal: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cyclo_demo: (a: number, b: number) => [number, number];
    readonly gauss_table: (a: bigint) => [number, number];
    readonly verify: (a: number, b: number, c: number, d: number) => [number, number];
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
