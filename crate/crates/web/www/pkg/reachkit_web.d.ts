/* tslint:disable */
/* eslint-disable */

/**
 * Iwasawa factors of a unimodular matrix as `{"t1","t2","t3"}`.
 */
export function iwasawa_factors(m11: number, m12: number, m21: number, m22: number): string;

/**
 * Group-space error of the planner's schedule at a fixed ε, for the
 * convergence plot.
 */
export function synthesis_error(coeffs: Float64Array, eps: number): number;

/**
 * Plans a schedule reaching `exp(Σ coeffs·basis)` for d = 1
 * (coefficients a, b, c, ξ, η, ζ) and returns the planner report.
 */
export function synthesize_exp(coeffs: Float64Array, tol: number): string;

/**
 * A standard Gaussian transported by the reachable map with parameters
 * (α, t, r, s, w), sampled on `[-half, half]²` with `n` cells per axis,
 * indexed `[i_q * n + i_p]`. Mass pushed off the window is simply not drawn.
 */
export function transported_density(alpha: number, t: number, r: number, s: number, w: number, half: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly iwasawa_factors: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly synthesis_error: (a: number, b: number, c: number) => [number, number, number];
    readonly synthesize_exp: (a: number, b: number, c: number) => [number, number, number, number];
    readonly transported_density: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
