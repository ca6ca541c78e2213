/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const iwasawa_factors: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const synthesis_error: (a: number, b: number, c: number) => [number, number, number];
export const synthesize_exp: (a: number, b: number, c: number) => [number, number, number, number];
export const transported_density: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
