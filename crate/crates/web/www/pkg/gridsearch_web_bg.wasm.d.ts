/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_walk_free: (a: number, b: number) => void;
export const palette: () => [number, number];
export const partitionGroups: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const probabilityCurves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const walk_amplitudes: (a: number) => [number, number];
export const walk_markedProbability: (a: number) => number;
export const walk_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
export const walk_reset: (a: number) => void;
export const walk_rgba: (a: number) => [number, number];
export const walk_round: (a: number) => number;
export const walk_side: (a: number) => number;
export const walk_step: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
