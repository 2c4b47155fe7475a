/* tslint:disable */
/* eslint-disable */

/**
 * A search in progress, advanced one round at a time.
 */
export class Walk {
    free(): void;
    [Symbol.dispose](): void;
    amplitudes(): Float64Array;
    markedProbability(): number;
    /**
     * `marks` is `row,col` pairs separated by `;`; empty places one mark
     * just past the grid center.
     */
    constructor(side: number, tile: number, tessellation: string, marks: string, order: string);
    reset(): void;
    /**
     * `side × side` RGBA pixels, ready for `ImageData`.
     */
    rgba(): Uint8Array;
    round(): number;
    side(): number;
    step(rounds: number): void;
}

/**
 * Bin colors as flat RGB triples, darkest first.
 */
export function palette(): Uint8Array;

/**
 * Group id of every cell, row-major.
 */
export function partitionGroups(side: number, tile: number, tessellation: string, which: string): Uint32Array;

/**
 * Marked probability for rounds `0..=rounds` as three consecutive series:
 * left-to-right order, right-to-left order, then global Grover.
 */
export function probabilityCurves(side: number, tile: number, marks: string, rounds: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_walk_free: (a: number, b: number) => void;
    readonly palette: () => [number, number];
    readonly partitionGroups: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly probabilityCurves: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly walk_amplitudes: (a: number) => [number, number];
    readonly walk_markedProbability: (a: number) => number;
    readonly walk_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number];
    readonly walk_reset: (a: number) => void;
    readonly walk_rgba: (a: number) => [number, number];
    readonly walk_round: (a: number) => number;
    readonly walk_side: (a: number) => number;
    readonly walk_step: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
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
