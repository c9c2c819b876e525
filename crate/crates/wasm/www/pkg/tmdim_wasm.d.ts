/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * The crossing-vertex graph with its type census and identity checks.
     */
    cvr(): string;
    static fromJson(text: string): Demo;
    /**
     * Undivided cells as `{level, index, rect}`, where `index` addresses
     * the cell within its level for [`Demo::refine`].
     */
    leaves(): string;
    levels(): number;
    /**
     * Mesh segments with the level that introduced them.
     */
    lines(): string;
    /**
     * A uniform `nx` by `ny` level-0 grid on `[0, nx] x [0, ny]`.
     */
    constructor(division: string, nx: number, ny: number);
    refine(level: number, index: number): void;
    /**
     * Dimension report as JSON. `space` is `d` or `m,n,alpha,beta`;
     * `methods` is a comma-separated subset of formula, cofactor, oracle.
     */
    report(space: string, methods: string, hbc: boolean): string;
    toJson(): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_cvr: (a: number) => [number, number];
    readonly demo_fromJson: (a: number, b: number) => [number, number, number];
    readonly demo_leaves: (a: number) => [number, number];
    readonly demo_levels: (a: number) => number;
    readonly demo_lines: (a: number) => [number, number];
    readonly demo_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_refine: (a: number, b: number, c: number) => [number, number];
    readonly demo_report: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly demo_toJson: (a: number) => [number, number];
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
