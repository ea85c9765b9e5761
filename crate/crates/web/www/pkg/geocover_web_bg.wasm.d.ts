/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_clear: (a: number) => void;
export const demo_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const demo_pick: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_recenter: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const demo_set_tiles: (a: number, b: number) => void;
export const demo_summary: (a: number) => [number, number, number, number];
export const demo_svg: (a: number) => [number, number];
export const group_names: () => [number, number];
export const __externref_table_alloc: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_start: () => void;
