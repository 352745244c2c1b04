/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const confidence_demo: (a: number, b: bigint) => [number, number, number, number];
export const shortest_paths_demo: (a: number, b: bigint, c: number) => [number, number, number, number];
export const triangle_demo: (a: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
