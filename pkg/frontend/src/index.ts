export { openCorpusPair, CorpusPairHandle } from './batches';
export type { BatchView, OpenOptions } from './batches';
export { configSchema } from './config';
export type { BridgeConfig, BridgeConfigInput } from './config';
export { VarmatchBridgeError } from './errors';
export type { PairMeta, PatchMeta } from './manifest';

export const VERSION = '1.0.0';
