import { z } from 'zod';
import { VarmatchBridgeError } from './errors';

/**
 * Sampler configuration mirroring the core CLI's knobs.
 *
 * Stricter than the core in one place: sigmaTSq must be > 0 here, because a
 * zero threshold admits nothing under the strict inequality and an infinite
 * iterator over it could only ever throw. The core still accepts 0 for
 * diagnostic runs.
 */
export const configSchema = z
  .object({
    sigmaTSq: z.number().finite().positive().default(64.0),
    muT: z.number().finite().positive().nullable().default(null),
    lrPatch: z.number().int().min(1).default(32),
    hrPatch: z.number().int().min(1).default(128),
    scale: z.number().int().min(1).default(4),
    nLr: z.number().int().min(1).default(30),
    nHr: z.number().int().min(1).default(30),
    batchSize: z.number().int().min(1).default(16),
    maxRetries: z.number().int().min(0).default(8),
    seed: z.number().int().min(0).max(Number.MAX_SAFE_INTEGER).default(0),
  })
  .strict()
  .refine((c) => c.batchSize <= c.nLr, {
    message: 'batchSize must not exceed nLr',
  });

export type BridgeConfig = z.infer<typeof configSchema>;
export type BridgeConfigInput = z.input<typeof configSchema>;

export function parseConfig(raw: BridgeConfigInput | undefined): BridgeConfig {
  const result = configSchema.safeParse(raw ?? {});
  if (!result.success) {
    const detail = result.error.issues
      .map((issue) => `${issue.path.join('.') || '(config)'}: ${issue.message}`)
      .join('; ');
    throw new VarmatchBridgeError('config-error', `invalid config: ${detail}`);
  }
  return result.data;
}

/** CLI flag list for `varmatch sample` equivalent to this config. */
export function configToFlags(config: BridgeConfig): string[] {
  const flags = [
    '--sigma-t-sq', String(config.sigmaTSq),
    '--lr-patch', String(config.lrPatch),
    '--hr-patch', String(config.hrPatch),
    '--scale', String(config.scale),
    '--n-lr', String(config.nLr),
    '--n-hr', String(config.nHr),
    '--batch-size', String(config.batchSize),
    '--max-retries', String(config.maxRetries),
    '--seed', String(config.seed),
  ];
  if (config.muT !== null) {
    flags.push('--mu-t', String(config.muT));
  }
  return flags;
}
