import { spawnSync } from 'node:child_process';
import { VarmatchBridgeError } from './errors';

/**
 * Run `varmatch sample` via the Python module entry point, throwing the
 * core's typed error (parsed from its stderr JSON) on a nonzero exit.
 */
export function runSample(
  python: string,
  lrDir: string,
  hrDir: string,
  outDir: string,
  numBatches: number,
  flags: string[],
): void {
  const args = [
    '-m', 'varmatch', 'sample',
    '--lr-dir', lrDir,
    '--hr-dir', hrDir,
    '--out-dir', outDir,
    '--num-batches', String(numBatches),
    ...flags,
  ];
  const proc = spawnSync(python, args, { encoding: 'utf8', maxBuffer: 64 * 1024 * 1024 });
  if (proc.error) {
    throw new VarmatchBridgeError('io-error', `cannot run ${python}: ${proc.error.message}`);
  }
  if (proc.status !== 0) {
    throw coreError(proc.stderr ?? '', proc.status);
  }
}

function coreError(stderr: string, status: number | null): VarmatchBridgeError {
  // the CLI's final stderr line is a JSON object {error, message, ...}
  const lines = stderr.trim().split('\n');
  for (let i = lines.length - 1; i >= 0; i--) {
    try {
      const doc = JSON.parse(lines[i]) as { error?: string; message?: string };
      if (typeof doc.error === 'string') {
        return new VarmatchBridgeError(doc.error, doc.message ?? doc.error);
      }
    } catch {
      // not a JSON line; keep scanning upward
    }
  }
  return new VarmatchBridgeError('error', `sampler exited ${status}: ${stderr.slice(-500)}`);
}
