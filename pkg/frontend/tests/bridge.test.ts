import * as fs from 'node:fs';
import * as path from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { configSchema, openCorpusPair, VarmatchBridgeError } from '../src/index';
import { decodePng } from '../src/png';
import { manifestName, parseManifest } from '../src/manifest';
import { buildCorpora, coreDecode, mktemp, runPython } from './helpers';

let root: string;
let lrDir: string;
let hrDir: string;

beforeAll(() => {
  root = mktemp('vb-unit-');
  ({ lrDir, hrDir } = buildCorpora(root));
});

afterAll(() => {
  fs.rmSync(root, { recursive: true, force: true });
});

function codeOf(fn: () => unknown): string {
  try {
    fn();
  } catch (err) {
    if (err instanceof VarmatchBridgeError) return err.code;
    throw err;
  }
  throw new Error('expected a VarmatchBridgeError');
}

describe('config validation', () => {
  it('applies core defaults', () => {
    const parsed = configSchema.parse({});
    expect(parsed.sigmaTSq).toBe(64.0);
    expect(parsed.lrPatch).toBe(32);
    expect(parsed.hrPatch).toBe(128);
    expect(parsed.batchSize).toBe(16);
    expect(parsed.muT).toBeNull();
  });

  it('rejects nonpositive variance thresholds at open time', () => {
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { sigmaTSq: 0 }))).toBe('config-error');
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { sigmaTSq: -4 }))).toBe('config-error');
  });

  it('rejects structural mistakes', () => {
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { batchSize: 40 }))).toBe('config-error');
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { muT: 0 }))).toBe('config-error');
    expect(codeOf(() =>
      openCorpusPair(lrDir, hrDir, { sigma: 64 } as never),
    )).toBe('config-error');
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { seed: -1 }))).toBe('config-error');
    expect(codeOf(() => openCorpusPair(lrDir, hrDir, { lrPatch: 0 }))).toBe('config-error');
  });
});

describe('core error mirroring', () => {
  it('surfaces empty corpora with the core code', () => {
    const empty = path.join(root, 'empty');
    fs.mkdirSync(empty, { recursive: true });
    expect(codeOf(() => openCorpusPair(empty, hrDir))).toBe('empty-corpus');
    expect(codeOf(() => openCorpusPair(path.join(root, 'absent'), hrDir))).toBe('empty-corpus');
  });

  it('surfaces starvation with the core code', () => {
    expect(codeOf(() =>
      openCorpusPair(lrDir, hrDir, { sigmaTSq: 1e-9, maxRetries: 0 }),
    )).toBe('insufficient-pairs');
  });

  it('surfaces a missing interpreter as an io error', () => {
    expect(codeOf(() =>
      openCorpusPair(lrDir, hrDir, {}, { python: 'no-such-python-xyz' }),
    )).toBe('io-error');
  });
});

describe('png decoding', () => {
  it.each(['gray', 'rgb', 'la', 'rgba', 'palette'])('matches the core decoder on %s', (kind) => {
    const file = path.join(root, `probe_${kind}.png`);
    runPython(['-c', `
import numpy as np
from PIL import Image as P
import sys
kind, out = sys.argv[1], sys.argv[2]
if kind == "gray":
    P.fromarray(np.arange(64, dtype=np.uint8).reshape(8, 8), mode="L").save(out)
elif kind == "rgb":
    P.fromarray((np.arange(192) % 256).astype(np.uint8).reshape(8, 8, 3), mode="RGB").save(out)
elif kind == "la":
    arr = np.zeros((8, 8, 2), dtype=np.uint8); arr[:, :, 0] = 31; arr[:, :, 1] = 130
    P.fromarray(arr, mode="LA").save(out)
elif kind == "rgba":
    arr = np.zeros((8, 8, 4), dtype=np.uint8)
    arr[:, :, 0], arr[:, :, 1], arr[:, :, 2], arr[:, :, 3] = 10, 20, 30, 99
    P.fromarray(arr, mode="RGBA").save(out)
else:
    P.fromarray(np.arange(64, dtype=np.uint8).reshape(8, 8)).convert("P").save(out)
`, kind, file]);
    const want = coreDecode(file);
    const got = decodePng(file);
    expect(got.channels).toBe(want.channels);
    expect(got.width).toBe(want.width);
    expect(got.height).toBe(want.height);
    expect(Array.from(got.planes)).toEqual(want.planes);
  });

  it('rejects 16-bit input', () => {
    const file = path.join(root, 'deep.png');
    runPython(['-c', `
from PIL import Image as P
import sys
P.new("I;16", (4, 4)).save(sys.argv[1])
`, file]);
    expect(codeOf(() => decodePng(file))).toBe('format-error');
  });

  it('rejects non-png bytes and missing files', () => {
    const file = path.join(root, 'not.png');
    fs.writeFileSync(file, 'plainly not a png');
    expect(codeOf(() => decodePng(file))).toBe('format-error');
    expect(codeOf(() => decodePng(path.join(root, 'nowhere.png')))).toBe('io-error');
  });
});

describe('manifest parsing', () => {
  it('round-trips a CLI manifest', () => {
    const outDir = path.join(root, 'mrun');
    runPython(['-m', 'varmatch', 'sample', '--lr-dir', lrDir, '--hr-dir', hrDir,
               '--out-dir', outDir, '--seed', '5']);
    const pairs = parseManifest(path.join(outDir, manifestName(0)));
    expect(pairs).toHaveLength(16);
    for (const pair of pairs) {
      expect(pair.lr.size).toBe(32);
      expect(pair.hr.size).toBe(128);
      expect(Math.abs(pair.lr.variance - pair.hr.variance)).toBeLessThan(64.0);
    }
  });

  it('rejects malformed lines and missing fields', () => {
    const bad = path.join(root, 'bad.jsonl');
    fs.writeFileSync(bad, '{"lr_image": "x.png"}\n');
    expect(codeOf(() => parseManifest(bad))).toBe('error');
    fs.writeFileSync(bad, 'not json\n');
    expect(codeOf(() => parseManifest(bad))).toBe('error');
  });
});

describe('iteration basics', () => {
  it('yields uint8 arrays of the documented shape, forever if asked', () => {
    const handle = openCorpusPair(lrDir, hrDir, { seed: 3 }, { chunk: 2 });
    try {
      for (let i = 0; i < 5; i++) {
        const { value, done } = handle.next();
        expect(done).toBe(false);
        expect(value.lrShape).toEqual([16, 3, 32, 32]);
        expect(value.hrShape).toEqual([16, 3, 128, 128]);
        expect(value.lrPixels).toBeInstanceOf(Uint8Array);
        expect(value.lrPixels.length).toBe(16 * 3 * 32 * 32);
        expect(value.hrPixels.length).toBe(16 * 3 * 128 * 128);
        expect(value.meta).toHaveLength(16);
      }
    } finally {
      handle.close();
    }
  });

  it('ends iteration after close', () => {
    const handle = openCorpusPair(lrDir, hrDir, { seed: 3 }, { chunk: 1 });
    handle.close();
    expect(handle.next().done).toBe(true);
  });
});
