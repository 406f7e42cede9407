import { spawnSync } from 'node:child_process';
import * as fs from 'node:fs';
import * as os from 'node:os';
import * as path from 'node:path';

export function mktemp(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

export function runPython(args: string[]): string {
  const proc = spawnSync('python3', args, { encoding: 'utf8', maxBuffer: 64 * 1024 * 1024 });
  if (proc.status !== 0) {
    throw new Error(`python3 ${args[0]} failed (${proc.status}): ${proc.stderr}`);
  }
  return proc.stdout;
}

const BUILD_CORPUS = `
import sys
import numpy as np
from pathlib import Path
from varmatch import Image, save_png

directory, count, side, cell, seed = (
    sys.argv[1], int(sys.argv[2]), int(sys.argv[3]), int(sys.argv[4]), int(sys.argv[5]))
amps = np.array([0, 2, 5, 8, 12, 16, 40])
weights = np.array([0.05, 0.15, 0.20, 0.20, 0.20, 0.15, 0.05])
rng = np.random.default_rng(seed)
d = Path(directory)
d.mkdir(parents=True, exist_ok=True)
for i in range(count):
    plane = np.full((side, side), 128, dtype=np.int64)
    for y in range(0, side, cell):
        for x in range(0, side, cell):
            amp = int(rng.choice(amps, p=weights))
            if amp:
                plane[y:y+cell, x:x+cell] += rng.integers(-amp, amp + 1, size=(cell, cell))
    arr = np.clip(plane, 0, 255).astype(np.uint8)
    save_png(Image(np.stack([arr, arr, arr])), d / f"img_{i:02d}.png")
`;

/** Deterministic mixed-variance RGB corpora for sampling tests. */
export function buildCorpora(root: string): { lrDir: string; hrDir: string } {
  const lrDir = path.join(root, 'lr');
  const hrDir = path.join(root, 'hr');
  runPython(['-c', BUILD_CORPUS, lrDir, '3', '96', '32', '101']);
  runPython(['-c', BUILD_CORPUS, hrDir, '3', '256', '128', '202']);
  return { lrDir, hrDir };
}

const DUMP_IMAGE = `
import json
import sys
from varmatch import load_png

img = load_png(sys.argv[1])
print(json.dumps({
    "channels": img.channels,
    "width": img.width,
    "height": img.height,
    "planes": img.planes.ravel().tolist(),
}))
`;

/** The core's decoded view of an image, as ground truth for the TS decoder. */
export function coreDecode(file: string): {
  channels: number;
  width: number;
  height: number;
  planes: number[];
} {
  return JSON.parse(runPython(['-c', DUMP_IMAGE, file]));
}
